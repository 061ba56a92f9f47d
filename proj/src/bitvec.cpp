#include "topt/bitvec.hpp"

#include <bit>
#include <cassert>
#include <stdexcept>

namespace topt {

BitVec BitVec::from_string(std::string_view bits) {
    BitVec v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') v.set(i, true);
        else if (bits[i] != '0') throw std::invalid_argument("BitVec::from_string: expected 0/1");
    }
    return v;
}

BitVec& BitVec::operator^=(const BitVec& o) {
    assert(len_ == o.len_);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
}

BitVec& BitVec::operator&=(const BitVec& o) {
    assert(len_ == o.len_);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
}

std::size_t BitVec::popcount() const {
    std::size_t n = 0;
    for (std::uint64_t w : w_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool BitVec::is_zero() const {
    for (std::uint64_t w : w_) if (w) return false;
    return true;
}

bool BitVec::and_parity(const BitVec& a, const BitVec& b) {
    assert(a.len_ == b.len_);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < a.w_.size(); ++i) acc ^= a.w_[i] & b.w_[i];
    return std::popcount(acc) & 1;
}

bool BitVec::lex_less(const BitVec& o) const {
    assert(len_ == o.len_);
    for (std::size_t i = 0; i < w_.size(); ++i) {
        const std::uint64_t d = w_[i] ^ o.w_[i];
        if (d) {
            const int bit = std::countr_zero(d);
            return ((w_[i] >> bit) & 1u) == 0;
        }
    }
    return false;
}

std::size_t BitVec::lowest_set() const {
    for (std::size_t i = 0; i < w_.size(); ++i)
        if (w_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(w_[i]));
    return len_;
}

std::string BitVec::to_string() const {
    std::string s(len_, '0');
    for (std::size_t i = 0; i < len_; ++i) if (get(i)) s[i] = '1';
    return s;
}

std::uint64_t BitVec::hash() const {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ len_;
    for (std::uint64_t w : w_) {
        h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

} // namespace topt
