#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace topt {

// Fixed-length vector over GF(2), packed into 64-bit words.
// Bit i of the vector lives in word i/64, bit i%64.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t len) : len_(len), w_((len + 63) / 64, 0) {}

    static BitVec unit(std::size_t len, std::size_t idx) {
        BitVec v(len);
        v.set(idx, true);
        return v;
    }
    // Accepts a string of '0'/'1', bit 0 first.
    static BitVec from_string(std::string_view bits);

    std::size_t size() const { return len_; }

    bool get(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i, bool b) {
        const std::uint64_t m = std::uint64_t(1) << (i & 63);
        if (b) w_[i >> 6] |= m; else w_[i >> 6] &= ~m;
    }
    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t(1) << (i & 63); }

    BitVec& operator^=(const BitVec& o);
    BitVec& operator&=(const BitVec& o);
    friend BitVec operator^(BitVec a, const BitVec& b) { a ^= b; return a; }
    friend BitVec operator&(BitVec a, const BitVec& b) { a &= b; return a; }

    std::size_t popcount() const;
    bool parity() const { return popcount() & 1; }
    bool is_zero() const;
    bool any() const { return !is_zero(); }

    // |a ∧ b| mod 2 without materializing the AND.
    static bool and_parity(const BitVec& a, const BitVec& b);

    bool operator==(const BitVec& o) const { return len_ == o.len_ && w_ == o.w_; }
    bool operator!=(const BitVec& o) const { return !(*this == o); }

    // Lexicographic order on the bit sequence (bit 0 first, 0 < 1).
    bool lex_less(const BitVec& o) const;
    bool operator<(const BitVec& o) const { return lex_less(o); }

    // Index of the lowest set bit, or size() if none.
    std::size_t lowest_set() const;

    std::string to_string() const;
    std::uint64_t hash() const;

    const std::vector<std::uint64_t>& words() const { return w_; }

private:
    std::size_t len_ = 0;
    std::vector<std::uint64_t> w_;
};

struct BitVecHash {
    std::size_t operator()(const BitVec& v) const { return static_cast<std::size_t>(v.hash()); }
};

} // namespace topt
