#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "speckle/common.hpp"

namespace speckle {

/// Packed binary sequence, MSB-first within each byte. Trailing pad bits of
/// the last byte are kept zero so byte-level comparisons are well defined.
class BitString {
public:
    BitString() = default;
    explicit BitString(size_t nbits) : nbits_(nbits), bytes_((nbits + 7) / 8, 0) {}

    /// Wrap whole bytes; length is 8 * bytes.size().
    static BitString from_bytes(std::vector<uint8_t> bytes);

    /// Parse an ASCII string of '0'/'1' characters.
    static BitString from_ascii(const std::string& s);

    size_t size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }
    const std::vector<uint8_t>& bytes() const { return bytes_; }

    bool get(size_t i) const { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u; }
    void set(size_t i, bool v) {
        const uint8_t mask = static_cast<uint8_t>(1u << (7 - (i & 7)));
        if (v)
            bytes_[i >> 3] |= mask;
        else
            bytes_[i >> 3] &= static_cast<uint8_t>(~mask);
    }
    void push_back(bool v) {
        if ((nbits_ & 7) == 0) bytes_.push_back(0);
        ++nbits_;
        set(nbits_ - 1, v);
    }

    size_t count_ones() const;

    /// Number of differing bits against another string of equal length.
    size_t hamming_raw(const BitString& other) const;

    std::string to_ascii() const;

    bool operator==(const BitString&) const = default;

private:
    size_t nbits_ = 0;
    std::vector<uint8_t> bytes_;
};

}  // namespace speckle
