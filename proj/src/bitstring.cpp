#include "speckle/bitstring.hpp"

#include <bit>
#include <cstring>

namespace speckle {

BitString BitString::from_bytes(std::vector<uint8_t> bytes) {
    BitString b;
    b.nbits_ = bytes.size() * 8;
    b.bytes_ = std::move(bytes);
    return b;
}

BitString BitString::from_ascii(const std::string& s) {
    BitString b;
    for (char c : s) {
        if (c == '0' || c == '1') {
            b.push_back(c == '1');
        } else if (c == ' ' || c == '\n' || c == '\r' || c == '\t') {
            continue;
        } else {
            throw InvalidArgument("bitstring: unexpected character in ASCII bits");
        }
    }
    return b;
}

size_t BitString::count_ones() const {
    size_t n = 0;
    for (uint8_t byte : bytes_) n += std::popcount(byte);
    return n;
}

size_t BitString::hamming_raw(const BitString& other) const {
    if (nbits_ != other.nbits_)
        throw InvalidArgument("bitstring: length mismatch in hamming distance");
    size_t n = 0;
    size_t i = 0;
    const size_t nb = bytes_.size();
    // Word-at-a-time over the aligned prefix.
    for (; i + 8 <= nb; i += 8) {
        uint64_t a, b;
        std::memcpy(&a, bytes_.data() + i, 8);
        std::memcpy(&b, other.bytes_.data() + i, 8);
        n += std::popcount(a ^ b);
    }
    for (; i < nb; ++i) n += std::popcount(static_cast<uint8_t>(bytes_[i] ^ other.bytes_[i]));
    return n;
}

std::string BitString::to_ascii() const {
    std::string s;
    s.reserve(nbits_);
    for (size_t i = 0; i < nbits_; ++i) s.push_back(get(i) ? '1' : '0');
    return s;
}

}  // namespace speckle
