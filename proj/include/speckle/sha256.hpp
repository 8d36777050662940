#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

namespace speckle {

/// SHA-256 per FIPS 180-4. Streaming interface plus a one-shot helper.
class Sha256 {
public:
    using Digest = std::array<uint8_t, 32>;

    Sha256() { reset(); }

    void reset();
    void update(const uint8_t* data, size_t len);
    void update(std::span<const uint8_t> data) { update(data.data(), data.size()); }
    Digest finish();

    static Digest hash(std::span<const uint8_t> data);
    static Digest hash(const std::string& s);

private:
    void compress(const uint8_t block[64]);

    uint32_t state_[8];
    uint8_t buffer_[64];
    uint64_t total_len_ = 0;
    size_t buffer_len_ = 0;
};

std::string to_hex(const Sha256::Digest& d);

}  // namespace speckle
