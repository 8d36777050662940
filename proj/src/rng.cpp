#include "speckle/rng.hpp"

#include <cmath>
#include <numbers>

namespace speckle {
namespace {

constexpr uint32_t kMult0 = 0xD2511F53u;
constexpr uint32_t kMult1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(Philox::Block& ctr, uint32_t k0, uint32_t k1) {
    const uint64_t p0 = static_cast<uint64_t>(kMult0) * ctr[0];
    const uint64_t p1 = static_cast<uint64_t>(kMult1) * ctr[2];
    const uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
    const uint32_t lo0 = static_cast<uint32_t>(p0);
    const uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
    const uint32_t lo1 = static_cast<uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
}

}  // namespace

Philox::Block Philox::block_raw(const Block& counter, uint32_t key0, uint32_t key1) {
    Block ctr = counter;
    round_once(ctr, key0, key1);
    for (int r = 1; r < 10; ++r) {
        key0 += kWeyl0;
        key1 += kWeyl1;
        round_once(ctr, key0, key1);
    }
    return ctr;
}

Philox::Block Philox::block(uint64_t key, uint32_t stream, uint64_t index, uint32_t lane) {
    const Block counter = {stream, static_cast<uint32_t>(index),
                           static_cast<uint32_t>(index >> 32), lane};
    return block_raw(counter, static_cast<uint32_t>(key), static_cast<uint32_t>(key >> 32));
}

double Philox::uniform01(uint64_t key, uint32_t stream, uint64_t index, uint32_t lane) {
    const Block b = block(key, stream, index, lane);
    const uint64_t mant = ((static_cast<uint64_t>(b[0]) << 32) | b[1]) >> 11;
    return static_cast<double>(mant) * 0x1.0p-53;
}

std::array<double, 2> Philox::normal_pair(uint64_t key, uint32_t stream, uint64_t index,
                                          uint32_t lane) {
    const Block b = block(key, stream, index, lane);
    const uint64_t m1 = ((static_cast<uint64_t>(b[0]) << 32) | b[1]) >> 11;
    const uint64_t m2 = ((static_cast<uint64_t>(b[2]) << 32) | b[3]) >> 11;
    // u1 in (0, 1] so the log is finite.
    const double u1 = (static_cast<double>(m1) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(m2) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace speckle
