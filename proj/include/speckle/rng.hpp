#pragma once

#include <array>
#include <cstdint>

namespace speckle {

/// Counter-based deterministic generator (Philox4x32-10).
///
/// Every random draw in the simulator is addressed by (key, counter) rather
/// than produced from mutable generator state, so any pixel's noise or any
/// screen's phase can be computed independently, in any order, on any number
/// of threads, with bit-identical results.
class Philox {
public:
    using Block = std::array<uint32_t, 4>;

    /// One 128-bit block for a 64-bit key and a 128-bit counter split into
    /// (stream, index) plus an optional lane word.
    static Block block(uint64_t key, uint32_t stream, uint64_t index, uint32_t lane = 0);

    /// Raw form: full counter and key control.
    static Block block_raw(const Block& counter, uint32_t key0, uint32_t key1);

    /// Uniform double in [0, 1) with 53 random mantissa bits, from lanes 0-1
    /// of the addressed block.
    static double uniform01(uint64_t key, uint32_t stream, uint64_t index, uint32_t lane = 0);

    /// Pair of independent standard normals (Box-Muller over one block).
    static std::array<double, 2> normal_pair(uint64_t key, uint32_t stream, uint64_t index,
                                             uint32_t lane = 0);
};

// Stream ids keep independent purposes from colliding on one key.
namespace streams {
inline constexpr uint32_t kPatternPhase = 1;
inline constexpr uint32_t kScreenPhase = 2;   // + screen index via lane
inline constexpr uint32_t kCaptureNoise = 3;
inline constexpr uint32_t kDenseMatrix = 4;
inline constexpr uint32_t kSynthetic = 5;
}  // namespace streams

}  // namespace speckle
