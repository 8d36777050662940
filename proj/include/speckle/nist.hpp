#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "speckle/bitstring.hpp"
#include "speckle/common.hpp"

namespace speckle::nist {

/// Read-only window into a packed MSB-first bit buffer.
class BitView {
public:
    BitView() = default;
    BitView(const uint8_t* bytes, size_t bit_offset, size_t nbits)
        : bytes_(bytes), offset_(bit_offset), nbits_(nbits) {}
    explicit BitView(const BitString& bits)
        : bytes_(bits.bytes().data()), offset_(0), nbits_(bits.size()) {}

    size_t size() const { return nbits_; }
    bool get(size_t i) const {
        const size_t bit = offset_ + i;
        return (bytes_[bit >> 3] >> (7 - (bit & 7))) & 1u;
    }
    BitView subview(size_t start, size_t len) const {
        return BitView(bytes_, offset_ + start, len);
    }
    size_t count_ones() const;

private:
    const uint8_t* bytes_ = nullptr;
    size_t offset_ = 0;
    size_t nbits_ = 0;
};

struct TestParams {
    int block_frequency_m = 128;
    int serial_m = 16;
    int apen_m = 10;
};

// Individual tests. Multi-valued tests return all their P-values
// (cumulative_sums: forward then reverse; serial: P1 then P2).
std::vector<double> frequency(BitView bits);
std::vector<double> block_frequency(BitView bits, int block_len);
std::vector<double> runs(BitView bits);
std::vector<double> longest_run_of_ones(BitView bits);
std::vector<double> cumulative_sums(BitView bits);
std::vector<double> dft(BitView bits);
std::vector<double> serial(BitView bits, int m);
std::vector<double> approximate_entropy(BitView bits, int m);

/// Enabled test names, battery order.
const std::vector<std::string>& test_names();
/// P-value stream labels per test ("cusum" -> {"cusum_forward", "cusum_reverse"}).
std::vector<std::string> stream_names(const std::string& test);
/// Dispatch by name; throws InvalidArgument for unknown names and
/// InsufficientData when bits are shorter than the test's minimum.
std::vector<double> run_test(const std::string& name, BitView bits, const TestParams& params);

}  // namespace speckle::nist
