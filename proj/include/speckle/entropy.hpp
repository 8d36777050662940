#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "speckle/common.hpp"
#include "speckle/image.hpp"

namespace speckle {

/// Pooled 8-bit symbol counts.
struct GreyHistogram {
    std::array<uint64_t, 256> counts{};
    uint64_t total = 0;

    void add_image(const SpeckleImage& img);
    void add_bytes(std::span<const uint8_t> bytes);
    void merge(const GreyHistogram& other);
    double p_max() const;
};

GreyHistogram grey_histogram(std::span<const SpeckleImage> images);

/// Min-entropy of the pooled symbol distribution, bits per 8-bit symbol.
double min_entropy(const GreyHistogram& hist);

/// Input block length (bits) needed so a hash with out_bits output can claim
/// full entropy, given h_min bits of entropy per 8 raw bits. Rounded up to a
/// whole number of bytes.
uint64_t required_block_bits(double h_min, uint64_t out_bits = 256);

struct EntropyReport {
    double h_min = 0.0;            // full precision
    double h_min_rounded = 0.0;    // 3 decimal places, for display
    double p_max = 0.0;
    double extraction_ratio = 0.0;  // h_min / 8, full precision
    uint64_t block_bits = 0;
    uint64_t out_bits = 256;
    uint64_t total_symbols = 0;
    std::string source;

    std::string to_json() const;
    static EntropyReport from_json(const std::string& text);
};

EntropyReport make_entropy_report(const GreyHistogram& hist, const std::string& source,
                                  uint64_t out_bits = 256);

void write_grey_histogram_csv(const GreyHistogram& hist, const std::filesystem::path& path);

}  // namespace speckle
