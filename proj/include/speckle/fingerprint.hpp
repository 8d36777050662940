#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "speckle/bitstring.hpp"
#include "speckle/common.hpp"
#include "speckle/image.hpp"

namespace speckle {

struct NormalizedImage {
    Dims dims;
    std::vector<double> values;  // grey / 255, row-major
};

NormalizedImage normalize_image(const SpeckleImage& img);

/// sqrt of the summed squared pixel differences.
double euclidean_distance(const NormalizedImage& a, const NormalizedImage& b);

struct GaborParams {
    double wavelength = 8.0;  // carrier period, pixels
    double sigma = 4.0;       // Gaussian envelope, pixels
    double theta_deg = 45.0;  // carrier orientation
    int stride = 8;           // fingerprint grid spacing, pixels

    int kernel_radius() const;
    /// Fingerprint layout for a given image size; throws if the image is
    /// smaller than the kernel support.
    Dims grid_for(Dims image) const;
    bool operator==(const GaborParams&) const = default;
};

/// Binary fingerprint: sign of the real response of a single zero-mean
/// complex Gabor kernel sampled on a strided grid, row-major, MSB-first.
BitString gabor_hash(const SpeckleImage& img, const GaborParams& params = {});

/// Fractional Hamming distance in [0, 1]; lengths must match and be > 0.
double hamming_distance(const BitString& a, const BitString& b);

struct Histogram {
    std::vector<double> edges;     // bins + 1 ascending edges
    std::vector<uint64_t> counts;  // per bin
};

/// Freedman-Diaconis binning when bins == 0.
Histogram make_histogram(std::span<const double> values, int bins = 0);
void write_histogram_csv(const Histogram& h, const std::filesystem::path& path);

struct DatasetStats {
    double mean = 0.0;
    double stddev = 0.0;  // population
    double cv = 0.0;      // stddev / mean; 0 when mean is 0
    double min = 0.0;
    double max = 0.0;
    size_t n_items = 0;
    uint64_t n_pairs = 0;
    Histogram histogram;
};

/// Stats over explicit per-pair metric values (index order fixed by caller).
DatasetStats stats_from_values(const std::vector<double>& values, size_t n_items, int bins = 0);

/// Metric over all unordered pairs of items. Pair values are computed in
/// parallel into index-addressed slots and reduced in fixed order.
DatasetStats pairwise_euclidean_stats(std::span<const NormalizedImage> items, int threads = 1,
                                      int bins = 0);
DatasetStats pairwise_hamming_stats(std::span<const BitString> items, int threads = 1);

}  // namespace speckle
