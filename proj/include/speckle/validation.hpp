#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "speckle/bitstring.hpp"
#include "speckle/common.hpp"
#include "speckle/nist.hpp"
#include "speckle/stats_math.hpp"

namespace speckle {

struct HDFitReport {
    double mu = 0.0;
    double sigma = 0.0;  // population
    uint64_t n_pairs = 0;
    double dof = 0.0;
    GaussianFit fit;
    size_t word_bits = 0;
    std::vector<uint64_t> hd_counts;  // per integer distance, 0..word_bits

    std::string to_json() const;
};

/// Estimated independent bit count of a Hamming-distance distribution:
/// mu (1 - mu) / sigma^2. Equals the word length for ideal coin-flip words.
double degrees_of_freedom(double mu, double sigma);

/// All-pairs fractional Hamming analysis over fixed-length words with a
/// least-squares Gaussian fit to the distance histogram.
HDFitReport hd_fit(std::span<const BitString> words, int threads = 1);

/// Chop a bitstream into length-`word_bits` words (residual dropped).
std::vector<BitString> split_words(const BitString& bits, size_t word_bits = 256);

struct BatteryParams {
    uint64_t subseq_bits = 1'000'000;
    double alpha = 0.01;
    nist::TestParams test_params;
    int threads = 1;
};

/// Per P-value stream aggregation (one test can emit several streams).
struct StreamResult {
    std::string test;
    std::string stream;
    std::vector<double> pvalues;  // one per subsequence
    double uniformity_pt = 0.0;   // chi-square over 10 P-value bins
    double proportion = 0.0;      // fraction of P >= alpha
    double proportion_threshold = 0.0;
    bool pass_uniformity = false;
    bool pass_proportion = false;
};

/// Scalar summary per test: minimum over its streams.
struct TestSummary {
    std::string test;
    double min_uniformity_pt = 0.0;
    double min_proportion = 0.0;
    bool pass = false;
};

struct TestReport {
    uint64_t sequence_bits = 0;
    uint64_t subseq_bits = 0;
    size_t num_subsequences = 0;
    double alpha = 0.0;
    nist::TestParams params;
    std::vector<StreamResult> streams;
    std::vector<TestSummary> tests;
    bool overall_pass = false;

    std::string to_json() const;
    void write_pvalues_csv(const std::filesystem::path& path) const;
};

/// NIST-style pass-proportion threshold (1-a) - 3 sqrt(a (1-a) / m).
double proportion_threshold(double alpha, size_t num_subsequences);
/// Uniformity of P-values: chi-square over 10 equal bins.
double pvalue_uniformity(std::span<const double> pvalues);

/// Split into whole subsequences, run every enabled test on each, aggregate
/// uniformity and pass proportion per stream. Requires >= 10 subsequences.
TestReport run_battery(const BitString& bits, const BatteryParams& params);

}  // namespace speckle
