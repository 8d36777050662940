#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "speckle/config.hpp"
#include "speckle/entropy.hpp"
#include "speckle/extractor.hpp"
#include "speckle/fingerprint.hpp"
#include "speckle/validation.hpp"

namespace speckle {

struct FrameRecord {
    std::string file;
    std::string role;  // "intra" | "inter" | "generate"
    uint64_t pattern_seed = 0;
    uint64_t noise_seed = 0;
};

struct DatasetManifest {
    Dims dims;
    std::string config_digest;
    PufParams puf;
    std::vector<FrameRecord> frames;

    std::vector<FrameRecord> by_role(const std::string& role) const;
    void save(const std::filesystem::path& path) const;
    static DatasetManifest load(const std::filesystem::path& path);
};

struct SimulateResult {
    size_t frames = 0;
    std::filesystem::path manifest_path;
    double seconds = 0.0;
};

struct CharacterizeResult {
    DatasetStats euclid_intra, euclid_inter;
    DatasetStats hd_intra, hd_inter;
    bool separated = false;  // intra/inter Euclidean histograms disjoint
    double seconds = 0.0;
};

struct ThroughputReport {
    uint64_t frames = 0;
    uint64_t raw_bits_in = 0;
    uint64_t random_bits_out = 0;
    double extract_seconds = 0.0;
    double bits_per_second = 0.0;
    double simulate_seconds = -1.0;  // filled when the pipeline ran the simulation
    int threads = 1;

    // Camera-limited reference pipeline rate, printed for comparison.
    static constexpr double kReferenceRateBitsPerSecond = 0.96e9;

    std::string to_json() const;
};

struct ExtractResult {
    std::filesystem::path bin_path;
    uint64_t bits = 0;
    uint64_t block_bits = 0;
    std::string stream_digest;  // SHA-256 of the output bytes
    ThroughputReport throughput;
};

struct CorrelationSummary {
    size_t n_frames = 0;
    size_t raw_bytes = 0;
    size_t hashed_bytes = 0;
    double raw_mean_abs = 0.0;
    double raw_max_abs = 0.0;
    double hashed_mean_abs = 0.0;
    double hashed_max_abs = 0.0;
    double hashed_null_bound = 0.0;  // 4 / sqrt(hashed_bytes)
    double pattern_output_rho = 0.0;
    double pattern_output_bound = 0.0;

    std::string to_json() const;
};

struct PipelineResult {
    SimulateResult simulate;
    CharacterizeResult characterize;
    EntropyReport entropy;
    ExtractResult extract;
    CorrelationSummary correlation;
    TestReport test;
    bool pass = false;
};

struct BenchResult {
    uint64_t frames = 0;
    uint64_t raw_bits = 0;
    uint64_t out_bits = 0;
    uint64_t block_bits = 0;
    double seconds = 0.0;
    double bits_per_second = 0.0;
    int threads = 1;

    std::string to_json() const;
};

// Stage commands. Each reads/writes under cfg.run.out_dir; `log` (optional)
// receives one-line progress notes.
SimulateResult cmd_simulate(const PipelineConfig& cfg, std::ostream* log = nullptr);
CharacterizeResult cmd_characterize(const PipelineConfig& cfg, std::ostream* log = nullptr);
EntropyReport cmd_calibrate(const PipelineConfig& cfg, std::ostream* log = nullptr);
ExtractResult cmd_extract(const PipelineConfig& cfg, uint64_t block_bits_override = 0,
                          std::ostream* log = nullptr);
TestReport cmd_test(const PipelineConfig& cfg, const std::filesystem::path& bitstream = {},
                    std::ostream* log = nullptr);
CorrelationSummary analyze_correlations(const PipelineConfig& cfg, uint64_t block_bits = 0,
                                        std::ostream* log = nullptr);
PipelineResult cmd_pipeline(const PipelineConfig& cfg, std::ostream* log = nullptr);
BenchResult cmd_bench(const PipelineConfig& cfg, uint64_t raw_megabytes = 64,
                      std::ostream* log = nullptr);

}  // namespace speckle
