#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "speckle/fingerprint.hpp"
#include "speckle/puf_sim.hpp"

namespace speckle {

/// Whole-pipeline configuration. One TOML file with full defaulting; every
/// report embeds the digest of the resolved form.
struct PipelineConfig {
    PufParams puf;

    struct Datasets {
        int intra = 100;   // repeated captures of one pattern
        int inter = 200;   // unique patterns, used for characterization + calibration
        int generate = 80; // extra unique patterns appended for stream generation
        uint64_t pattern_seed = 1000;
        bool operator==(const Datasets&) const = default;
    } datasets;

    NoiseParams noise{0.35, 2.0, 42};
    double exposure_percentile = 0.99;
    GaborParams gabor;

    struct Extract {
        uint64_t block_bits = 0;  // 0 = take from calibration report
        bool span_images = false;
        bool operator==(const Extract&) const = default;
    } extractor;

    struct Battery {
        uint64_t subseq_bits = 1'000'000;
        double alpha = 0.01;
        int block_frequency_m = 128;
        int serial_m = 16;
        int apen_m = 10;
        bool operator==(const Battery&) const = default;
    } battery;

    struct Run {
        std::string out_dir = "out";
        int threads = 0;  // 0 = SPECKLE_RNG_THREADS env or hardware
        bool export_ascii = false;
        bool operator==(const Run&) const = default;
    } run;

    void validate() const;
    std::string to_toml() const;
    std::string digest() const;  // SHA-256 of the canonical TOML form

    static PipelineConfig from_toml(const std::string& text);
    static PipelineConfig from_file(const std::filesystem::path& path);

    bool operator==(const PipelineConfig&) const;
};

}  // namespace speckle
