#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "speckle/bitstring.hpp"
#include "speckle/common.hpp"
#include "speckle/entropy.hpp"
#include "speckle/image.hpp"

namespace speckle {

struct ExtractorConfig {
    uint64_t block_bits = 344;  // byte-aligned, >= out_bits_per_block
    bool span_images = false;   // blocks never cross frame boundaries by default
    static constexpr uint64_t out_bits_per_block = 256;

    void validate() const;
};

/// Row-major raster order, one byte per pixel.
std::vector<uint8_t> image_to_bytes(const SpeckleImage& img);

struct StreamProvenance {
    uint64_t puf_seed = 0;
    std::vector<uint64_t> pattern_seeds;
    std::string config_digest;
    uint64_t block_bits = 0;

    std::string to_json() const;
};

struct RandomBitstream {
    BitString bits;  // length is a multiple of 256; empty when input < one block
    StreamProvenance provenance;
};

/// Hash consecutive block_bits-sized input blocks with SHA-256 and
/// concatenate the digests in block order. The residual shorter than one
/// block is discarded (per frame unless span_images). Input smaller than one
/// block yields an empty stream, not an error.
RandomBitstream extract(std::span<const SpeckleImage> images, const ExtractorConfig& cfg,
                        int threads = 1);

/// Output-length law for given per-image raw bit counts.
uint64_t extracted_bits_for(std::span<const uint64_t> image_bits, const ExtractorConfig& cfg);

/// Byte histogram of one image's extracted stream, for uniformity reporting.
/// Empty extraction yields a histogram with total == 0.
GreyHistogram hashed_image_view(const SpeckleImage& img, const ExtractorConfig& cfg);

void write_bitstream(const RandomBitstream& stream, const std::filesystem::path& path);
void write_bitstream_ascii(const RandomBitstream& stream, const std::filesystem::path& path);
BitString read_bitstream(const std::filesystem::path& path);

}  // namespace speckle
