#include "speckle/extractor.hpp"

#include <bit>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "speckle/rng.hpp"
#include "speckle/sha256.hpp"
#include "speckle/validation.hpp"

using namespace speckle;
namespace fs = std::filesystem;

namespace {

SpeckleImage random_image(uint64_t seed, Dims dims) {
    SpeckleImage img(dims);
    for (size_t i = 0; i < img.pixels(); ++i)
        img.data()[i] = static_cast<uint8_t>(Philox::block(seed, streams::kSynthetic, i)[0]);
    return img;
}

}  // namespace

TEST_CASE("image_to_bytes is row-major") {
    SpeckleImage img({2, 2});
    img.at(0, 0) = 1;
    img.at(1, 0) = 2;
    img.at(0, 1) = 3;
    img.at(1, 1) = 4;
    CHECK(image_to_bytes(img) == std::vector<uint8_t>{1, 2, 3, 4});
    CHECK(image_to_bytes(SpeckleImage({3, 3}, 0)) == std::vector<uint8_t>(9, 0));
}

TEST_CASE("extractor config validation") {
    ExtractorConfig cfg;
    cfg.block_bits = 344;
    CHECK_NOTHROW(cfg.validate());
    cfg.block_bits = 200;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
    cfg.block_bits = 345;
    CHECK_THROWS_AS(cfg.validate(), InvalidArgument);
}

TEST_CASE("extract output length law") {
    const SpeckleImage img = random_image(1, {256, 256});
    ExtractorConfig cfg;
    cfg.block_bits = 344;
    const RandomBitstream stream = extract(std::vector<SpeckleImage>{img}, cfg);
    CHECK(stream.bits.size() == 390144);  // floor(524288 / 344) * 256
    CHECK(stream.bits.size() % 256 == 0);

    // The law helper agrees for multiple frames and both spanning modes.
    std::vector<SpeckleImage> frames{random_image(2, {64, 48}), random_image(3, {64, 48}),
                                     random_image(4, {64, 48})};
    std::vector<uint64_t> bits_per_frame(3, 64 * 48 * 8);
    for (bool span : {false, true}) {
        cfg.span_images = span;
        const RandomBitstream s = extract(frames, cfg);
        CHECK(s.bits.size() == extracted_bits_for(bits_per_frame, cfg));
    }
}

TEST_CASE("per-frame residuals are discarded unless spanning") {
    // 50-byte frames with 43-byte blocks: 1 block per frame alone,
    // 3 blocks from 150 spanned bytes.
    std::vector<SpeckleImage> frames{random_image(5, {10, 5}), random_image(6, {10, 5}),
                                     random_image(7, {10, 5})};
    ExtractorConfig cfg;
    cfg.block_bits = 344;
    cfg.span_images = false;
    CHECK(extract(frames, cfg).bits.size() == 3 * 256);
    cfg.span_images = true;
    CHECK(extract(frames, cfg).bits.size() == 3 * 256);

    // 100-byte frames: 2 blocks each with 14 bytes left over; spanning
    // recovers one extra block from the 42... (3*14=42 < 43) none extra.
    std::vector<SpeckleImage> bigger{random_image(8, {20, 5}), random_image(9, {20, 5})};
    cfg.span_images = false;
    CHECK(extract(bigger, cfg).bits.size() == 4 * 256);
    cfg.span_images = true;
    CHECK(extract(bigger, cfg).bits.size() == 4 * 256);
}

TEST_CASE("output-length law at full camera resolution") {
    ExtractorConfig cfg;
    cfg.block_bits = 344;
    // One 2448x2048 frame: 116593 blocks.
    const std::vector<uint64_t> one_frame{2448ull * 2048 * 8};
    CHECK(extracted_bits_for(one_frame, cfg) == 29'847'808);
    // 36 successive frames: just over 1 Gbit.
    const std::vector<uint64_t> frames(36, 2448ull * 2048 * 8);
    CHECK(extracted_bits_for(frames, cfg) == 36ull * 116593 * 256);
    CHECK(extracted_bits_for(frames, cfg) > 1'000'000'000);
    // Desk scale: 100 frames of 256x256.
    const std::vector<uint64_t> desk(100, 256ull * 256 * 8);
    CHECK(extracted_bits_for(desk, cfg) == 39'014'400);
}

TEST_CASE("extract is bit-identical for any thread count") {
    std::vector<SpeckleImage> frames;
    for (int f = 0; f < 6; ++f) frames.push_back(random_image(100 + f, {64, 64}));
    ExtractorConfig cfg;
    cfg.block_bits = 344;
    const RandomBitstream s1 = extract(frames, cfg, 1);
    const RandomBitstream s4 = extract(frames, cfg, 4);
    const RandomBitstream s7 = extract(frames, cfg, 7);
    CHECK(s1.bits == s4.bits);
    CHECK(s1.bits == s7.bits);
}

TEST_CASE("first output block is the SHA-256 of the first input block") {
    const SpeckleImage img = random_image(11, {43, 8});  // 344 bytes = 8 blocks
    ExtractorConfig cfg;
    cfg.block_bits = 344;
    const RandomBitstream stream = extract(std::vector<SpeckleImage>{img}, cfg);
    const auto digest =
        Sha256::hash(std::span<const uint8_t>(img.data().data(), 43));
    for (size_t i = 0; i < 32; ++i) CHECK(stream.bits.bytes()[i] == digest[i]);
}

TEST_CASE("input smaller than one block yields the empty-output signal") {
    const SpeckleImage tiny = random_image(12, {8, 4});  // 32 bytes < 43
    ExtractorConfig cfg;
    cfg.block_bits = 344;
    const RandomBitstream stream = extract(std::vector<SpeckleImage>{tiny}, cfg);
    CHECK(stream.bits.size() == 0);
    CHECK(stream.bits.empty());
    // ... and an empty histogram from the view.
    const GreyHistogram h = hashed_image_view(tiny, cfg);
    CHECK(h.total == 0);
}

TEST_CASE("single-bit flip flips about half of the block's output bits") {
    std::vector<uint8_t> block(43);
    for (size_t i = 0; i < block.size(); ++i)
        block[i] = static_cast<uint8_t>(Philox::block(13, streams::kSynthetic, i)[0]);
    const auto base = Sha256::hash(block);
    for (size_t bit = 0; bit < 344; ++bit) {
        auto mutated = block;
        mutated[bit / 8] ^= static_cast<uint8_t>(0x80 >> (bit % 8));
        const auto changed = Sha256::hash(mutated);
        size_t flipped = 0;
        for (size_t i = 0; i < 32; ++i)
            flipped += static_cast<size_t>(std::popcount(
                static_cast<unsigned>(base[i] ^ changed[i])));
        // binomial(256, 1/2) within 5 sigma: 128 +- 40
        CHECK(flipped >= 88);
        CHECK(flipped <= 168);
    }
}

TEST_CASE("identical blocks yield identical digests (no salting)") {
    SpeckleImage constant({43, 2}, 7);  // two identical 43-byte blocks
    ExtractorConfig cfg;
    cfg.block_bits = 344;
    const RandomBitstream stream = extract(std::vector<SpeckleImage>{constant}, cfg);
    REQUIRE(stream.bits.bytes().size() == 64);
    for (size_t i = 0; i < 32; ++i)
        CHECK(stream.bits.bytes()[i] == stream.bits.bytes()[32 + i]);

    // The hashed view of a constant image is the byte histogram of one
    // repeated digest: every nonzero count is a multiple of the block count.
    SpeckleImage big_constant({43, 16}, 7);
    const GreyHistogram h = hashed_image_view(big_constant, cfg);
    CHECK(h.total == 16 * 32);
    for (int v = 0; v < 256; ++v) CHECK(h.counts[v] % 16 == 0);
}

TEST_CASE("extracted words from random input have ideal pairwise HD") {
    std::vector<SpeckleImage> frames;
    for (int f = 0; f < 10; ++f) frames.push_back(random_image(500 + f, {128, 128}));
    ExtractorConfig cfg;
    cfg.block_bits = 344;
    const RandomBitstream stream = extract(frames, cfg, 2);
    const auto words = split_words(stream.bits, 256);
    REQUIRE(words.size() >= 1000);
    const HDFitReport fit = hd_fit(std::span<const BitString>(words.data(), 1500), 2);
    CHECK(fit.mu == doctest::Approx(0.5).epsilon(0.01));           // 0.5 +- 0.005
    CHECK(std::fabs(fit.sigma - 0.03125) < 0.003);
    CHECK(fit.dof == doctest::Approx(256.0).epsilon(0.05));
}

TEST_CASE("bitstream file round trip and ascii export") {
    const SpeckleImage img = random_image(21, {64, 64});
    ExtractorConfig cfg;
    cfg.block_bits = 344;
    RandomBitstream stream = extract(std::vector<SpeckleImage>{img}, cfg);
    const fs::path dir = fs::temp_directory_path() / "speckle_extract_test";
    fs::create_directories(dir);
    write_bitstream(stream, dir / "s.bin");
    CHECK(read_bitstream(dir / "s.bin") == stream.bits);

    write_bitstream_ascii(stream, dir / "s.txt");
    std::ifstream in(dir / "s.txt");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::erase(text, '\n');
    CHECK(text == stream.bits.to_ascii());
}
