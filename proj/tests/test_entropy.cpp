#include "speckle/entropy.hpp"

#include <cmath>

#include "doctest.h"

using namespace speckle;

TEST_CASE("grey histogram pooling") {
    SpeckleImage zeros({2, 2}, 0);
    SUBCASE("one all-zero image") {
        const GreyHistogram h = grey_histogram(std::vector<SpeckleImage>{zeros});
        CHECK(h.counts[0] == 4);
        CHECK(h.total == 4);
        for (int i = 1; i < 256; ++i) CHECK(h.counts[i] == 0);
    }
    SUBCASE("two constant images pool per value") {
        const GreyHistogram h =
            grey_histogram(std::vector<SpeckleImage>{SpeckleImage({2, 2}, 10),
                                                     SpeckleImage({2, 2}, 20)});
        CHECK(h.counts[10] == 4);
        CHECK(h.counts[20] == 4);
        CHECK(h.total == 8);
    }
    SUBCASE("empty input rejected") {
        CHECK_THROWS_AS(grey_histogram(std::vector<SpeckleImage>{}), InvalidArgument);
    }
}

TEST_CASE("min entropy of canonical distributions") {
    SUBCASE("uniform over 256 values -> 8 bits") {
        GreyHistogram h;
        h.counts.fill(100);
        h.total = 256 * 100;
        CHECK(min_entropy(h) == doctest::Approx(8.0));
    }
    SUBCASE("single value -> 0 bits") {
        GreyHistogram h;
        h.counts[42] = 1000;
        h.total = 1000;
        CHECK(min_entropy(h) == doctest::Approx(0.0));
    }
    SUBCASE("p_max = 1/4 -> 2 bits") {
        GreyHistogram h;
        h.counts[0] = 25;
        for (int i = 1; i <= 75; ++i) h.counts[i] = 1;
        h.total = 100;
        CHECK(min_entropy(h) == doctest::Approx(2.0));
    }
    SUBCASE("empty histogram rejected") {
        GreyHistogram h;
        CHECK_THROWS_AS(min_entropy(h), InvalidArgument);
    }
}

TEST_CASE("min entropy is 8 only for exact uniformity and drops with any spike") {
    GreyHistogram h;
    h.counts.fill(64);
    h.total = 256 * 64;
    CHECK(min_entropy(h) == doctest::Approx(8.0));
    ++h.counts[17];
    ++h.total;
    CHECK(min_entropy(h) < 8.0);
}

TEST_CASE("required block bits") {
    CHECK(required_block_bits(5.959, 256) == 344);
    CHECK(required_block_bits(8.0, 256) == 256);
    CHECK(required_block_bits(4.0, 256) == 512);
    CHECK_THROWS_AS(required_block_bits(0.0, 256), InvalidArgument);
    CHECK_THROWS_AS(required_block_bits(-1.0, 256), InvalidArgument);
    CHECK_THROWS_AS(required_block_bits(8.5, 256), InvalidArgument);
}

TEST_CASE("required block bits is monotone and byte aligned") {
    uint64_t prev = UINT64_MAX;
    for (double h = 0.25; h <= 8.0; h += 0.25) {
        const uint64_t bits = required_block_bits(h, 256);
        CHECK(bits % 8 == 0);
        CHECK(bits >= 256);
        CHECK(bits <= prev);
        // Covers at least out_bits * 8 / h_min raw bits.
        CHECK(static_cast<double>(bits) * h >= 256.0 * 8.0 - 1e-9);
        prev = bits;
    }
}

TEST_CASE("entropy report derivations and json round trip") {
    GreyHistogram h;
    // p_max = 2^-5.959 over a synthetic distribution.
    const double p = std::pow(2.0, -5.959);
    const uint64_t total = 1000000;
    h.counts[7] = static_cast<uint64_t>(p * total);
    uint64_t rest = total - h.counts[7];
    for (int i = 0; i < 256 && rest > 0; ++i) {
        if (i == 7) continue;
        const uint64_t take = std::min<uint64_t>(rest, h.counts[7] - 1);
        h.counts[i] = take;
        rest -= take;
    }
    h.total = 0;
    for (auto c : h.counts) h.total += c;

    const EntropyReport r = make_entropy_report(h, "synthetic");
    CHECK(r.h_min == doctest::Approx(5.959).epsilon(1e-4));
    CHECK(r.h_min_rounded == doctest::Approx(std::round(r.h_min * 1000) / 1000));
    CHECK(r.extraction_ratio == doctest::Approx(r.h_min / 8.0));
    CHECK(r.extraction_ratio > 0.0);
    CHECK(r.extraction_ratio <= 1.0);
    CHECK(r.block_bits == 344);

    const EntropyReport rt = EntropyReport::from_json(r.to_json());
    CHECK(rt.h_min == r.h_min);
    CHECK(rt.block_bits == r.block_bits);
    CHECK(rt.source == r.source);
}

TEST_CASE("extraction ratio display rounding") {
    // 5.95 / 8 = 0.74375 -> 0.744 at three decimals.
    CHECK(std::round(5.95 / 8.0 * 1000.0) / 1000.0 == doctest::Approx(0.744));
}
