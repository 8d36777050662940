#include "speckle/config.hpp"

#include <string>

#include "doctest.h"

using namespace speckle;

TEST_CASE("default config is valid and round-trips losslessly") {
    PipelineConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    const std::string toml = cfg.to_toml();
    const PipelineConfig back = PipelineConfig::from_toml(toml);
    CHECK(back == cfg);
    CHECK(back.to_toml() == toml);
    CHECK(back.digest() == cfg.digest());
}

TEST_CASE("non-default values survive the round trip") {
    PipelineConfig cfg;
    cfg.puf.seed = 123456789012345ull;
    cfg.puf.kind = PufKind::kDenseMatrix;
    cfg.puf.in_dims = {32, 24};
    cfg.puf.out_dims = {40, 48};
    cfg.puf.oversample = 1;
    cfg.puf.propagation_distance = 33.125;
    cfg.datasets = {5, 9, 2, 777};
    cfg.noise = {0.125, 1.5, 31};
    cfg.exposure_percentile = 0.975;
    cfg.gabor = {6.0, 3.0, 30.0, 4};
    cfg.extractor.block_bits = 512;
    cfg.extractor.span_images = true;
    cfg.battery = {200000, 0.02, 64, 10, 7};
    cfg.run = {"custom/dir", 3, true};
    const PipelineConfig back = PipelineConfig::from_toml(cfg.to_toml());
    CHECK(back == cfg);
}

TEST_CASE("digest changes with any field") {
    PipelineConfig a;
    PipelineConfig b;
    b.puf.seed = a.puf.seed + 1;
    CHECK(a.digest() != b.digest());
}

TEST_CASE("unknown keys and sections are rejected with their path") {
    CHECK_THROWS_WITH_AS(PipelineConfig::from_toml("[puf]\nbogus = 1\n"),
                         doctest::Contains("[puf].bogus"), InvalidArgument);
    CHECK_THROWS_WITH_AS(PipelineConfig::from_toml("[nonsense]\nx = 1\n"),
                         doctest::Contains("[nonsense]"), InvalidArgument);
}

TEST_CASE("out-of-domain fields name the offending path") {
    CHECK_THROWS_WITH_AS(PipelineConfig::from_toml("[puf]\nnum_screens = 0\n"),
                         doctest::Contains("[puf].num_screens"), InvalidArgument);
    CHECK_THROWS_WITH_AS(PipelineConfig::from_toml("[datasets]\ninter = 0\n"),
                         doctest::Contains("[datasets].inter"), InvalidArgument);
    CHECK_THROWS_WITH_AS(PipelineConfig::from_toml("[capture]\nexposure_percentile = 1.5\n"),
                         doctest::Contains("[capture].exposure_percentile"), InvalidArgument);
    CHECK_THROWS_WITH_AS(PipelineConfig::from_toml("[extractor]\nblock_bits = 100\n"),
                         doctest::Contains("[extractor].block_bits"), InvalidArgument);
    CHECK_THROWS_WITH_AS(PipelineConfig::from_toml("[battery]\nalpha = 2.0\n"),
                         doctest::Contains("[battery].alpha"), InvalidArgument);
    CHECK_THROWS_WITH_AS(PipelineConfig::from_toml("[puf]\nmodel = \"other\"\n"),
                         doctest::Contains("[puf].model"), InvalidArgument);
}

TEST_CASE("parser handles comments, spacing and types") {
    const std::string text =
        "# leading comment\n"
        "[puf]\n"
        "seed = 42   # trailing comment\n"
        "propagation_distance = 55.5\n"
        "\n"
        "[run]\n"
        "out_dir = \"with # hash\"\n"
        "export_ascii = true\n";
    const PipelineConfig cfg = PipelineConfig::from_toml(text);
    CHECK(cfg.puf.seed == 42);
    CHECK(cfg.puf.propagation_distance == 55.5);
    CHECK(cfg.run.out_dir == "with # hash");
    CHECK(cfg.run.export_ascii);
}

TEST_CASE("malformed lines are rejected") {
    CHECK_THROWS_AS(PipelineConfig::from_toml("[puf\nseed = 1\n"), InvalidArgument);
    CHECK_THROWS_AS(PipelineConfig::from_toml("[puf]\nseed 1\n"), InvalidArgument);
    CHECK_THROWS_AS(PipelineConfig::from_toml("[puf]\nseed = \n"), InvalidArgument);
    CHECK_THROWS_AS(PipelineConfig::from_toml("[puf]\nseed = abc\n"), InvalidArgument);
    CHECK_THROWS_AS(PipelineConfig::from_toml("[puf]\nseed = 1\nseed = 2\n"), InvalidArgument);
}
