// speckle-rng: generate and validate random bitstreams from simulated
// optical-PUF speckle frames.
//
// Exit codes: 0 success, 1 statistical validation failed, 2 usage or
// configuration error, 3 I/O error.

#include <iostream>

#include "CLI11.hpp"

#include "speckle/pipeline.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    int64_t seed = -1;
    uint64_t block_bits = 0;
    int threads = -1;
    bool export_ascii = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "TOML configuration file");
    cmd->add_option("--out", opts.out_dir, "output directory (overrides [run].out_dir)");
    cmd->add_option("--seed", opts.seed, "override [puf].seed");
    cmd->add_option("--block-bits", opts.block_bits, "override SHA input block length in bits");
    cmd->add_option("--threads", opts.threads,
                    "worker threads (0 = auto; SPECKLE_RNG_THREADS is the fallback)");
    cmd->add_flag("--export-ascii", opts.export_ascii, "also write '0'/'1' text bitstream");
}

speckle::PipelineConfig resolve_config(const CommonOpts& opts) {
    speckle::PipelineConfig cfg;
    if (!opts.config_path.empty())
        cfg = speckle::PipelineConfig::from_file(opts.config_path);
    if (!opts.out_dir.empty()) cfg.run.out_dir = opts.out_dir;
    if (opts.seed >= 0) cfg.puf.seed = static_cast<uint64_t>(opts.seed);
    if (opts.threads >= 0) cfg.run.threads = opts.threads;
    if (opts.export_ascii) cfg.run.export_ascii = true;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random bitstreams from simulated speckle physical one-way functions"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string bitstream_path;
    uint64_t bench_mb = 64;

    auto* sim = app.add_subcommand("simulate", "render the intra/inter/generate frame datasets");
    add_common(sim, opts);
    auto* chr = app.add_subcommand("characterize",
                                   "Euclidean + fingerprint distance statistics of the datasets");
    add_common(chr, opts);
    auto* cal = app.add_subcommand("calibrate",
                                   "min-entropy of the inter dataset and derived block length");
    add_common(cal, opts);
    auto* ext = app.add_subcommand("extract", "hash frames into the output bitstream");
    add_common(ext, opts);
    auto* tst = app.add_subcommand("test", "run the statistical battery on a bitstream");
    add_common(tst, opts);
    tst->add_option("--bitstream", bitstream_path, "bitstream file (default <out>/random.bin)");
    auto* pipe = app.add_subcommand("pipeline", "simulate, characterize, calibrate, extract, test");
    add_common(pipe, opts);
    auto* bench = app.add_subcommand("bench", "measure extraction throughput on synthetic frames");
    add_common(bench, opts);
    bench->add_option("--megabytes", bench_mb, "raw input volume to hash (MiB)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const speckle::PipelineConfig cfg = resolve_config(opts);
        if (sim->parsed()) {
            speckle::cmd_simulate(cfg, &std::cout);
        } else if (chr->parsed()) {
            speckle::cmd_characterize(cfg, &std::cout);
        } else if (cal->parsed()) {
            const auto report = speckle::cmd_calibrate(cfg, &std::cout);
            std::cout << report.to_json() << "\n";
        } else if (ext->parsed()) {
            speckle::cmd_extract(cfg, opts.block_bits, &std::cout);
        } else if (tst->parsed()) {
            const auto report = speckle::cmd_test(cfg, bitstream_path, &std::cout);
            return report.overall_pass ? 0 : 1;
        } else if (pipe->parsed()) {
            const auto result = speckle::cmd_pipeline(cfg, &std::cout);
            std::cout << "pipeline: bitstream digest " << result.extract.stream_digest << "\n";
            return result.pass ? 0 : 1;
        } else if (bench->parsed()) {
            const auto result = speckle::cmd_bench(cfg, bench_mb, &std::cout);
            std::cout << result.to_json() << "\n";
        }
        return 0;
    } catch (const speckle::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return 3;
    } catch (const speckle::InsufficientData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const speckle::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
