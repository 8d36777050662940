#include "speckle/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "speckle/parallel.hpp"
#include "speckle/rng.hpp"
#include "speckle/sha256.hpp"

namespace speckle {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void note(std::ostream* log, const std::string& line) {
    if (log) *log << line << "\n";
}

fs::path frames_dir(const PipelineConfig& cfg) {
    return fs::path(cfg.run.out_dir) / "frames";
}

fs::path manifest_path(const PipelineConfig& cfg) {
    return fs::path(cfg.run.out_dir) / "dataset.json";
}

DatasetManifest load_manifest(const PipelineConfig& cfg) {
    return DatasetManifest::load(manifest_path(cfg));
}

std::vector<SpeckleImage> read_frames(const PipelineConfig& cfg,
                                      const std::vector<FrameRecord>& records) {
    const fs::path dir = frames_dir(cfg);
    std::vector<std::string> missing;
    for (const auto& rec : records)
        if (!fs::exists(dir / rec.file)) missing.push_back(rec.file);
    if (!missing.empty()) {
        std::string joined;
        for (const auto& f : missing) joined += (joined.empty() ? "" : ", ") + f;
        throw IoError(dir.string(), "missing frames: " + joined);
    }
    std::vector<SpeckleImage> images(records.size());
    parallel_for(records.size(), cfg.run.threads,
                 [&](size_t i) { images[i] = read_pgm(dir / records[i].file); });
    return images;
}

nlohmann::json stats_to_json(const DatasetStats& s) {
    return {{"mean", s.mean},   {"stddev", s.stddev}, {"cv", s.cv},
            {"min", s.min},     {"max", s.max},       {"n_items", s.n_items},
            {"n_pairs", s.n_pairs}};
}

// Resolution order for the SHA input block length: explicit override, then
// the config, then the persisted calibration report.
uint64_t resolve_block_bits(const PipelineConfig& cfg, uint64_t override_bits) {
    if (override_bits != 0) return override_bits;
    if (cfg.extractor.block_bits != 0) return cfg.extractor.block_bits;
    const fs::path entropy_file = fs::path(cfg.run.out_dir) / "entropy.json";
    if (!fs::exists(entropy_file))
        throw InvalidArgument(
            "extract: no block length available; run calibrate first or pass --block-bits");
    std::ifstream in(entropy_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    return EntropyReport::from_json(buf.str()).block_bits;
}

std::vector<FrameRecord> generation_records(const DatasetManifest& manifest) {
    auto records = manifest.by_role("inter");
    const auto extra = manifest.by_role("generate");
    records.insert(records.end(), extra.begin(), extra.end());
    return records;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << text;
    if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace

std::vector<FrameRecord> DatasetManifest::by_role(const std::string& role) const {
    std::vector<FrameRecord> out;
    for (const auto& f : frames)
        if (f.role == role) out.push_back(f);
    return out;
}

void DatasetManifest::save(const fs::path& path) const {
    nlohmann::json j;
    j["dims"] = {{"width", dims.width}, {"height", dims.height}};
    j["config_digest"] = config_digest;
    j["puf"] = nlohmann::json::parse(puf_params_to_json(puf));
    j["frames"] = nlohmann::json::array();
    for (const auto& f : frames)
        j["frames"].push_back({{"file", f.file},
                               {"role", f.role},
                               {"pattern_seed", f.pattern_seed},
                               {"noise_seed", f.noise_seed}});
    write_text(path, j.dump(2));
}

DatasetManifest DatasetManifest::load(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open dataset manifest (run simulate first?)");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IoError(path.string(), std::string("malformed manifest: ") + e.what());
    }
    DatasetManifest m;
    m.dims = {j.at("dims").at("width").get<int>(), j.at("dims").at("height").get<int>()};
    m.config_digest = j.at("config_digest").get<std::string>();
    m.puf = puf_params_from_json(j.at("puf").dump());
    for (const auto& f : j.at("frames")) {
        FrameRecord rec;
        rec.file = f.at("file").get<std::string>();
        rec.role = f.at("role").get<std::string>();
        rec.pattern_seed = f.at("pattern_seed").get<uint64_t>();
        rec.noise_seed = f.at("noise_seed").get<uint64_t>();
        m.frames.push_back(std::move(rec));
    }
    return m;
}

SimulateResult cmd_simulate(const PipelineConfig& cfg, std::ostream* log) {
    cfg.validate();
    const auto start = Clock::now();
    const fs::path out_dir(cfg.run.out_dir);
    std::error_code ec;
    fs::create_directories(frames_dir(cfg), ec);
    if (ec) throw IoError(frames_dir(cfg).string(), "cannot create output directory");

    DatasetManifest manifest;
    manifest.dims = cfg.puf.out_dims;
    manifest.config_digest = cfg.digest();
    manifest.puf = cfg.puf;

    char name[64];
    uint64_t frame_index = 0;
    const auto add = [&](const std::string& role, int count, auto seed_for) {
        for (int i = 0; i < count; ++i) {
            std::snprintf(name, sizeof(name), "%s_%04d.pgm", role.c_str(), i);
            FrameRecord rec;
            rec.file = name;
            rec.role = role;
            rec.pattern_seed = seed_for(i);
            rec.noise_seed = cfg.noise.noise_seed + frame_index;
            manifest.frames.push_back(std::move(rec));
            ++frame_index;
        }
    };
    const uint64_t base = cfg.datasets.pattern_seed;
    add("intra", cfg.datasets.intra, [&](int) { return base; });
    add("inter", cfg.datasets.inter, [&](int i) { return base + 1 + static_cast<uint64_t>(i); });
    add("generate", cfg.datasets.generate, [&](int i) {
        return base + 1 + static_cast<uint64_t>(cfg.datasets.inter) + static_cast<uint64_t>(i);
    });

    note(log, "simulate: rendering " + std::to_string(manifest.frames.size()) + " frames (" +
                  to_string(cfg.puf.out_dims) + ")");
    const PufModel model(cfg.puf);
    const fs::path dir = frames_dir(cfg);
    parallel_for(manifest.frames.size(), cfg.run.threads, [&](size_t i) {
        const auto& rec = manifest.frames[i];
        const PhasePattern pattern = uniform_phase_pattern(rec.pattern_seed, cfg.puf.in_dims);
        NoiseParams noise = cfg.noise;
        noise.noise_seed = rec.noise_seed;
        const SpeckleImage img = render(model, pattern, noise, cfg.exposure_percentile);
        write_pgm(img, dir / rec.file);
    });

    manifest.save(manifest_path(cfg));
    write_text(out_dir / "config.resolved.toml", cfg.to_toml());

    SimulateResult result;
    result.frames = manifest.frames.size();
    result.manifest_path = manifest_path(cfg);
    result.seconds = seconds_since(start);
    note(log, "simulate: done in " + std::to_string(result.seconds) + " s");
    return result;
}

CharacterizeResult cmd_characterize(const PipelineConfig& cfg, std::ostream* log) {
    cfg.validate();
    const auto start = Clock::now();
    const DatasetManifest manifest = load_manifest(cfg);
    const auto intra_recs = manifest.by_role("intra");
    const auto inter_recs = manifest.by_role("inter");
    if (intra_recs.size() < 2 || inter_recs.size() < 2)
        throw InvalidArgument("characterize: need at least 2 intra and 2 inter frames");

    const auto intra = read_frames(cfg, intra_recs);
    const auto inter = read_frames(cfg, inter_recs);
    note(log, "characterize: " + std::to_string(intra.size()) + " intra / " +
                  std::to_string(inter.size()) + " inter frames");

    const auto normalize_all = [&](const std::vector<SpeckleImage>& imgs) {
        std::vector<NormalizedImage> out(imgs.size());
        parallel_for(imgs.size(), cfg.run.threads,
                     [&](size_t i) { out[i] = normalize_image(imgs[i]); });
        return out;
    };
    const auto hash_all = [&](const std::vector<SpeckleImage>& imgs) {
        std::vector<BitString> out(imgs.size());
        parallel_for(imgs.size(), cfg.run.threads,
                     [&](size_t i) { out[i] = gabor_hash(imgs[i], cfg.gabor); });
        return out;
    };

    const auto hashes_intra = hash_all(intra);
    const auto hashes_inter = hash_all(inter);
    CharacterizeResult r;
    r.euclid_intra = pairwise_euclidean_stats(normalize_all(intra), cfg.run.threads);
    r.euclid_inter = pairwise_euclidean_stats(normalize_all(inter), cfg.run.threads);
    r.hd_intra = pairwise_hamming_stats(hashes_intra, cfg.run.threads);
    r.hd_inter = pairwise_hamming_stats(hashes_inter, cfg.run.threads);
    r.separated = r.euclid_intra.max < r.euclid_inter.min;

    const fs::path dir = fs::path(cfg.run.out_dir) / "characterize";
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(dir.string(), "cannot create characterize directory");
    write_histogram_csv(r.euclid_intra.histogram, dir / "euclid_intra_hist.csv");
    write_histogram_csv(r.euclid_inter.histogram, dir / "euclid_inter_hist.csv");
    write_histogram_csv(r.hd_intra.histogram, dir / "hd_intra_hist.csv");
    write_histogram_csv(r.hd_inter.histogram, dir / "hd_inter_hist.csv");

    // Raw packed fingerprints, one byte-padded record per frame.
    const auto write_fingerprints = [](const std::vector<BitString>& hashes,
                                       const fs::path& path) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError(path.string(), "cannot open fingerprint export");
        for (const auto& h : hashes)
            out.write(reinterpret_cast<const char*>(h.bytes().data()),
                      static_cast<std::streamsize>(h.bytes().size()));
        if (!out) throw IoError(path.string(), "failed writing fingerprint export");
    };
    write_fingerprints(hashes_intra, dir / "fingerprints_intra.bin");
    write_fingerprints(hashes_inter, dir / "fingerprints_inter.bin");

    nlohmann::json j;
    j["config_digest"] = manifest.config_digest;
    j["euclidean"] = {{"intra", stats_to_json(r.euclid_intra)},
                      {"inter", stats_to_json(r.euclid_inter)},
                      {"separated", r.separated}};
    j["hamming"] = {{"intra", stats_to_json(r.hd_intra)}, {"inter", stats_to_json(r.hd_inter)}};
    write_text(dir / "characterize.json", j.dump(2));

    r.seconds = seconds_since(start);
    note(log, std::string("characterize: separated=") + (r.separated ? "true" : "false") +
                  ", inter HD mean " + std::to_string(r.hd_inter.mean));
    return r;
}

EntropyReport cmd_calibrate(const PipelineConfig& cfg, std::ostream* log) {
    cfg.validate();
    const DatasetManifest manifest = load_manifest(cfg);
    const auto inter_recs = manifest.by_role("inter");
    if (inter_recs.empty()) throw InvalidArgument("calibrate: dataset has no inter frames");
    const auto inter = read_frames(cfg, inter_recs);
    const GreyHistogram hist = grey_histogram(inter);
    const EntropyReport report = make_entropy_report(
        hist, "inter:" + std::to_string(inter.size()) + " frames " + to_string(manifest.dims));
    write_text(fs::path(cfg.run.out_dir) / "entropy.json", report.to_json());
    write_grey_histogram_csv(hist, fs::path(cfg.run.out_dir) / "grey_hist.csv");
    note(log, "calibrate: h_min=" + std::to_string(report.h_min) +
                  " block_bits=" + std::to_string(report.block_bits));
    return report;
}

ExtractResult cmd_extract(const PipelineConfig& cfg, uint64_t block_bits_override,
                          std::ostream* log) {
    cfg.validate();
    const DatasetManifest manifest = load_manifest(cfg);
    const auto records = generation_records(manifest);
    if (records.empty()) throw InvalidArgument("extract: dataset has no inter/generate frames");
    const auto images = read_frames(cfg, records);

    ExtractorConfig ecfg;
    ecfg.block_bits = resolve_block_bits(cfg, block_bits_override);
    ecfg.span_images = cfg.extractor.span_images;
    ecfg.validate();
    note(log, "extract: " + std::to_string(images.size()) + " frames, block_bits=" +
                  std::to_string(ecfg.block_bits));

    const int threads = resolve_threads(cfg.run.threads);
    const auto start = Clock::now();
    RandomBitstream stream = extract(images, ecfg, threads);
    const double extract_seconds = seconds_since(start);

    stream.provenance.puf_seed = cfg.puf.seed;
    stream.provenance.config_digest = manifest.config_digest;
    for (const auto& rec : records) stream.provenance.pattern_seeds.push_back(rec.pattern_seed);

    uint64_t raw_bits = 0;
    std::vector<uint64_t> per_image_bits;
    per_image_bits.reserve(images.size());
    for (const auto& img : images) {
        per_image_bits.push_back(static_cast<uint64_t>(img.pixels()) * 8);
        raw_bits += per_image_bits.back();
    }
    if (stream.bits.size() != extracted_bits_for(per_image_bits, ecfg))
        throw InternalError("extract: output length does not satisfy the output-length law");

    ExtractResult result;
    result.bin_path = fs::path(cfg.run.out_dir) / "random.bin";
    result.bits = stream.bits.size();
    result.block_bits = ecfg.block_bits;
    result.stream_digest = to_hex(Sha256::hash(stream.bits.bytes()));
    result.throughput.frames = images.size();
    result.throughput.raw_bits_in = raw_bits;
    result.throughput.random_bits_out = stream.bits.size();
    result.throughput.extract_seconds = extract_seconds;
    result.throughput.bits_per_second =
        extract_seconds > 0.0 ? static_cast<double>(stream.bits.size()) / extract_seconds : 0.0;
    result.throughput.threads = threads;

    write_bitstream(stream, result.bin_path);
    write_text(fs::path(cfg.run.out_dir) / "random_provenance.json", stream.provenance.to_json());
    write_text(fs::path(cfg.run.out_dir) / "throughput.json", result.throughput.to_json());
    if (cfg.run.export_ascii)
        write_bitstream_ascii(stream, fs::path(cfg.run.out_dir) / "random.txt");

    note(log, "extract: " + std::to_string(result.bits) + " bits at " +
                  std::to_string(result.throughput.bits_per_second / 1e6) + " Mbit/s");
    return result;
}

TestReport cmd_test(const PipelineConfig& cfg, const fs::path& bitstream, std::ostream* log) {
    cfg.validate();
    const fs::path path = bitstream.empty() ? fs::path(cfg.run.out_dir) / "random.bin" : bitstream;
    const BitString bits = read_bitstream(path);

    BatteryParams params;
    params.subseq_bits = cfg.battery.subseq_bits;
    params.alpha = cfg.battery.alpha;
    params.test_params.block_frequency_m = cfg.battery.block_frequency_m;
    params.test_params.serial_m = cfg.battery.serial_m;
    params.test_params.apen_m = cfg.battery.apen_m;
    params.threads = cfg.run.threads;

    note(log, "test: " + std::to_string(bits.size()) + " bits, " +
                  std::to_string(bits.size() / params.subseq_bits) + " subsequences of " +
                  std::to_string(params.subseq_bits) + " bits");
    TestReport report = run_battery(bits, params);
    write_text(fs::path(cfg.run.out_dir) / "test_report.json", report.to_json());
    report.write_pvalues_csv(fs::path(cfg.run.out_dir) / "pvalues.csv");
    note(log, std::string("test: overall ") + (report.overall_pass ? "PASS" : "FAIL"));
    return report;
}

namespace {

// Mean/max |Pearson r| over all unordered pairs of equal-length byte streams.
void pairwise_pearson(const std::vector<std::vector<uint8_t>>& streams, int threads,
                      double& mean_abs, double& max_abs) {
    const size_t n = streams.size();
    const size_t n_pairs = n * (n - 1) / 2;
    std::vector<double> values(n_pairs);
    std::vector<std::pair<size_t, size_t>> pairs;
    pairs.reserve(n_pairs);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    parallel_for(n_pairs, threads, [&](size_t p) {
        const auto [i, j] = pairs[p];
        const auto rho = pearson_bytes(streams[i], streams[j]);
        values[p] = rho ? std::fabs(*rho) : 0.0;
    });
    CompensatedSum sum;
    max_abs = 0.0;
    for (double v : values) {
        sum.add(v);
        max_abs = std::max(max_abs, v);
    }
    mean_abs = n_pairs > 0 ? sum.value() / static_cast<double>(n_pairs) : 0.0;
}

}  // namespace

CorrelationSummary analyze_correlations(const PipelineConfig& cfg, uint64_t block_bits,
                                        std::ostream* log) {
    cfg.validate();
    const DatasetManifest manifest = load_manifest(cfg);
    const auto inter_recs = manifest.by_role("inter");
    if (inter_recs.size() < 2)
        throw InvalidArgument("correlations: need at least 2 inter frames");
    const size_t n_frames = std::min<size_t>(inter_recs.size(), 100);
    const std::vector<FrameRecord> used(inter_recs.begin(),
                                        inter_recs.begin() + static_cast<ptrdiff_t>(n_frames));
    const auto images = read_frames(cfg, used);

    ExtractorConfig ecfg;
    ecfg.block_bits = resolve_block_bits(cfg, block_bits);
    ecfg.span_images = false;  // per-frame streams compared pairwise

    CorrelationSummary s;
    s.n_frames = n_frames;
    s.raw_bytes = images[0].pixels();

    std::vector<std::vector<uint8_t>> raw(n_frames), hashed(n_frames);
    parallel_for(n_frames, cfg.run.threads, [&](size_t i) {
        raw[i] = image_to_bytes(images[i]);
        hashed[i] = extract(std::span<const SpeckleImage>(&images[i], 1), ecfg).bits.bytes();
    });
    s.hashed_bytes = hashed[0].size();
    if (s.hashed_bytes < 2)
        throw InvalidArgument("correlations: frames too small for one hash block");

    pairwise_pearson(raw, cfg.run.threads, s.raw_mean_abs, s.raw_max_abs);
    pairwise_pearson(hashed, cfg.run.threads, s.hashed_mean_abs, s.hashed_max_abs);
    s.hashed_null_bound = 4.0 / std::sqrt(static_cast<double>(s.hashed_bytes));

    // Pattern bytes vs final output bytes over the generation set.
    const auto gen_recs = generation_records(manifest);
    const auto gen_images = read_frames(cfg, gen_recs);
    RandomBitstream stream = extract(gen_images, ecfg, resolve_threads(cfg.run.threads));
    std::vector<uint8_t> pattern_bytes;
    for (const auto& rec : gen_recs) {
        const PhasePattern p = uniform_phase_pattern(rec.pattern_seed, cfg.puf.in_dims);
        for (double phase : p.phase) {
            const int q = static_cast<int>(phase / (2.0 * std::numbers::pi) * 256.0);
            pattern_bytes.push_back(static_cast<uint8_t>(std::clamp(q, 0, 255)));
        }
    }
    const size_t m = std::min(pattern_bytes.size(), stream.bits.bytes().size());
    if (m >= 2) {
        const auto rho = pearson_bytes(std::span<const uint8_t>(pattern_bytes.data(), m),
                                       std::span<const uint8_t>(stream.bits.bytes().data(), m));
        s.pattern_output_rho = rho.value_or(0.0);
        s.pattern_output_bound = 4.0 / std::sqrt(static_cast<double>(m));
    }

    write_text(fs::path(cfg.run.out_dir) / "correlation.json", s.to_json());
    note(log, "correlations: raw mean |r|=" + std::to_string(s.raw_mean_abs) +
                  ", hashed mean |r|=" + std::to_string(s.hashed_mean_abs));
    return s;
}

PipelineResult cmd_pipeline(const PipelineConfig& cfg, std::ostream* log) {
    PipelineResult r;
    const auto stage = [&](const char* name, auto&& fn) {
        try {
            return fn();
        } catch (const IoError& e) {
            throw IoError(e.path(), std::string("stage '") + name + "': " + e.what());
        } catch (const InsufficientData& e) {
            throw InsufficientData(std::string("stage '") + name + "': " + e.what(),
                                   e.minimum());
        } catch (const InvalidArgument& e) {
            throw InvalidArgument(std::string("stage '") + name + "': " + e.what());
        } catch (const std::exception& e) {
            throw InternalError(std::string("stage '") + name + "': " + e.what());
        }
    };
    r.simulate = stage("simulate", [&] { return cmd_simulate(cfg, log); });
    r.characterize = stage("characterize", [&] { return cmd_characterize(cfg, log); });
    r.entropy = stage("calibrate", [&] { return cmd_calibrate(cfg, log); });
    r.extract = stage("extract", [&] { return cmd_extract(cfg, 0, log); });
    r.extract.throughput.simulate_seconds = r.simulate.seconds;
    r.correlation =
        stage("correlations", [&] { return analyze_correlations(cfg, r.extract.block_bits, log); });
    r.test = stage("test", [&] { return cmd_test(cfg, {}, log); });
    r.pass = r.test.overall_pass;

    nlohmann::json j;
    j["config_digest"] = cfg.digest();
    j["frames"] = r.simulate.frames;
    j["h_min"] = r.entropy.h_min;
    j["block_bits"] = r.extract.block_bits;
    j["random_bits"] = r.extract.bits;
    j["stream_digest"] = r.extract.stream_digest;
    j["battery_pass"] = r.test.overall_pass;
    j["separated"] = r.characterize.separated;
    j["timings"] = {{"simulate_s", r.simulate.seconds},
                    {"characterize_s", r.characterize.seconds},
                    {"extract_s", r.extract.throughput.extract_seconds}};
    write_text(fs::path(cfg.run.out_dir) / "pipeline.json", j.dump(2));
    return r;
}

BenchResult cmd_bench(const PipelineConfig& cfg, uint64_t raw_megabytes, std::ostream* log) {
    cfg.validate();
    const Dims dims = cfg.puf.out_dims;
    const size_t frame_bytes = static_cast<size_t>(dims.pixels());
    const size_t n_frames =
        std::max<size_t>(1, raw_megabytes * 1024 * 1024 / std::max<size_t>(frame_bytes, 1));

    // Synthetic frames: content does not affect hashing speed.
    std::vector<SpeckleImage> images(n_frames, SpeckleImage(dims));
    parallel_for(n_frames, cfg.run.threads, [&](size_t f) {
        auto& data = images[f].data();
        for (size_t i = 0; i < data.size(); i += 4) {
            const auto b = Philox::block(0x9e3779b97f4a7c15ull, streams::kSynthetic,
                                         f * frame_bytes + i);
            for (size_t k = 0; k < 4 && i + k < data.size(); ++k)
                data[i + k] = static_cast<uint8_t>(b[k]);
        }
    });

    ExtractorConfig ecfg;
    ecfg.block_bits = cfg.extractor.block_bits != 0 ? cfg.extractor.block_bits : 344;
    ecfg.span_images = cfg.extractor.span_images;

    const int threads = resolve_threads(cfg.run.threads);
    note(log, "bench: hashing " + std::to_string(n_frames) + " synthetic frames (" +
                  std::to_string(n_frames * frame_bytes / (1024 * 1024)) + " MiB) with " +
                  std::to_string(threads) + " thread(s)");
    const auto start = Clock::now();
    const RandomBitstream stream = extract(images, ecfg, threads);
    const double seconds = seconds_since(start);

    BenchResult r;
    r.frames = n_frames;
    r.raw_bits = static_cast<uint64_t>(n_frames) * frame_bytes * 8;
    r.out_bits = stream.bits.size();
    r.block_bits = ecfg.block_bits;
    r.seconds = seconds;
    r.bits_per_second = seconds > 0.0 ? static_cast<double>(r.out_bits) / seconds : 0.0;
    r.threads = threads;
    note(log, "bench: " + std::to_string(r.bits_per_second / 1e6) + " Mbit/s output (reference "
                  "camera-limited pipeline: 960 Mbit/s)");
    return r;
}

std::string ThroughputReport::to_json() const {
    nlohmann::json j;
    j["frames"] = frames;
    j["raw_bits_in"] = raw_bits_in;
    j["random_bits_out"] = random_bits_out;
    j["extract_seconds"] = extract_seconds;
    j["bits_per_second"] = bits_per_second;
    j["threads"] = threads;
    if (simulate_seconds >= 0.0) j["simulate_seconds"] = simulate_seconds;
    j["reference_rate_bits_per_second"] = kReferenceRateBitsPerSecond;
    j["reference_rate_note"] = "camera-limited hardware pipeline rate, for comparison";
    return j.dump(2);
}

std::string CorrelationSummary::to_json() const {
    nlohmann::json j;
    j["n_frames"] = n_frames;
    j["raw_bytes"] = raw_bytes;
    j["hashed_bytes"] = hashed_bytes;
    j["raw_mean_abs"] = raw_mean_abs;
    j["raw_max_abs"] = raw_max_abs;
    j["hashed_mean_abs"] = hashed_mean_abs;
    j["hashed_max_abs"] = hashed_max_abs;
    j["hashed_null_bound"] = hashed_null_bound;
    j["pattern_output_rho"] = pattern_output_rho;
    j["pattern_output_bound"] = pattern_output_bound;
    return j.dump(2);
}

std::string BenchResult::to_json() const {
    nlohmann::json j;
    j["frames"] = frames;
    j["raw_bits"] = raw_bits;
    j["out_bits"] = out_bits;
    j["block_bits"] = block_bits;
    j["seconds"] = seconds;
    j["bits_per_second"] = bits_per_second;
    j["threads"] = threads;
    j["reference_rate_bits_per_second"] = ThroughputReport::kReferenceRateBitsPerSecond;
    return j.dump(2);
}

}  // namespace speckle
