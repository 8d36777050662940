#include "speckle/entropy.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"

namespace speckle {

void GreyHistogram::add_image(const SpeckleImage& img) { add_bytes(img.data()); }

void GreyHistogram::add_bytes(std::span<const uint8_t> bytes) {
    for (uint8_t b : bytes) ++counts[b];
    total += bytes.size();
}

void GreyHistogram::merge(const GreyHistogram& other) {
    for (size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
    total += other.total;
}

double GreyHistogram::p_max() const {
    if (total == 0) throw InvalidArgument("grey histogram: empty");
    uint64_t max_count = 0;
    for (uint64_t c : counts) max_count = std::max(max_count, c);
    return static_cast<double>(max_count) / static_cast<double>(total);
}

GreyHistogram grey_histogram(std::span<const SpeckleImage> images) {
    if (images.empty()) throw InvalidArgument("grey histogram: no images");
    GreyHistogram h;
    for (const auto& img : images) h.add_image(img);
    return h;
}

double min_entropy(const GreyHistogram& hist) {
    return -std::log2(hist.p_max());
}

uint64_t required_block_bits(double h_min, uint64_t out_bits) {
    if (!(h_min > 0.0) || h_min > 8.0)
        throw InvalidArgument("required_block_bits: h_min must be in (0, 8]");
    if (out_bits == 0) throw InvalidArgument("required_block_bits: out_bits must be > 0");
    const uint64_t raw =
        static_cast<uint64_t>(std::ceil(static_cast<double>(out_bits) * 8.0 / h_min));
    return (raw + 7) / 8 * 8;
}

EntropyReport make_entropy_report(const GreyHistogram& hist, const std::string& source,
                                  uint64_t out_bits) {
    EntropyReport r;
    r.p_max = hist.p_max();
    r.h_min = min_entropy(hist);
    r.h_min_rounded = std::round(r.h_min * 1000.0) / 1000.0;
    r.extraction_ratio = r.h_min / 8.0;
    r.block_bits = required_block_bits(r.h_min, out_bits);
    r.out_bits = out_bits;
    r.total_symbols = hist.total;
    r.source = source;
    return r;
}

std::string EntropyReport::to_json() const {
    nlohmann::json j;
    j["h_min"] = h_min;
    j["h_min_rounded"] = h_min_rounded;
    j["p_max"] = p_max;
    j["extraction_ratio"] = extraction_ratio;
    j["block_bits"] = block_bits;
    j["out_bits"] = out_bits;
    j["total_symbols"] = total_symbols;
    j["source"] = source;
    return j.dump(2);
}

EntropyReport EntropyReport::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    EntropyReport r;
    r.h_min = j.at("h_min").get<double>();
    r.h_min_rounded = j.at("h_min_rounded").get<double>();
    r.p_max = j.at("p_max").get<double>();
    r.extraction_ratio = j.at("extraction_ratio").get<double>();
    r.block_bits = j.at("block_bits").get<uint64_t>();
    r.out_bits = j.at("out_bits").get<uint64_t>();
    r.total_symbols = j.at("total_symbols").get<uint64_t>();
    r.source = j.at("source").get<std::string>();
    return r;
}

void write_grey_histogram_csv(const GreyHistogram& hist, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError(path.string(), "cannot open histogram CSV for writing");
    out << "bin_start,bin_end,count\n";
    for (size_t i = 0; i < hist.counts.size(); ++i)
        out << i << "," << i + 1 << "," << hist.counts[i] << "\n";
    if (!out) throw IoError(path.string(), "failed writing histogram CSV");
}

}  // namespace speckle
