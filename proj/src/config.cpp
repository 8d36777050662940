#include "speckle/config.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "speckle/sha256.hpp"

namespace speckle {
namespace {

// Minimal TOML subset: [section] headers and key = value lines with string,
// integer, float and boolean values. Exactly what the config schema needs.
struct TomlValue {
    enum class Kind { kString, kInt, kFloat, kBool } kind;
    std::string s;
    uint64_t u = 0;
    long long i = 0;
    double f = 0.0;
    bool b = false;
};

using TomlTable = std::map<std::string, std::map<std::string, TomlValue>>;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

TomlValue parse_value(const std::string& raw, const std::string& where) {
    TomlValue v{};
    if (raw.empty()) throw InvalidArgument("config: empty value at " + where);
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"')
            throw InvalidArgument("config: unterminated string at " + where);
        v.kind = TomlValue::Kind::kString;
        std::string out;
        for (size_t i = 1; i + 1 < raw.size(); ++i) {
            if (raw[i] == '\\' && i + 2 < raw.size()) {
                ++i;
                if (raw[i] == '"')
                    out.push_back('"');
                else if (raw[i] == '\\')
                    out.push_back('\\');
                else
                    throw InvalidArgument("config: unsupported escape at " + where);
            } else {
                out.push_back(raw[i]);
            }
        }
        v.s = out;
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.kind = TomlValue::Kind::kBool;
        v.b = raw == "true";
        return v;
    }
    if (raw.find_first_of(".eE") != std::string::npos &&
        raw.find_first_not_of("0123456789+-.eE") == std::string::npos) {
        char* end = nullptr;
        v.kind = TomlValue::Kind::kFloat;
        v.f = std::strtod(raw.c_str(), &end);
        if (end == nullptr || *end != '\0')
            throw InvalidArgument("config: malformed float at " + where);
        return v;
    }
    if (raw.find_first_not_of("0123456789+-") == std::string::npos) {
        char* end = nullptr;
        v.kind = TomlValue::Kind::kInt;
        v.i = std::strtoll(raw.c_str(), &end, 10);
        v.u = raw.front() == '-' ? 0 : std::strtoull(raw.c_str(), nullptr, 10);
        if (end == nullptr || *end != '\0')
            throw InvalidArgument("config: malformed integer at " + where);
        return v;
    }
    throw InvalidArgument("config: unrecognized value '" + raw + "' at " + where);
}

TomlTable parse_toml(const std::string& text) {
    TomlTable table;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Strip comments outside quotes.
        bool quoted = false;
        for (size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line = line.substr(0, i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw InvalidArgument("config: malformed section at line " +
                                      std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw InvalidArgument("config: empty section name at line " +
                                      std::to_string(lineno));
            table[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config: expected key = value at line " +
                                  std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string raw = trim(line.substr(eq + 1));
        if (key.empty())
            throw InvalidArgument("config: empty key at line " + std::to_string(lineno));
        const std::string where = "[" + section + "]." + key;
        if (table[section].count(key))
            throw InvalidArgument("config: duplicate key " + where);
        table[section][key] = parse_value(raw, where);
    }
    return table;
}

// Typed readers which consume recognized keys so leftovers can be rejected.
class SectionReader {
public:
    SectionReader(TomlTable& table, std::string section)
        : section_(std::move(section)), entries_(table[section_]) {}

    template <typename T>
    void read_int(const std::string& key, T& out) {
        if (auto v = take(key)) {
            if (v->kind != TomlValue::Kind::kInt) throw type_error(key, "integer");
            out = static_cast<T>(v->i);
        }
    }
    void read_u64(const std::string& key, uint64_t& out) {
        if (auto v = take(key)) {
            if (v->kind != TomlValue::Kind::kInt || v->i < 0)
                throw type_error(key, "non-negative integer");
            out = v->u;
        }
    }
    void read_float(const std::string& key, double& out) {
        if (auto v = take(key)) {
            if (v->kind == TomlValue::Kind::kFloat)
                out = v->f;
            else if (v->kind == TomlValue::Kind::kInt)
                out = static_cast<double>(v->i);
            else
                throw type_error(key, "number");
        }
    }
    void read_bool(const std::string& key, bool& out) {
        if (auto v = take(key)) {
            if (v->kind != TomlValue::Kind::kBool) throw type_error(key, "boolean");
            out = v->b;
        }
    }
    void read_string(const std::string& key, std::string& out) {
        if (auto v = take(key)) {
            if (v->kind != TomlValue::Kind::kString) throw type_error(key, "string");
            out = v->s;
        }
    }
    void finish() const {
        for (const auto& [key, value] : entries_)
            if (!consumed_.count(key))
                throw InvalidArgument("config: unknown key [" + section_ + "]." + key);
    }

private:
    std::optional<TomlValue> take(const std::string& key) {
        consumed_.insert(key);
        const auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }
    InvalidArgument type_error(const std::string& key, const std::string& want) const {
        return InvalidArgument("config: [" + section_ + "]." + key + " must be a " + want);
    }

    std::string section_;
    std::map<std::string, TomlValue>& entries_;
    std::set<std::string> consumed_;
};

std::string format_float(double v) {
    // Shortest representation that parses back to the same double.
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".eE") == std::string::npos) s += ".0";
    return s;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace

void PipelineConfig::validate() const {
    const auto fail = [](const std::string& path, const std::string& msg) {
        throw InvalidArgument("config: " + path + " " + msg);
    };
    if (puf.num_screens < 1) fail("[puf].num_screens", "must be >= 1");
    if (puf.in_dims.width < 1) fail("[puf].in_width", "must be >= 1");
    if (puf.in_dims.height < 1) fail("[puf].in_height", "must be >= 1");
    if (puf.out_dims.width < 1) fail("[puf].out_width", "must be >= 1");
    if (puf.out_dims.height < 1) fail("[puf].out_height", "must be >= 1");
    if (puf.oversample < 1) fail("[puf].oversample", "must be >= 1");
    if (puf.propagation_distance < 0.0) fail("[puf].propagation_distance", "must be >= 0");
    if (puf.in_dims.width > puf.field_dims().width ||
        puf.in_dims.height > puf.field_dims().height)
        fail("[puf].in_width/in_height", "must fit inside out dims x oversample");
    if (datasets.intra < 2) fail("[datasets].intra", "must be >= 2");
    if (datasets.inter < 2) fail("[datasets].inter", "must be >= 2");
    if (datasets.generate < 0) fail("[datasets].generate", "must be >= 0");
    if (noise.shot_scale < 0.0) fail("[noise].shot_scale", "must be >= 0");
    if (noise.read_sigma < 0.0) fail("[noise].read_sigma", "must be >= 0");
    if (!(exposure_percentile > 0.0 && exposure_percentile <= 1.0))
        fail("[capture].exposure_percentile", "must be in (0, 1]");
    if (gabor.wavelength <= 0.0) fail("[gabor].wavelength", "must be > 0");
    if (gabor.sigma <= 0.0) fail("[gabor].sigma", "must be > 0");
    if (gabor.stride < 1) fail("[gabor].stride", "must be >= 1");
    if (extractor.block_bits != 0) {
        if (extractor.block_bits < 256) fail("[extractor].block_bits", "must be >= 256");
        if (extractor.block_bits % 8 != 0)
            fail("[extractor].block_bits", "must be a multiple of 8");
    }
    if (battery.subseq_bits < 1000) fail("[battery].subseq_bits", "must be >= 1000");
    if (!(battery.alpha > 0.0 && battery.alpha < 1.0))
        fail("[battery].alpha", "must be in (0, 1)");
    if (battery.block_frequency_m < 2) fail("[battery].block_frequency_m", "must be >= 2");
    if (battery.serial_m < 3 || battery.serial_m > 24)
        fail("[battery].serial_m", "must be in [3, 24]");
    if (battery.apen_m < 1 || battery.apen_m > 24) fail("[battery].apen_m", "must be in [1, 24]");
    if (run.threads < 0) fail("[run].threads", "must be >= 0");
    if (run.out_dir.empty()) fail("[run].out_dir", "must not be empty");
}

std::string PipelineConfig::to_toml() const {
    std::ostringstream out;
    out << "# speckle-rng pipeline configuration\n";
    out << "\n[puf]\n";
    out << "seed = " << puf.seed << "\n";
    out << "model = " << quote(puf.kind == PufKind::kPhaseScreens ? "screens" : "dense") << "\n";
    out << "num_screens = " << puf.num_screens << "\n";
    out << "in_width = " << puf.in_dims.width << "\n";
    out << "in_height = " << puf.in_dims.height << "\n";
    out << "out_width = " << puf.out_dims.width << "\n";
    out << "out_height = " << puf.out_dims.height << "\n";
    out << "oversample = " << puf.oversample << "\n";
    out << "propagation_distance = " << format_float(puf.propagation_distance) << "\n";
    out << "\n[datasets]\n";
    out << "intra = " << datasets.intra << "\n";
    out << "inter = " << datasets.inter << "\n";
    out << "generate = " << datasets.generate << "\n";
    out << "pattern_seed = " << datasets.pattern_seed << "\n";
    out << "\n[noise]\n";
    out << "shot_scale = " << format_float(noise.shot_scale) << "\n";
    out << "read_sigma = " << format_float(noise.read_sigma) << "\n";
    out << "seed = " << noise.noise_seed << "\n";
    out << "\n[capture]\n";
    out << "exposure_percentile = " << format_float(exposure_percentile) << "\n";
    out << "\n[gabor]\n";
    out << "wavelength = " << format_float(gabor.wavelength) << "\n";
    out << "sigma = " << format_float(gabor.sigma) << "\n";
    out << "theta_deg = " << format_float(gabor.theta_deg) << "\n";
    out << "stride = " << gabor.stride << "\n";
    out << "\n[extractor]\n";
    out << "block_bits = " << extractor.block_bits << "\n";
    out << "span_images = " << (extractor.span_images ? "true" : "false") << "\n";
    out << "\n[battery]\n";
    out << "subseq_bits = " << battery.subseq_bits << "\n";
    out << "alpha = " << format_float(battery.alpha) << "\n";
    out << "block_frequency_m = " << battery.block_frequency_m << "\n";
    out << "serial_m = " << battery.serial_m << "\n";
    out << "apen_m = " << battery.apen_m << "\n";
    out << "\n[run]\n";
    out << "out_dir = " << quote(run.out_dir) << "\n";
    out << "threads = " << run.threads << "\n";
    out << "export_ascii = " << (run.export_ascii ? "true" : "false") << "\n";
    return out.str();
}

std::string PipelineConfig::digest() const {
    const std::string canonical = to_toml();
    return to_hex(Sha256::hash(canonical));
}

PipelineConfig PipelineConfig::from_toml(const std::string& text) {
    TomlTable table = parse_toml(text);
    PipelineConfig cfg;

    {
        SectionReader sec(table, "puf");
        sec.read_u64("seed", cfg.puf.seed);
        std::string model = "screens";
        sec.read_string("model", model);
        if (model == "screens")
            cfg.puf.kind = PufKind::kPhaseScreens;
        else if (model == "dense")
            cfg.puf.kind = PufKind::kDenseMatrix;
        else
            throw InvalidArgument("config: [puf].model must be \"screens\" or \"dense\"");
        sec.read_int("num_screens", cfg.puf.num_screens);
        sec.read_int("in_width", cfg.puf.in_dims.width);
        sec.read_int("in_height", cfg.puf.in_dims.height);
        sec.read_int("out_width", cfg.puf.out_dims.width);
        sec.read_int("out_height", cfg.puf.out_dims.height);
        sec.read_int("oversample", cfg.puf.oversample);
        sec.read_float("propagation_distance", cfg.puf.propagation_distance);
        sec.finish();
    }
    {
        SectionReader sec(table, "datasets");
        sec.read_int("intra", cfg.datasets.intra);
        sec.read_int("inter", cfg.datasets.inter);
        sec.read_int("generate", cfg.datasets.generate);
        sec.read_u64("pattern_seed", cfg.datasets.pattern_seed);
        sec.finish();
    }
    {
        SectionReader sec(table, "noise");
        sec.read_float("shot_scale", cfg.noise.shot_scale);
        sec.read_float("read_sigma", cfg.noise.read_sigma);
        sec.read_u64("seed", cfg.noise.noise_seed);
        sec.finish();
    }
    {
        SectionReader sec(table, "capture");
        sec.read_float("exposure_percentile", cfg.exposure_percentile);
        sec.finish();
    }
    {
        SectionReader sec(table, "gabor");
        sec.read_float("wavelength", cfg.gabor.wavelength);
        sec.read_float("sigma", cfg.gabor.sigma);
        sec.read_float("theta_deg", cfg.gabor.theta_deg);
        sec.read_int("stride", cfg.gabor.stride);
        sec.finish();
    }
    {
        SectionReader sec(table, "extractor");
        sec.read_u64("block_bits", cfg.extractor.block_bits);
        sec.read_bool("span_images", cfg.extractor.span_images);
        sec.finish();
    }
    {
        SectionReader sec(table, "battery");
        sec.read_u64("subseq_bits", cfg.battery.subseq_bits);
        sec.read_float("alpha", cfg.battery.alpha);
        sec.read_int("block_frequency_m", cfg.battery.block_frequency_m);
        sec.read_int("serial_m", cfg.battery.serial_m);
        sec.read_int("apen_m", cfg.battery.apen_m);
        sec.finish();
    }
    {
        SectionReader sec(table, "run");
        sec.read_string("out_dir", cfg.run.out_dir);
        sec.read_int("threads", cfg.run.threads);
        sec.read_bool("export_ascii", cfg.run.export_ascii);
        sec.finish();
    }
    static const std::set<std::string> known = {"puf",    "datasets",  "noise",   "capture",
                                                "gabor",  "extractor", "battery", "run"};
    for (const auto& [section, entries] : table)
        if (!known.count(section))
            throw InvalidArgument("config: unknown section [" + section + "]");

    cfg.validate();
    return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path.string(), "cannot open config");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_toml(buf.str());
}

bool PipelineConfig::operator==(const PipelineConfig& other) const {
    return puf == other.puf && datasets == other.datasets && noise == other.noise &&
           exposure_percentile == other.exposure_percentile && gabor == other.gabor &&
           extractor == other.extractor && battery == other.battery && run == other.run;
}

}  // namespace speckle
