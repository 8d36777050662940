#include "speckle/puf_sim.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <mutex>
#include <numbers>

#include "json.hpp"

#include "speckle/rng.hpp"

namespace speckle {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// FFTW's planner is not thread-safe; plan creation and destruction are
// serialized behind this mutex. Execution of a created plan is safe.
std::mutex& fftw_mutex() {
    static std::mutex m;
    return m;
}

// In-place 2D FFT working buffer + plans for one grid size.
class FftGrid {
public:
    FftGrid(int width, int height) : width_(width), height_(height) {
        const size_t n = static_cast<size_t>(width) * height;
        buf_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
        if (!buf_) throw InternalError("fftw_malloc failed");
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fwd_ = fftw_plan_dft_2d(height, width, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_2d(height, width, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!fwd_ || !bwd_) throw InternalError("fftw plan creation failed");
    }
    ~FftGrid() {
        std::lock_guard<std::mutex> lock(fftw_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }
    FftGrid(const FftGrid&) = delete;
    FftGrid& operator=(const FftGrid&) = delete;

    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(buf_); }
    void forward() { fftw_execute(fwd_); }
    void backward() { fftw_execute(bwd_); }
    int width() const { return width_; }
    int height() const { return height_; }

private:
    int width_, height_;
    fftw_complex* buf_;
    fftw_plan fwd_, bwd_;
};

// Quadratic spectral phase of one free-space hop. distance is calibrated in
// grid samples: a plane-wave component at frequency nu is displaced by
// distance * nu samples, so the farthest components walk distance/2 samples.
std::vector<double> hop_phase_axis(int n, double distance) {
    std::vector<double> phase(n);
    for (int f = 0; f < n; ++f) {
        const double nu = (f <= n / 2 ? f : f - n) / static_cast<double>(n);
        phase[f] = -std::numbers::pi * distance * nu * nu;
    }
    return phase;
}

}  // namespace

PhasePattern uniform_phase_pattern(uint64_t seed, Dims dims) {
    if (!dims.positive()) throw InvalidArgument("phase pattern: dims must be positive");
    PhasePattern p;
    p.dims = dims;
    p.phase.resize(static_cast<size_t>(dims.pixels()));
    for (size_t i = 0; i < p.phase.size(); ++i)
        p.phase[i] = kTwoPi * Philox::uniform01(seed, streams::kPatternPhase, i);
    return p;
}

void PufParams::validate() const {
    if (num_screens < 1) throw InvalidArgument("puf: num_screens must be >= 1");
    if (!in_dims.positive()) throw InvalidArgument("puf: in_dims must be positive");
    if (!out_dims.positive()) throw InvalidArgument("puf: out_dims must be positive");
    if (oversample < 1) throw InvalidArgument("puf: oversample must be >= 1");
    if (in_dims.width > field_dims().width || in_dims.height > field_dims().height)
        throw InvalidArgument("puf: in_dims must fit inside the output field grid");
    if (propagation_distance < 0.0)
        throw InvalidArgument("puf: propagation_distance must be >= 0");
    if (kind == PufKind::kDenseMatrix) {
        const long long entries = in_dims.pixels() * field_dims().pixels();
        if (entries > (1ll << 22))
            throw InvalidArgument(
                "puf: dense transmission matrix limited to small dims (<= 2^22 entries)");
    }
}

PufModel::PufModel(PufParams params) : params_(params) {
    params_.validate();
    const size_t field_n = static_cast<size_t>(params_.field_dims().pixels());
    if (params_.kind == PufKind::kPhaseScreens) {
        screens_.resize(static_cast<size_t>(params_.num_screens));
        for (int s = 0; s < params_.num_screens; ++s) {
            auto& screen = screens_[static_cast<size_t>(s)];
            screen.resize(field_n);
            for (size_t i = 0; i < field_n; ++i)
                screen[i] = kTwoPi * Philox::uniform01(params_.seed, streams::kScreenPhase, i,
                                                       static_cast<uint32_t>(s));
        }
    } else {
        const size_t in_n = static_cast<size_t>(params_.in_dims.pixels());
        transmission_.resize(field_n * in_n);
        // Entries ~ CN(0, 1 / field_n): summed output energy equals input
        // energy in expectation.
        const double scale = 1.0 / std::sqrt(2.0 * static_cast<double>(field_n));
        for (size_t i = 0; i < transmission_.size(); ++i) {
            const auto g = Philox::normal_pair(params_.seed, streams::kDenseMatrix, i);
            transmission_[i] = {g[0] * scale, g[1] * scale};
        }
    }
}

PufModel create_puf(uint64_t seed, int num_screens, Dims in_dims, Dims out_dims,
                    double propagation_distance) {
    PufParams p;
    p.seed = seed;
    p.num_screens = num_screens;
    p.in_dims = in_dims;
    p.out_dims = out_dims;
    p.propagation_distance = propagation_distance;
    return PufModel(p);
}

double Field::energy() const {
    double e = 0.0;
    for (const auto& v : values) e += std::norm(v);
    return e;
}

Field propagate_dense(const PufModel& puf, const PhasePattern& pattern) {
    const auto& p = puf.params();
    const size_t in_n = static_cast<size_t>(p.in_dims.pixels());
    std::vector<std::complex<double>> in(in_n);
    for (size_t i = 0; i < in_n; ++i) in[i] = std::polar(1.0, pattern.phase[i]);

    Field out;
    out.dims = p.field_dims();
    out.values.assign(static_cast<size_t>(out.dims.pixels()), {0.0, 0.0});
    for (size_t j = 0; j < out.values.size(); ++j) {
        std::complex<double> acc{0.0, 0.0};
        const std::complex<double>* row = puf.transmission_.data() + j * in_n;
        for (size_t i = 0; i < in_n; ++i) acc += row[i] * in[i];
        out.values[j] = acc;
    }
    return out;
}

Field propagate(const PufModel& puf, const PhasePattern& pattern,
                std::vector<double>* step_energies) {
    const auto& p = puf.params();
    if (pattern.dims != p.in_dims)
        throw InvalidArgument("propagate: pattern dims " + to_string(pattern.dims) +
                              " do not match puf in_dims " + to_string(p.in_dims));
    if (step_energies) step_energies->clear();

    if (p.kind == PufKind::kDenseMatrix) {
        Field out = propagate_dense(puf, pattern);
        if (step_energies) step_energies->push_back(out.energy());
        return out;
    }

    const Dims fd = p.field_dims();
    FftGrid grid(fd.width, fd.height);
    std::complex<double>* field = grid.data();
    std::fill(field, field + fd.pixels(), std::complex<double>{0.0, 0.0});

    // Source aperture centered on the field grid at native sampling.
    const int ox = (fd.width - p.in_dims.width) / 2;
    const int oy = (fd.height - p.in_dims.height) / 2;
    for (int y = 0; y < p.in_dims.height; ++y)
        for (int x = 0; x < p.in_dims.width; ++x)
            field[static_cast<size_t>(oy + y) * fd.width + ox + x] =
                std::polar(1.0, pattern.at(x, y));

    const auto phase_x = hop_phase_axis(fd.width, p.propagation_distance);
    const auto phase_y = hop_phase_axis(fd.height, p.propagation_distance);
    const double inv_n = 1.0 / static_cast<double>(fd.pixels());

    for (int s = 0; s < p.num_screens; ++s) {
        // Free-space hop: unitary all-pass filter in the spectral domain.
        grid.forward();
        for (int fy = 0; fy < fd.height; ++fy) {
            const double py = phase_y[fy];
            std::complex<double>* row = field + static_cast<size_t>(fy) * fd.width;
            for (int fx = 0; fx < fd.width; ++fx)
                row[fx] *= std::polar(1.0, phase_x[fx] + py);
        }
        grid.backward();
        for (long long i = 0; i < fd.pixels(); ++i) field[i] *= inv_n;
        if (step_energies) {
            double e = 0.0;
            for (long long i = 0; i < fd.pixels(); ++i) e += std::norm(field[i]);
            step_energies->push_back(e);
        }
        // Scattering screen: pointwise phase, modulus preserved.
        const auto& screen = puf.screen(s);
        for (long long i = 0; i < fd.pixels(); ++i)
            field[i] *= std::polar(1.0, screen[static_cast<size_t>(i)]);
    }

    Field out;
    out.dims = fd;
    out.values.assign(field, field + fd.pixels());
    return out;
}

SpeckleImage capture(const Field& field, const NoiseParams& noise, double exposure_percentile,
                     int oversample) {
    if (!(exposure_percentile > 0.0 && exposure_percentile <= 1.0))
        throw InvalidArgument("capture: exposure_percentile must be in (0, 1]");
    if (oversample < 1) throw InvalidArgument("capture: oversample must be >= 1");
    if (field.dims.width % oversample != 0 || field.dims.height % oversample != 0)
        throw InvalidArgument("capture: field dims must be a multiple of oversample");

    const Dims cam{field.dims.width / oversample, field.dims.height / oversample};
    const size_t cam_n = static_cast<size_t>(cam.pixels());
    std::vector<double> intensity(cam_n, 0.0);
    const double inv_area = 1.0 / (static_cast<double>(oversample) * oversample);
    for (int y = 0; y < field.dims.height; ++y) {
        const int cy = y / oversample;
        for (int x = 0; x < field.dims.width; ++x) {
            const double v = std::norm(field.values[static_cast<size_t>(y) * field.dims.width + x]);
            intensity[static_cast<size_t>(cy) * cam.width + x / oversample] += v * inv_area;
        }
    }
    for (double v : intensity)
        if (!std::isfinite(v)) throw InternalError("capture: non-finite field intensity");

    // Exposure: the requested quantile of pixel intensity maps to grey 255.
    std::vector<double> sorted = intensity;
    const size_t k = static_cast<size_t>(std::min<long long>(
        static_cast<long long>(cam_n) - 1,
        std::max<long long>(0, static_cast<long long>(
                                   std::ceil(exposure_percentile * static_cast<double>(cam_n))) -
                               1)));
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<ptrdiff_t>(k), sorted.end());
    const double q = sorted[k];

    SpeckleImage img(cam);
    if (q <= 0.0) return img;  // dark field -> all-zero frame
    const double scale = 255.0 / q;

    const bool noiseless = noise.shot_scale == 0.0 && noise.read_sigma == 0.0;
    for (size_t i = 0; i < cam_n; ++i) {
        double v = intensity[i] * scale;
        if (!noiseless) {
            const auto g = Philox::normal_pair(noise.noise_seed, streams::kCaptureNoise, i);
            v += noise.shot_scale * std::sqrt(std::max(v, 0.0)) * g[0] + noise.read_sigma * g[1];
        }
        img.data()[i] = static_cast<uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
    }
    return img;
}

SpeckleImage render(const PufModel& puf, const PhasePattern& pattern, const NoiseParams& noise,
                    double exposure_percentile) {
    const Field field = propagate(puf, pattern);
    return capture(field, noise, exposure_percentile, puf.params().oversample);
}

std::string puf_params_to_json(const PufParams& p) {
    nlohmann::json j;
    j["seed"] = p.seed;
    j["model"] = p.kind == PufKind::kPhaseScreens ? "screens" : "dense";
    j["num_screens"] = p.num_screens;
    j["in_width"] = p.in_dims.width;
    j["in_height"] = p.in_dims.height;
    j["out_width"] = p.out_dims.width;
    j["out_height"] = p.out_dims.height;
    j["oversample"] = p.oversample;
    j["propagation_distance"] = p.propagation_distance;
    return j.dump(2);
}

PufParams puf_params_from_json(const std::string& json_text) {
    const auto j = nlohmann::json::parse(json_text);
    PufParams p;
    p.seed = j.at("seed").get<uint64_t>();
    const std::string model = j.at("model").get<std::string>();
    if (model == "screens")
        p.kind = PufKind::kPhaseScreens;
    else if (model == "dense")
        p.kind = PufKind::kDenseMatrix;
    else
        throw InvalidArgument("puf json: unknown model '" + model + "'");
    p.num_screens = j.at("num_screens").get<int>();
    p.in_dims = {j.at("in_width").get<int>(), j.at("in_height").get<int>()};
    p.out_dims = {j.at("out_width").get<int>(), j.at("out_height").get<int>()};
    p.oversample = j.at("oversample").get<int>();
    p.propagation_distance = j.at("propagation_distance").get<double>();
    p.validate();
    return p;
}

}  // namespace speckle
