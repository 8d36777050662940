#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "speckle/common.hpp"
#include "speckle/image.hpp"

namespace speckle {

/// SLM configuration: one phase value per input pixel, radians in [0, 2pi).
struct PhasePattern {
    Dims dims;
    std::vector<double> phase;

    double at(int x, int y) const { return phase[static_cast<size_t>(y) * dims.width + x]; }
};

/// Deterministic i.i.d. uniform phases over [0, 2pi), addressed per pixel.
PhasePattern uniform_phase_pattern(uint64_t seed, Dims dims);

enum class PufKind {
    kPhaseScreens,  // cascade of random phase screens with spectral propagation
    kDenseMatrix,   // dense complex transmission matrix (small dims; cross-check)
};

struct PufParams {
    uint64_t seed = 1;
    int num_screens = 3;
    Dims in_dims{64, 64};
    Dims out_dims{256, 256};
    // Field samples per camera pixel per axis. The scattered field is
    // computed on the finer grid and the camera integrates intensity over
    // oversample^2 samples, the way a real sensor pixel integrates several
    // speckle grains.
    int oversample = 2;
    double propagation_distance = 220.0;  // grid samples of transverse spread per hop
    PufKind kind = PufKind::kPhaseScreens;

    Dims field_dims() const {
        return {out_dims.width * oversample, out_dims.height * oversample};
    }
    void validate() const;
    bool operator==(const PufParams&) const = default;
};

std::string puf_params_to_json(const PufParams& p);
PufParams puf_params_from_json(const std::string& json_text);

struct Field;
class PufModel;
Field propagate_dense(const PufModel& puf, const PhasePattern& pattern);

/// Fixed scattering medium. Fully determined by PufParams; screen phases are
/// derived from the seed on construction and are bit-identical across
/// rebuilds with the same parameters.
class PufModel {
public:
    explicit PufModel(PufParams params);

    const PufParams& params() const { return params_; }
    /// Phase samples of one screen, on the field grid.
    const std::vector<double>& screen(int index) const { return screens_.at(index); }

private:
    PufParams params_;
    std::vector<std::vector<double>> screens_;          // phase-screen model
    std::vector<std::complex<double>> transmission_;    // dense-matrix model
    friend Field propagate_dense(const PufModel&, const PhasePattern&);
};

PufModel create_puf(uint64_t seed, int num_screens, Dims in_dims, Dims out_dims,
                    double propagation_distance);

/// Complex optical field on the oversampled output grid.
struct Field {
    Dims dims;
    std::vector<std::complex<double>> values;

    double energy() const;
};

/// Scatter a phase pattern through the model. Each free-space hop is a
/// unitary spectral step; per-hop field energies can be traced for
/// verification. Dense-matrix models conserve energy only statistically.
Field propagate(const PufModel& puf, const PhasePattern& pattern,
                std::vector<double>* step_energies = nullptr);

struct NoiseParams {
    double shot_scale = 0.35;  // signal-dependent noise strength (grey^0.5 units)
    double read_sigma = 2.0;   // additive Gaussian, grey levels
    uint64_t noise_seed = 0;

    static NoiseParams none() { return {0.0, 0.0, 0}; }
    bool operator==(const NoiseParams&) const = default;
};

/// Quantize a field to an 8-bit frame: camera pixels integrate intensity
/// over oversample^2 field samples, exposure maps the given intensity
/// quantile to grey 255, then shot/read noise, clamp and round.
SpeckleImage capture(const Field& field, const NoiseParams& noise, double exposure_percentile,
                     int oversample = 1);

/// Full simulated acquisition of one frame.
SpeckleImage render(const PufModel& puf, const PhasePattern& pattern, const NoiseParams& noise,
                    double exposure_percentile = 0.99);

}  // namespace speckle
