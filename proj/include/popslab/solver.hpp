#ifndef POPSLAB_SOLVER_HPP
#define POPSLAB_SOLVER_HPP

#include <optional>
#include <vector>

#include "popslab/kernels.hpp"

namespace pops {

struct PopsConfig {
    double snr = kSnrInfinite;  // linear E_s/N_0
    double epsilon = 1e-6;      // waveform-change threshold
    int max_iters = 200;
    std::optional<SampledWaveform> init;  // defaults to the Gaussian pulse
    std::int64_t window_search = 0;       // half-range of the offset search, samples
    std::vector<int> K_grid;              // dispersion-balance candidates (optional)
    bool check_eig_residual = false;
    double eig_residual_tol = 1e-10;
};

struct PopsResult {
    SampledWaveform phi_opt;
    SampledWaveform psi_opt;
    std::vector<double> sinr_trace_dB;  // one entry per half-step
    std::int64_t window_offset = 0;
    bool converged = false;
    int iterations = 0;
    double max_eig_residual = 0.0;

    double final_sinr_dB() const { return sinr_trace_dB.back(); }
};

double to_dB(double linear);

// Unit-norm sampled Gaussian pulse, isotropic in lattice-normalized
// time-frequency coordinates: g_q = exp(-pi (q-c)^2 / (Q N)).
SampledWaveform gaussian_init(int length, const LatticeConfig& cfg);

struct HalfStepResult {
    SampledWaveform opt;  // unit norm, placed on the window
    double sinr;          // linear; achieved generalized Rayleigh quotient
    double eig_residual;  // 0 unless the residual check is enabled
};

// One exact maximization of the SINR quotient over the waveform living on
// `window`, with the other waveform fixed: diagonalize KIN, change basis,
// take the maximum eigenpair and map back.
HalfStepResult half_step(const SampledWaveform& fixed, const ScatteringSpec& spec,
                         const LatticeConfig& cfg, double snr, const Window& window,
                         bool check_eig_residual = false);

// Alternating ping (receive) / pong (transmit, reversed statistics)
// maximization until both iterate distances fall below epsilon.
PopsResult pops_optimize(const ScatteringSpec& spec, const LatticeConfig& cfg,
                         const PopsConfig& pops, int Nphi, int Npsi,
                         std::optional<std::int64_t> window_offset = std::nullopt);

// pops_optimize per candidate window offset around the mean channel delay;
// returns the best-final-SINR result.
PopsResult window_offset_search(const ScatteringSpec& spec, const LatticeConfig& cfg,
                                const PopsConfig& pops, int Nphi, int Npsi);

// SINR of a fixed pair in dB (+infinity when interference-plus-noise is zero).
double sinr_of_pair(const SampledWaveform& phi, const SampledWaveform& psi,
                    const ScatteringSpec& spec, const LatticeConfig& cfg, double snr);

// Iterate distance after global-phase alignment of b onto a.
double aligned_distance(const SampledWaveform& a, const SampledWaveform& b);

}  // namespace pops

#endif
