#ifndef POPSLAB_METRICS_HPP
#define POPSLAB_METRICS_HPP

#include <string>
#include <utility>
#include <vector>

#include "popslab/solver.hpp"

namespace pops {

struct SweepResult {
    std::string axis_name;
    std::vector<double> axis_values;
    std::vector<std::pair<std::string, std::vector<double>>> series;  // dB
    std::string metadata;
};

struct CodebookEntry {
    double design_BdTm = 0.0;
    SampledWaveform phi;
    SampledWaveform psi;
    LatticeConfig lattice;
    int K = 0;             // delay-profile length the design settled on
    double snr = kSnrInfinite;
    double sir_dB = 0.0;   // achieved value at the design point
};

struct Codebook {
    std::vector<CodebookEntry> entries;  // design_BdTm strictly increasing
};

// Designed pair together with the channel statistics it was optimized for.
struct DesignOutcome {
    PopsResult result;
    ScatteringSpec spec;
    int K = 0;
};

// Full design run for one lattice: dispersion-balance search over the K grid
// (default: the single balanced K) and window-offset search, D = D_over_T * T.
DesignOutcome design_waveforms(double BdTm, const LatticeConfig& cfg, const PopsConfig& pops,
                               int D_over_T);

// CP-OFDM reference pair on a rectangular lattice with N = Q + cp: rectangular
// transmit pulse of N samples, rectangular receive pulse of Q samples starting
// cp samples into the transmit window.
struct OfdmPair {
    SampledWaveform phi;
    SampledWaveform psi;
    LatticeConfig cfg;
};
OfdmPair conventional_ofdm_pair(int Q, int cp, double Ts = 1.0);

// Optimized SIR/SINR versus lattice density, one series per (kind, D).
SweepResult sweep_ft(int Q, double BdTm, const std::vector<int>& D_over_T_list,
                     const std::vector<double>& FT_list,
                     const std::vector<LatticeKind>& kinds, const PopsConfig& pops);

// SIR versus channel spread factor for hexagonal / rectangular / CP-OFDM.
SweepResult sweep_spread(const LatticeConfig& cfg, int D_over_T,
                         const std::vector<double>& BdTm_list, const PopsConfig& pops);

// SIR versus subcarrier count at fixed FT, hexagonal lattice.
SweepResult sweep_q(const std::vector<int>& Q_list, const std::vector<int>& D_over_T_list,
                    double FT, double BdTm, const PopsConfig& pops);

struct PsdResult {
    std::vector<double> freq_over_F;  // centered axis, resolution 1/oversample
    std::vector<double> psd_dB;       // peak-normalized
    std::vector<double> psd_linear;   // |DFT|^2 / length
};

// Periodogram of the zero-padded waveform on oversample*Q points.
PsdResult psd(const SampledWaveform& w, int Q, int oversample = 64);

// Sum of the linear PSDs of n_subcarriers contiguous modulated copies.
PsdResult aggregate_psd(const SampledWaveform& w, const LatticeConfig& cfg,
                        int n_subcarriers = 65, int oversample = 64);

// Maximum peak-normalized PSD beyond band_edge + offset (in units of F).
double oob_leakage(const PsdResult& p, double offset_F, double band_edge_F = 0.0);

enum class SyncAxis { freq, time };

// SIR of a FIXED pair under swept synchronization errors (no re-optimization).
// freq axis values are delta_nu / F; time axis values are delta_tau / Ts.
SweepResult sensitivity_sweep(const SampledWaveform& phi, const SampledWaveform& psi,
                              const ScatteringSpec& spec, const LatticeConfig& cfg, double snr,
                              SyncAxis axis, const std::vector<double>& values,
                              const std::string& series_name = "sir");

// Designs one pair per BdTm value; entries sorted by design point.
Codebook build_codebook(const std::vector<double>& design_BdTm, const LatticeConfig& cfg,
                        const PopsConfig& pops, int D_over_T);

// SIR of each codebook entry across the evaluation grid plus the upper
// envelope (max over entries).
SweepResult mismatch_matrix(const Codebook& cb, const std::vector<double>& eval_BdTm,
                            double snr);

// Rotate so the largest-magnitude sample is real positive.
void canonicalize_phase(SampledWaveform& w);

}  // namespace pops

#endif
