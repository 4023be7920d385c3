#ifndef POPSLAB_DESCRIPTOR_HPP
#define POPSLAB_DESCRIPTOR_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "popslab/lattice.hpp"
#include "popslab/metrics.hpp"

namespace pops {

enum class Command {
    optimize,
    sweep_ft,
    sweep_spread,
    sweep_q,
    psd,
    sensitivity,
    codebook,
    validate,
};

// Parsed and validated experiment description: a flat UTF-8 key/value file
// with '#' comments, dotted keys and one `key = value` pair per line.
struct ExperimentDescriptor {
    Command command;

    LatticeKind kind = LatticeKind::hexagonal;
    int Q = 0;
    int N = 0;  // from lattice.N or lattice.Q + lattice.CP
    double Ts = 1.0;

    // Exactly one channel parameterization: BdTm, or the explicit triple.
    std::optional<double> BdTm;
    std::optional<double> fD_Ts;
    std::optional<int> K;
    std::optional<double> b;
    std::vector<int> K_grid;

    double snr = kSnrInfinite;  // linear
    double epsilon = 1e-6;
    int max_iters = 200;
    int D_over_T = 0;
    std::int64_t window_search = 0;

    std::vector<double> ft_list;
    std::vector<int> d_list;
    std::vector<double> bdtm_list;
    std::vector<int> q_list;
    std::optional<SyncAxis> sync_axis;
    double sweep_min = 0.0, sweep_max = 0.0;
    int sweep_steps = 0;

    int psd_oversample = 64;
    int psd_n_subcarriers = 65;

    int mc_trials = 10000;
    std::uint64_t seed = 0;

    // Scattering statistics implied by the channel keys (requires lattice).
    ScatteringSpec channel_spec() const;
    LatticeConfig lattice() const;
};

ExperimentDescriptor parse_descriptor(const std::string& text);
ExperimentDescriptor parse_descriptor_file(const std::string& path);

}  // namespace pops

#endif
