#ifndef POPSLAB_MC_ORACLE_HPP
#define POPSLAB_MC_ORACLE_HPP

#include <cstdint>

#include "popslab/channel.hpp"
#include "popslab/hermitian_kernel.hpp"
#include "popslab/lattice.hpp"

namespace pops {

// Empirical link powers from Monte-Carlo trials. Independent of the analytic
// kernel machinery: the only shared code is lattice/channel types.
struct LinkEstimate {
    double P_S = 0.0;
    double P_I = 0.0;
    double P_N = 0.0;
    double sinr_dB = 0.0;
    double ci95_dB = 0.0;  // jackknife half-width
    int trials = 0;
};

// Transmit random QPSK symbols on every lattice node reaching the receive
// window, pass them through a random channel realization, add noise, and
// split the decision variable into its desired / interference / noise parts.
LinkEstimate simulate_link(const SampledWaveform& phi, const SampledWaveform& psi,
                           const ScatteringSpec& spec, const LatticeConfig& cfg, double snr,
                           int trials, std::uint64_t seed, bool zero_symbols = false);

// Empirical average of the windowed outer product of the channel-distorted
// (0,0) copy of phi; converges to the useful kernel.
HermitianKernel empirical_kernel(const SampledWaveform& phi, const ScatteringSpec& spec,
                                 std::int64_t window_start, int window_size, int trials,
                                 std::uint64_t seed);

}  // namespace pops

#endif
