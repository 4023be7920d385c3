#ifndef POPSLAB_KERNELS_HPP
#define POPSLAB_KERNELS_HPP

#include <cstdint>
#include <limits>

#include "popslab/channel.hpp"
#include "popslab/hermitian_kernel.hpp"
#include "popslab/lattice.hpp"

namespace pops {

// Sample range [start, start + size) over which receive-side quadratic forms
// are evaluated.
struct Window {
    std::int64_t start = 0;
    int size = 0;
};

// Kernel assembly backend. Entries are computed independently, so the two
// backends are bit-identical; `parallel` splits rows across OpenMP threads.
enum class Exec { serial, parallel };

inline constexpr double kSnrInfinite = std::numeric_limits<double>::infinity();

// Even-subcarrier comb: entries (Q/2) * corr(p - q) where (p - q) mod (Q/2) = 0.
HermitianKernel comb_even(int Q, const HermitianKernel& corr);

// Odd-subcarrier comb: +-(Q/2) * corr(p - q) at (p - q) mod Q = 0 / Q/2.
HermitianKernel comb_odd(int Q, const HermitianKernel& corr);

// Useful kernel KS: Doppler correlation entrywise-applied to the
// power-weighted sum of delayed outer products of w, restricted to window.
HermitianKernel useful_kernel(const SampledWaveform& w, const ScatteringSpec& spec,
                              const Window& window, Exec exec = Exec::parallel);

// Total (infinite) kernel: comb-filtered sum of all symbol-period shifts of
// the delayed outer products. Hexagonal lattices combine the even and odd
// combs; rectangular lattices use the full-period comb with shifts n*N only.
HermitianKernel infinite_kernel(const SampledWaveform& w, const ScatteringSpec& spec,
                                const LatticeConfig& cfg, const Window& window,
                                Exec exec = Exec::parallel,
                                std::int64_t extra_shift_margin = 0);

// Direct sum over lattice nodes (m = 0..Q-1, all overlapping n) of the
// channel-averaged outer products of modulated_shift(w, m, n). Oracle path:
// shares no comb identity with infinite_kernel.
HermitianKernel brute_force_total_kernel(const SampledWaveform& w, const ScatteringSpec& spec,
                                         const LatticeConfig& cfg, const Window& window,
                                         std::int64_t extra_shift_margin = 0);

// Interference kernel KI = infinite - useful, symmetrized.
HermitianKernel interference_kernel(const SampledWaveform& w, const ScatteringSpec& spec,
                                    const LatticeConfig& cfg, const Window& window,
                                    Exec exec = Exec::parallel);

// KIN = KI + SNR^-1 * |other|^2 * I (snr may be infinite).
HermitianKernel kin_kernel(const HermitianKernel& ki, double snr, double other_norm_sq);

// Quadratic form w^H K w for a waveform aligned with the kernel window.
double quadratic_form(const HermitianKernel& k, const SampledWaveform& w);

}  // namespace pops

#endif
