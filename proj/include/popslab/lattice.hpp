#ifndef POPSLAB_LATTICE_HPP
#define POPSLAB_LATTICE_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace pops {

using cplx = std::complex<double>;

enum class LatticeKind { hexagonal, rectangular };

// Time-frequency lattice geometry. Q subcarriers spaced by F = 1/(Q*Ts),
// symbol period T = N*Ts with N > Q (undersampled, density Q/N < 1).
// Hexagonal layout shifts odd subcarriers by T/2, which requires N even.
struct LatticeConfig {
    LatticeKind kind = LatticeKind::hexagonal;
    int Q = 0;
    int N = 0;
    double Ts = 1.0;

    LatticeConfig() = default;
    LatticeConfig(LatticeKind k, int q, int n, double ts = 1.0);

    double T() const { return N * Ts; }
    double F() const { return 1.0 / (Q * Ts); }
    double density() const { return double(Q) / double(N); }
    double ft_product() const { return double(N) / double(Q); }
};

// Finite-support waveform on the global sample grid. samples[i] sits at
// global index start_index + i, i.e. time (start_index + i)*Ts.
struct SampledWaveform {
    std::vector<cplx> samples;
    double Ts = 1.0;
    std::int64_t start_index = 0;

    int length() const { return int(samples.size()); }
    double duration() const { return samples.size() * Ts; }
    double norm_sq() const;
    double norm() const;

    // Sample at a global grid index; zero outside the support.
    cplx at_global(std::int64_t g) const {
        std::int64_t i = g - start_index;
        if (i < 0 || i >= std::int64_t(samples.size())) return {0.0, 0.0};
        return samples[std::size_t(i)];
    }
};

struct LatticePoint {
    std::int64_t time_shift_samples;
    int subcarrier_index;
};

// Time/frequency shift indices of lattice node (m, n).
LatticePoint lattice_point(const LatticeConfig& cfg, int m, std::int64_t n);

// Shifted-and-modulated copy of w for lattice node (m, n): the time shift of
// lattice_point plus a per-sample phase exp(j*2*pi*m*g/Q) at global index g.
SampledWaveform modulated_shift(const SampledWaveform& w, const LatticeConfig& cfg,
                                int m, std::int64_t n);

}  // namespace pops

#endif
