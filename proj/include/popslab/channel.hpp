#ifndef POPSLAB_CHANNEL_HPP
#define POPSLAB_CHANNEL_HPP

#include <cstdint>
#include <vector>

#include "popslab/hermitian_kernel.hpp"
#include "popslab/lattice.hpp"

namespace pops {

struct DelayPath {
    std::int64_t delay;  // sample delay p_k
    double power;        // pi_k
};

// Normalized multipath power profile: powers sum to one, delays distinct and
// sorted ascending.
struct DelayProfile {
    std::vector<DelayPath> paths;

    static DelayProfile make(std::vector<DelayPath> paths);

    double mean_delay() const;
    std::int64_t min_delay() const;
    std::int64_t max_delay() const;
    // Total excess delay (K-1)*Ts in samples.
    std::int64_t spread_samples() const { return max_delay() - min_delay(); }
};

struct DopplerLine {
    double nu;      // Hz
    double weight;  // nonnegative, weights sum to one
};

struct DopplerSpectrum {
    enum class Kind { none, jakes, lines };
    Kind kind = Kind::none;
    double f_D = 0.0;                // jakes only
    std::vector<DopplerLine> lines;  // lines only

    static DopplerSpectrum none();
    static DopplerSpectrum jakes(double f_D);
    static DopplerSpectrum discrete_lines(std::vector<DopplerLine> lines);
};

// Separable WSSUS scattering statistics S(p, nu) = alpha(nu) * beta(p), plus
// deterministic time/frequency offsets modelling synchronization errors.
struct ScatteringSpec {
    DelayProfile delay;
    DopplerSpectrum doppler;
    std::int64_t time_offset_samples = 0;  // delta tau / Ts
    double freq_offset = 0.0;              // delta nu, Hz

    double mean_delay() const { return delay.mean_delay() + double(time_offset_samples); }
};

// Exponential truncated decaying profile pi_k = (1-b)/(1-b^K) * b^k on
// contiguous delays p_k = k.
DelayProfile exponential_profile(int K, double b);

// Decay factor giving a fixed 10 dB power drop across K contiguous paths.
double default_decay_factor(int K);

// Time autocorrelation of the Doppler spectrum at sample lag d, including the
// deterministic frequency offset: E[h(q)* h(q+d)] / E[|h|^2].
cplx doppler_correlation(const ScatteringSpec& spec, double Ts, std::int64_t lag);

// size x size matrix with entries J0(2 pi f_D Ts (p - q)).
HermitianKernel jakes_autocorrelation(double f_D, double Ts, int size);

// Mirrors the scattering statistics in time and frequency: S(-p, -nu).
ScatteringSpec reverse(const ScatteringSpec& spec);

// Adds a time synchronization error (sample shift of every delay) and a
// frequency synchronization error (carried in freq_offset).
ScatteringSpec apply_sync_errors(const ScatteringSpec& spec, std::int64_t dt_samples, double dnu);

// Candidate specs for a target spread factor BdTm = 2 f_D (K-1) Ts, one per
// delay-profile length in K_grid; the solver keeps the best-SINR one.
std::vector<ScatteringSpec> balanced_spec(double BdTm, const LatticeConfig& cfg,
                                          const std::vector<int>& K_grid);

// Delay-profile length balancing Doppler and delay dispersion against the
// lattice: T_m * F = B_d * T, i.e. (K-1)^2 = BdTm * Q * N.
int balanced_path_count(double BdTm, const LatticeConfig& cfg);

// One random draw of the K-path impulse response
// h(p, q) = sum_k h_k exp(j 2 pi nu_k Ts q) delta(p - p_k).
struct RealizedLine {
    double nu;  // Hz, includes freq_offset
    cplx amp;
};
struct RealizedPath {
    std::int64_t delay;
    std::vector<RealizedLine> lines;
};
struct ChannelRealization {
    std::vector<RealizedPath> paths;
    double Ts = 1.0;

    // h(p, q) summed over the lines of the path at delay p.
    cplx path_gain(const RealizedPath& path, std::int64_t q) const;
};

ChannelRealization sample_realization(const ScatteringSpec& spec, double Ts,
                                      std::uint64_t seed, int n_doppler_lines = 64);

}  // namespace pops

#endif
