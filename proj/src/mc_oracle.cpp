#include "popslab/mc_oracle.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace pops {
namespace {

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
    // splitmix64 of the (seed, trial) counter pair
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (trial + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Channel-distorted copy of phi_mn evaluated on the receive window.
// phitilde(g) = sum_p h(p, g) phi_mn(g - p).
void distorted_on_window(const SampledWaveform& copy, const ChannelRealization& ch,
                         std::int64_t w_start, int w_size, std::vector<cplx>& out) {
    out.assign(std::size_t(w_size), cplx{0.0, 0.0});
    for (const RealizedPath& path : ch.paths) {
        for (int r = 0; r < w_size; ++r) {
            std::int64_t g = w_start + r;
            cplx x = copy.at_global(g - path.delay);
            if (x == cplx{}) continue;
            out[std::size_t(r)] += ch.path_gain(path, g) * x;
        }
    }
}

struct NodeRange {
    std::int64_t n_lo, n_hi;
};

// n-range of lattice nodes at subcarrier m whose distorted copy can reach
// the receive window.
NodeRange node_range(const SampledWaveform& phi, const ScatteringSpec& spec,
                     const LatticeConfig& cfg, int m, std::int64_t w_start, int w_size) {
    std::int64_t d_min = spec.delay.min_delay() + spec.time_offset_samples;
    std::int64_t d_max = spec.delay.max_delay() + spec.time_offset_samples;
    std::int64_t base = (cfg.kind == LatticeKind::hexagonal) ? std::int64_t(m) * (cfg.N / 2) : 0;
    // overlap: w_start - len - d_max < phi.start + base + n*N <= w_start + size - 1 - d_min
    std::int64_t lo = w_start - phi.start_index - base - phi.length() - d_max + 1;
    std::int64_t hi = w_start + w_size - 1 - phi.start_index - base - d_min;
    std::int64_t n_lo = std::int64_t(std::floor(double(lo) / cfg.N));
    while (n_lo * std::int64_t(cfg.N) < lo) ++n_lo;
    std::int64_t n_hi = std::int64_t(std::floor(double(hi) / cfg.N));
    while (n_hi * std::int64_t(cfg.N) > hi) --n_hi;
    return {n_lo, n_hi};
}

}  // namespace

LinkEstimate simulate_link(const SampledWaveform& phi, const SampledWaveform& psi,
                           const ScatteringSpec& spec, const LatticeConfig& cfg, double snr,
                           int trials, std::uint64_t seed, bool zero_symbols) {
    if (trials < 100) throw std::invalid_argument("simulate_link: need at least 100 trials");
    const std::int64_t w_start = psi.start_index;
    const int w_size = psi.length();
    const double N0 = std::isfinite(snr) ? phi.norm_sq() / snr : 0.0;

    // Precompute the modulated lattice copies once; channel and symbols are
    // redrawn per trial.
    struct Node {
        SampledWaveform copy;
        bool is_origin;
    };
    std::vector<Node> nodes;
    for (int m = 0; m < cfg.Q; ++m) {
        NodeRange r = node_range(phi, spec, cfg, m, w_start, w_size);
        for (std::int64_t n = r.n_lo; n <= r.n_hi; ++n)
            nodes.push_back({modulated_shift(phi, cfg, m, n), m == 0 && n == 0});
    }

    std::vector<double> ps(static_cast<std::size_t>(trials)), pi(static_cast<std::size_t>(trials)), pn(static_cast<std::size_t>(trials));
#pragma omp parallel
    {
        std::vector<cplx> distorted;
#pragma omp for schedule(static)
        for (int t = 0; t < trials; ++t) {
            std::mt19937_64 rng(trial_seed(seed, std::uint64_t(t)));
            std::normal_distribution<double> gauss(0.0, 1.0);
            std::uniform_int_distribution<int> qpsk(0, 3);

            ChannelRealization ch = sample_realization(spec, phi.Ts, rng(), 64);

            cplx desired{0.0, 0.0}, interference{0.0, 0.0};
            for (const Node& node : nodes) {
                cplx a{0.0, 0.0};
                if (!zero_symbols) {
                    double ang = std::numbers::pi * (0.25 + 0.5 * qpsk(rng));
                    a = {std::cos(ang), std::sin(ang)};
                }
                distorted_on_window(node.copy, ch, w_start, w_size, distorted);
                cplx y{0.0, 0.0};
                for (int r = 0; r < w_size; ++r)
                    y += std::conj(psi.samples[std::size_t(r)]) * distorted[std::size_t(r)];
                if (node.is_origin)
                    desired = a * y;
                else
                    interference += a * y;
            }
            // <psi, n> for white noise of variance N0 per sample.
            cplx noise = std::sqrt(0.5 * N0) * psi.norm() * cplx(gauss(rng), gauss(rng));

            ps[std::size_t(t)] = std::norm(desired);
            pi[std::size_t(t)] = std::norm(interference);
            pn[std::size_t(t)] = std::norm(noise);
        }
    }

    LinkEstimate est;
    est.trials = trials;
    double s = 0.0, i = 0.0, n = 0.0;
    for (int t = 0; t < trials; ++t) {
        s += ps[std::size_t(t)];
        i += pi[std::size_t(t)];
        n += pn[std::size_t(t)];
    }
    est.P_S = s / trials;
    est.P_I = i / trials;
    est.P_N = n / trials;
    est.sinr_dB = 10.0 * std::log10(est.P_S / (est.P_I + est.P_N));

    // Jackknife over trials.
    double mean = 0.0;
    std::vector<double> theta(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        double sj = s - ps[std::size_t(t)];
        double ij = i - pi[std::size_t(t)];
        double nj = n - pn[std::size_t(t)];
        theta[std::size_t(t)] = 10.0 * std::log10(sj / (ij + nj));
        mean += theta[std::size_t(t)];
    }
    mean /= trials;
    double var = 0.0;
    for (double th : theta) var += (th - mean) * (th - mean);
    var *= double(trials - 1) / double(trials);
    est.ci95_dB = 1.96 * std::sqrt(var);
    return est;
}

HermitianKernel empirical_kernel(const SampledWaveform& phi, const ScatteringSpec& spec,
                                 std::int64_t window_start, int window_size, int trials,
                                 std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("empirical_kernel: need at least one trial");
    HermitianKernel out;
    out.window_start = window_start;
    out.entries = Eigen::MatrixXcd::Zero(window_size, window_size);
    std::vector<cplx> distorted;
    Eigen::VectorXcd v(window_size);
    for (int t = 0; t < trials; ++t) {
        ChannelRealization ch = sample_realization(spec, phi.Ts, trial_seed(seed, std::uint64_t(t)), 64);
        distorted_on_window(phi, ch, window_start, window_size, distorted);
        for (int r = 0; r < window_size; ++r) v(r) = distorted[std::size_t(r)];
        out.entries.noalias() += v * v.adjoint();
    }
    out.entries /= double(trials);
    return out;
}

}  // namespace pops
