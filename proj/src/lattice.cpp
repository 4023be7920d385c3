#include "popslab/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pops {

LatticeConfig::LatticeConfig(LatticeKind k, int q, int n, double ts)
    : kind(k), Q(q), N(n), Ts(ts) {
    if (q <= 0 || n <= 0) throw std::invalid_argument("LatticeConfig: Q and N must be positive");
    if (n <= q) throw std::invalid_argument("LatticeConfig: need N > Q (density below one)");
    if (k == LatticeKind::hexagonal && n % 2 != 0)
        throw std::invalid_argument("LatticeConfig: hexagonal lattice requires even N");
    if (!(ts > 0.0)) throw std::invalid_argument("LatticeConfig: Ts must be positive");
}

double SampledWaveform::norm_sq() const {
    double s = 0.0;
    for (const cplx& v : samples) s += std::norm(v);
    return s;
}

double SampledWaveform::norm() const { return std::sqrt(norm_sq()); }

LatticePoint lattice_point(const LatticeConfig& cfg, int m, std::int64_t n) {
    if (cfg.kind == LatticeKind::hexagonal) {
        // (n + m/2)*N, exact since N is even.
        return {n * std::int64_t(cfg.N) + std::int64_t(m) * (cfg.N / 2), m};
    }
    return {n * std::int64_t(cfg.N), m};
}

SampledWaveform modulated_shift(const SampledWaveform& w, const LatticeConfig& cfg,
                                int m, std::int64_t n) {
    if (w.Ts != cfg.Ts)
        throw std::invalid_argument("modulated_shift: sample period mismatch");
    LatticePoint pt = lattice_point(cfg, m, n);
    SampledWaveform out;
    out.Ts = w.Ts;
    out.start_index = w.start_index + pt.time_shift_samples;
    out.samples.resize(w.samples.size());
    // Phase is taken at the global index, reduced mod Q to keep the argument small.
    const double two_pi_over_q = 2.0 * std::numbers::pi / cfg.Q;
    const int mq = ((m % cfg.Q) + cfg.Q) % cfg.Q;
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        std::int64_t g = out.start_index + std::int64_t(i);
        std::int64_t r = ((g % cfg.Q) + cfg.Q) % cfg.Q;
        double ang = two_pi_over_q * double((mq * r) % cfg.Q);
        out.samples[i] = w.samples[i] * cplx(std::cos(ang), std::sin(ang));
    }
    return out;
}

}  // namespace pops
