#include "popslab/kernels.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pops {
namespace {

void check_window(const Window& window) {
    if (window.size < 1) throw std::invalid_argument("kernel window must be non-empty");
}

// Doppler correlation over all lags appearing in a size x size kernel;
// lag d is stored at index d + size - 1.
std::vector<cplx> correlation_table(const ScatteringSpec& spec, double Ts, int size) {
    std::vector<cplx> corr(static_cast<std::size_t>(2 * size - 1));
    for (int d = -(size - 1); d <= size - 1; ++d)
        corr[std::size_t(d + size - 1)] = doppler_correlation(spec, Ts, d);
    return corr;
}

// Effective path delays including the deterministic time offset.
std::vector<std::int64_t> effective_delays(const ScatteringSpec& spec) {
    std::vector<std::int64_t> d;
    d.reserve(spec.delay.paths.size());
    for (const DelayPath& p : spec.delay.paths) d.push_back(p.delay + spec.time_offset_samples);
    return d;
}

void require_overlap(const SampledWaveform& w, const std::vector<std::int64_t>& delays,
                     const Window& window) {
    for (std::int64_t dk : delays) {
        std::int64_t lo = w.start_index + dk;
        std::int64_t hi = lo + w.length();
        if (hi > window.start && lo < window.start + window.size) return;
    }
    throw std::invalid_argument("kernel window does not overlap any delayed waveform copy");
}

// All time shifts s = s0 + n*step whose shifted copy of w overlaps the
// window, ascending; margin widens the range (used to show the bound tight).
std::vector<std::int64_t> overlapping_shifts(const SampledWaveform& w, std::int64_t s0,
                                             std::int64_t step, const Window& window,
                                             std::int64_t margin) {
    // Overlap requires window.start - w.len < w.start + s < window.start + size.
    std::int64_t lo = window.start - w.start_index - w.length() + 1 - margin;
    std::int64_t hi = window.start + window.size - 1 - w.start_index + margin;
    std::int64_t n_lo = std::int64_t(std::floor(double(lo - s0) / double(step)));
    while (s0 + n_lo * step < lo) ++n_lo;
    std::vector<std::int64_t> shifts;
    for (std::int64_t n = n_lo; s0 + n * step <= hi; ++n) shifts.push_back(s0 + n * step);
    return shifts;
}

}  // namespace

HermitianKernel comb_even(int Q, const HermitianKernel& corr) {
    if (Q % 2 != 0) throw std::invalid_argument("comb_even: Q must be even");
    HermitianKernel out;
    out.window_start = corr.window_start;
    const int n = corr.size();
    out.entries = Eigen::MatrixXcd::Zero(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q)
            if ((p - q) % (Q / 2) == 0) out.entries(p, q) = 0.5 * Q * corr.entries(p, q);
    return out;
}

HermitianKernel comb_odd(int Q, const HermitianKernel& corr) {
    if (Q % 2 != 0) throw std::invalid_argument("comb_odd: Q must be even");
    HermitianKernel out;
    out.window_start = corr.window_start;
    const int n = corr.size();
    out.entries = Eigen::MatrixXcd::Zero(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            std::int64_t r = (((p - q) % Q) + Q) % Q;
            if (r == 0)
                out.entries(p, q) = 0.5 * Q * corr.entries(p, q);
            else if (r == Q / 2)
                out.entries(p, q) = -0.5 * Q * corr.entries(p, q);
        }
    return out;
}

HermitianKernel useful_kernel(const SampledWaveform& w, const ScatteringSpec& spec,
                              const Window& window, Exec exec) {
    check_window(window);
    const auto delays = effective_delays(spec);
    require_overlap(w, delays, window);
    const auto corr = correlation_table(spec, w.Ts, window.size);
    const int n = window.size;
    const std::size_t K = delays.size();

    HermitianKernel out;
    out.window_start = window.start;
    out.entries.resize(n, n);
    const bool par = (exec == Exec::parallel);
#pragma omp parallel for schedule(static) if (par)
    for (int r = 0; r < n; ++r) {
        const std::int64_t gp = window.start + r;
        for (int c = 0; c < n; ++c) {
            const std::int64_t gq = window.start + c;
            cplx acc{0.0, 0.0};
            for (std::size_t k = 0; k < K; ++k) {
                cplx a = w.at_global(gp - delays[k]);
                if (a == cplx{}) continue;
                cplx b = w.at_global(gq - delays[k]);
                acc += spec.delay.paths[k].power * a * std::conj(b);
            }
            out.entries(r, c) = corr[std::size_t(r - c + n - 1)] * acc;
        }
    }
    out.symmetrize();
    return out;
}

HermitianKernel infinite_kernel(const SampledWaveform& w, const ScatteringSpec& spec,
                                const LatticeConfig& cfg, const Window& window, Exec exec,
                                std::int64_t extra_shift_margin) {
    check_window(window);
    const auto delays = effective_delays(spec);
    require_overlap(w, delays, window);
    const auto corr = correlation_table(spec, w.Ts, window.size);
    const int n = window.size;
    const int Q = cfg.Q;
    const std::size_t K = delays.size();
    const bool hex = (cfg.kind == LatticeKind::hexagonal);

    // Shift sets per path: "even" class n*N (all subcarriers for rectangular,
    // even subcarriers for hexagonal), "odd" class (n + 1/2)*N for hexagonal.
    std::vector<std::vector<std::int64_t>> even_shifts(K), odd_shifts(K);
    for (std::size_t k = 0; k < K; ++k) {
        even_shifts[k] = overlapping_shifts(w, delays[k], cfg.N, window, extra_shift_margin);
        if (hex)
            odd_shifts[k] =
                overlapping_shifts(w, delays[k] + cfg.N / 2, cfg.N, window, extra_shift_margin);
    }

    HermitianKernel out;
    out.window_start = window.start;
    out.entries = Eigen::MatrixXcd::Zero(n, n);
    const bool par = (exec == Exec::parallel);
#pragma omp parallel for schedule(static) if (par)
    for (int r = 0; r < n; ++r) {
        const std::int64_t gp = window.start + r;
        for (int c = 0; c < n; ++c) {
            const std::int64_t d = r - c;
            const std::int64_t rem = ((d % Q) + Q) % Q;
            double comb_e = 0.0, comb_o = 0.0;
            if (hex) {
                if (rem % (Q / 2) == 0) comb_e = 0.5 * Q;
                if (rem == 0)
                    comb_o = 0.5 * Q;
                else if (rem == Q / 2)
                    comb_o = -0.5 * Q;
            } else {
                if (rem == 0) comb_e = double(Q);
            }
            if (comb_e == 0.0 && comb_o == 0.0) continue;

            const std::int64_t gq = window.start + c;
            cplx acc{0.0, 0.0};
            for (std::size_t k = 0; k < K; ++k) {
                const double pw = spec.delay.paths[k].power;
                if (comb_e != 0.0) {
                    cplx s{0.0, 0.0};
                    for (std::int64_t sh : even_shifts[k]) {
                        cplx a = w.at_global(gp - sh);
                        if (a == cplx{}) continue;
                        s += a * std::conj(w.at_global(gq - sh));
                    }
                    acc += comb_e * pw * s;
                }
                if (comb_o != 0.0) {
                    cplx s{0.0, 0.0};
                    for (std::int64_t sh : odd_shifts[k]) {
                        cplx a = w.at_global(gp - sh);
                        if (a == cplx{}) continue;
                        s += a * std::conj(w.at_global(gq - sh));
                    }
                    acc += comb_o * pw * s;
                }
            }
            out.entries(r, c) = corr[std::size_t(d + n - 1)] * acc;
        }
    }
    out.symmetrize();
    return out;
}

HermitianKernel brute_force_total_kernel(const SampledWaveform& w, const ScatteringSpec& spec,
                                         const LatticeConfig& cfg, const Window& window,
                                         std::int64_t extra_shift_margin) {
    check_window(window);
    const auto delays = effective_delays(spec);
    require_overlap(w, delays, window);
    const int n = window.size;

    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(n, n);
    Eigen::VectorXcd v(n);
    for (int m = 0; m < cfg.Q; ++m) {
        // n-range: every symbol shift whose copy can reach the window.
        std::int64_t base = (cfg.kind == LatticeKind::hexagonal)
                                ? std::int64_t(m) * (cfg.N / 2)
                                : 0;
        for (std::size_t k = 0; k < delays.size(); ++k) {
            const double pw = spec.delay.paths[k].power;
            for (std::int64_t sh :
                 overlapping_shifts(w, base + delays[k], cfg.N, window, extra_shift_margin)) {
                std::int64_t nn = (sh - base - delays[k]) / cfg.N;
                SampledWaveform copy = modulated_shift(w, cfg, m, nn);
                for (int r = 0; r < n; ++r)
                    v(r) = copy.at_global(window.start + r - delays[k]);
                acc.noalias() += pw * v * v.adjoint();
            }
        }
    }
    const auto corr = correlation_table(spec, w.Ts, n);
    HermitianKernel out;
    out.window_start = window.start;
    out.entries.resize(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            out.entries(r, c) = corr[std::size_t(r - c + n - 1)] * acc(r, c);
    out.symmetrize();
    return out;
}

HermitianKernel interference_kernel(const SampledWaveform& w, const ScatteringSpec& spec,
                                    const LatticeConfig& cfg, const Window& window, Exec exec) {
    HermitianKernel total = infinite_kernel(w, spec, cfg, window, exec);
    HermitianKernel ks = useful_kernel(w, spec, window, exec);
    total.entries -= ks.entries;
    total.symmetrize();
    return total;
}

HermitianKernel kin_kernel(const HermitianKernel& ki, double snr, double other_norm_sq) {
    if (!(snr > 0.0)) throw std::invalid_argument("kin_kernel: snr must be positive");
    if (!(other_norm_sq > 0.0)) throw std::invalid_argument("kin_kernel: norm must be positive");
    HermitianKernel out = ki;
    if (std::isfinite(snr))
        out.entries += (other_norm_sq / snr) * Eigen::MatrixXcd::Identity(ki.size(), ki.size());
    return out;
}

double quadratic_form(const HermitianKernel& k, const SampledWaveform& w) {
    if (w.length() != k.size() || w.start_index != k.window_start)
        throw std::invalid_argument("quadratic_form: waveform not aligned with kernel window");
    Eigen::Map<const Eigen::VectorXcd> v(w.samples.data(), w.length());
    return (v.adjoint() * k.entries * v)(0, 0).real();
}

}  // namespace pops
