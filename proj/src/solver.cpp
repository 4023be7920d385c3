#include "popslab/solver.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "popslab/eig.hpp"

namespace pops {

double to_dB(double linear) { return 10.0 * std::log10(linear); }

SampledWaveform gaussian_init(int length, const LatticeConfig& cfg) {
    if (length < 1) throw std::invalid_argument("gaussian_init: length must be positive");
    SampledWaveform w;
    w.Ts = cfg.Ts;
    w.samples.resize(std::size_t(length));
    const double c = 0.5 * (length - 1);
    const double scale = std::numbers::pi / (double(cfg.Q) * double(cfg.N));
    for (int q = 0; q < length; ++q) {
        double d = q - c;
        w.samples[std::size_t(q)] = std::exp(-scale * d * d);
    }
    double nrm = w.norm();
    for (cplx& v : w.samples) v /= nrm;
    return w;
}

double aligned_distance(const SampledWaveform& a, const SampledWaveform& b) {
    if (a.length() != b.length()) return std::numeric_limits<double>::infinity();
    cplx z{0.0, 0.0};
    for (int i = 0; i < a.length(); ++i)
        z += std::conj(a.samples[std::size_t(i)]) * b.samples[std::size_t(i)];
    cplx phase = (std::abs(z) > 0.0) ? z / std::abs(z) : cplx{1.0, 0.0};
    double d2 = 0.0;
    for (int i = 0; i < a.length(); ++i)
        d2 += std::norm(b.samples[std::size_t(i)] * std::conj(phase) - a.samples[std::size_t(i)]);
    return std::sqrt(d2);
}

HalfStepResult half_step(const SampledWaveform& fixed, const ScatteringSpec& spec,
                         const LatticeConfig& cfg, double snr, const Window& window,
                         bool check_eig_residual) {
    const double norm2 = fixed.norm_sq();
    if (!(norm2 > 0.0)) throw std::invalid_argument("half_step: fixed waveform has zero norm");

    HermitianKernel ks = useful_kernel(fixed, spec, window);
    HermitianKernel ki = interference_kernel(fixed, spec, cfg, window);
    HermitianKernel kin = kin_kernel(ki, snr, norm2);

    EigResult eig = hermitian_eig(kin.entries);
    const int n = kin.size();

    double residual = 0.0;
    if (check_eig_residual) residual = eig_residual(kin.entries, eig);

    // Eigenvalue floor. With finite SNR every eigenvalue sits above the noise
    // level; anything below it beyond rounding indicates a broken kernel.
    if (std::isfinite(snr)) {
        const double noise_floor = norm2 / snr;
        for (int i = 0; i < n; ++i) {
            if (eig.values(i) < noise_floor * (1.0 - 1e-6))
                throw std::runtime_error("half_step: KIN eigenvalue below the noise level");
            if (eig.values(i) < noise_floor) eig.values(i) = noise_floor;
        }
    } else {
        const double tr = eig.values.sum();
        if (!(tr > 0.0)) {
            // Interference-free degenerate case: maximize the useful power alone.
            double lam;
            Eigen::VectorXcd u;
            hermitian_top_eig(ks.entries, lam, u);
            SampledWaveform opt;
            opt.Ts = fixed.Ts;
            opt.start_index = window.start;
            opt.samples.assign(u.data(), u.data() + n);
            return {opt, std::numeric_limits<double>::infinity(), residual};
        }
        if (eig.values(0) <= 1e-9 * tr) {
            const double floor = 1e-12 * tr;
            for (int i = 0; i < n; ++i)
                if (eig.values(i) < floor) eig.values(i) = floor;
        }
    }

    Eigen::VectorXd dinv = eig.values.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXcd basis = eig.vectors * dinv.asDiagonal();  // U * Lambda^{-1/2}
    Eigen::MatrixXcd phi_mat = basis.adjoint() * ks.entries * basis;

    double lam;
    Eigen::VectorXcd u;
    hermitian_top_eig(phi_mat, lam, u);

    Eigen::VectorXcd psi = basis * u;
    psi /= psi.norm();

    SampledWaveform opt;
    opt.Ts = fixed.Ts;
    opt.start_index = window.start;
    opt.samples.assign(psi.data(), psi.data() + n);
    return {opt, lam, residual};
}

PopsResult pops_optimize(const ScatteringSpec& spec, const LatticeConfig& cfg,
                         const PopsConfig& pops, int Nphi, int Npsi,
                         std::optional<std::int64_t> window_offset) {
    if (Nphi < 1 || Npsi < 1) throw std::invalid_argument("pops_optimize: bad waveform lengths");
    std::int64_t offset = window_offset.value_or(
        std::llround(spec.mean_delay() + 0.5 * double(Nphi - Npsi)));
    const Window psi_window{offset, Npsi};
    const Window phi_window{0, Nphi};
    const ScatteringSpec rev = reverse(spec);

    SampledWaveform phi = pops.init ? *pops.init : gaussian_init(Nphi, cfg);
    if (phi.length() != Nphi) throw std::invalid_argument("pops_optimize: init length mismatch");
    phi.start_index = 0;
    {
        double nrm = phi.norm();
        if (!(nrm > 0.0)) throw std::invalid_argument("pops_optimize: zero-norm init");
        for (cplx& v : phi.samples) v /= nrm;
    }

    PopsResult result;
    result.window_offset = offset;
    SampledWaveform psi_prev;
    for (int k = 0; k < pops.max_iters; ++k) {
        HalfStepResult ping =
            half_step(phi, spec, cfg, pops.snr, psi_window, pops.check_eig_residual);
        result.sinr_trace_dB.push_back(to_dB(ping.sinr));
        result.max_eig_residual = std::max(result.max_eig_residual, ping.eig_residual);

        HalfStepResult pong =
            half_step(ping.opt, rev, cfg, pops.snr, phi_window, pops.check_eig_residual);
        result.sinr_trace_dB.push_back(to_dB(pong.sinr));
        result.max_eig_residual = std::max(result.max_eig_residual, pong.eig_residual);

        double e_phi = aligned_distance(phi, pong.opt);
        double e_psi = (k > 0) ? aligned_distance(psi_prev, ping.opt)
                               : std::numeric_limits<double>::infinity();
        phi = pong.opt;
        psi_prev = ping.opt;
        result.iterations = k + 1;
        if (e_phi <= pops.epsilon && e_psi <= pops.epsilon) {
            result.converged = true;
            break;
        }
    }
    result.phi_opt = phi;
    result.psi_opt = psi_prev;
    return result;
}

PopsResult window_offset_search(const ScatteringSpec& spec, const LatticeConfig& cfg,
                                const PopsConfig& pops, int Nphi, int Npsi) {
    const std::int64_t center =
        std::llround(spec.mean_delay() + 0.5 * double(Nphi - Npsi));
    PopsResult best;
    bool have = false;
    // Visit offsets by increasing distance from the mean delay so that ties
    // keep the closest one.
    for (std::int64_t d = 0; d <= pops.window_search; ++d) {
        for (int sign : {+1, -1}) {
            if (d == 0 && sign < 0) continue;
            std::int64_t offset = center + sign * d;
            PopsResult r;
            try {
                r = pops_optimize(spec, cfg, pops, Nphi, Npsi, offset);
            } catch (const std::invalid_argument&) {
                continue;  // window slid off every delayed copy
            }
            if (!have || r.final_sinr_dB() > best.final_sinr_dB()) {
                best = std::move(r);
                have = true;
            }
        }
    }
    if (!have) throw std::runtime_error("window_offset_search: no feasible offset");
    return best;
}

double sinr_of_pair(const SampledWaveform& phi, const SampledWaveform& psi,
                    const ScatteringSpec& spec, const LatticeConfig& cfg, double snr) {
    if (!(phi.norm_sq() > 0.0) || !(psi.norm_sq() > 0.0))
        throw std::invalid_argument("sinr_of_pair: zero-norm waveform");
    const Window window{psi.start_index, psi.length()};
    // A receive window that misses every delayed copy of the useful symbol
    // (e.g. a time offset beyond the pulse support) captures no signal.
    const std::int64_t dt = spec.time_offset_samples;
    if (phi.start_index + dt + spec.delay.min_delay() >= window.start + window.size ||
        phi.start_index + dt + phi.length() + spec.delay.max_delay() <= window.start)
        return -std::numeric_limits<double>::infinity();
    HermitianKernel ks = useful_kernel(phi, spec, window);
    HermitianKernel ki = interference_kernel(phi, spec, cfg, window);
    double ps = quadratic_form(ks, psi);
    double pi = quadratic_form(ki, psi);
    if (pi < 0.0) pi = 0.0;  // rounding noise on a PSD form
    double pn = std::isfinite(snr) ? phi.norm_sq() * psi.norm_sq() / snr : 0.0;
    double denom = pi + pn;
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return to_dB(ps / denom);
}

}  // namespace pops
