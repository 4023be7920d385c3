#include "popslab/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "popslab/bessel.hpp"

namespace pops {

DelayProfile DelayProfile::make(std::vector<DelayPath> paths) {
    if (paths.empty()) throw std::invalid_argument("DelayProfile: no paths");
    std::sort(paths.begin(), paths.end(),
              [](const DelayPath& a, const DelayPath& b) { return a.delay < b.delay; });
    double total = 0.0;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (paths[i].power < 0.0) throw std::invalid_argument("DelayProfile: negative path power");
        if (i > 0 && paths[i].delay == paths[i - 1].delay)
            throw std::invalid_argument("DelayProfile: duplicate delay");
        total += paths[i].power;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("DelayProfile: powers must sum to one");
    return DelayProfile{std::move(paths)};
}

double DelayProfile::mean_delay() const {
    double m = 0.0;
    for (const DelayPath& p : paths) m += p.power * double(p.delay);
    return m;
}

std::int64_t DelayProfile::min_delay() const { return paths.front().delay; }
std::int64_t DelayProfile::max_delay() const { return paths.back().delay; }

DopplerSpectrum DopplerSpectrum::none() { return DopplerSpectrum{}; }

DopplerSpectrum DopplerSpectrum::jakes(double f_D) {
    if (f_D < 0.0) throw std::invalid_argument("DopplerSpectrum: f_D must be nonnegative");
    if (f_D == 0.0) return none();
    DopplerSpectrum s;
    s.kind = Kind::jakes;
    s.f_D = f_D;
    return s;
}

DopplerSpectrum DopplerSpectrum::discrete_lines(std::vector<DopplerLine> lines) {
    if (lines.empty()) throw std::invalid_argument("DopplerSpectrum: no lines");
    double total = 0.0;
    for (const DopplerLine& l : lines) {
        if (l.weight < 0.0) throw std::invalid_argument("DopplerSpectrum: negative line weight");
        total += l.weight;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("DopplerSpectrum: line weights must sum to one");
    DopplerSpectrum s;
    s.kind = Kind::lines;
    s.lines = std::move(lines);
    return s;
}

DelayProfile exponential_profile(int K, double b) {
    if (K < 1) throw std::invalid_argument("exponential_profile: K must be positive");
    if (K == 1) return DelayProfile{{{0, 1.0}}};
    if (!(b > 0.0 && b < 1.0))
        throw std::invalid_argument("exponential_profile: b must lie in (0, 1)");
    std::vector<DelayPath> paths(static_cast<std::size_t>(K));
    const double scale = (1.0 - b) / (1.0 - std::pow(b, K));
    double bk = 1.0;
    for (int k = 0; k < K; ++k) {
        paths[std::size_t(k)] = {k, scale * bk};
        bk *= b;
    }
    // Renormalize the floating-point sum exactly to one.
    double total = 0.0;
    for (const DelayPath& p : paths) total += p.power;
    for (DelayPath& p : paths) p.power /= total;
    return DelayProfile{std::move(paths)};
}

double default_decay_factor(int K) {
    if (K < 2) throw std::invalid_argument("default_decay_factor: need K >= 2");
    return std::pow(0.1, 1.0 / double(K - 1));
}

cplx doppler_correlation(const ScatteringSpec& spec, double Ts, std::int64_t lag) {
    const double tau = Ts * double(lag);
    cplx corr;
    switch (spec.doppler.kind) {
        case DopplerSpectrum::Kind::none:
            corr = {1.0, 0.0};
            break;
        case DopplerSpectrum::Kind::jakes:
            corr = {bessel_j0(2.0 * std::numbers::pi * spec.doppler.f_D * tau), 0.0};
            break;
        case DopplerSpectrum::Kind::lines: {
            corr = {0.0, 0.0};
            for (const DopplerLine& l : spec.doppler.lines) {
                double ang = 2.0 * std::numbers::pi * l.nu * tau;
                corr += l.weight * cplx(std::cos(ang), std::sin(ang));
            }
            break;
        }
    }
    if (spec.freq_offset != 0.0) {
        double ang = 2.0 * std::numbers::pi * spec.freq_offset * tau;
        corr *= cplx(std::cos(ang), std::sin(ang));
    }
    return corr;
}

HermitianKernel jakes_autocorrelation(double f_D, double Ts, int size) {
    if (size < 1) throw std::invalid_argument("jakes_autocorrelation: size must be positive");
    if (!(f_D >= 0.0) || f_D >= 0.5 / Ts)
        throw std::invalid_argument("jakes_autocorrelation: f_D must lie in [0, Nyquist)");
    HermitianKernel k;
    k.entries.resize(size, size);
    std::vector<double> row(static_cast<std::size_t>(size));
    for (int d = 0; d < size; ++d)
        row[std::size_t(d)] = bessel_j0(2.0 * std::numbers::pi * f_D * Ts * double(d));
    for (int p = 0; p < size; ++p)
        for (int q = 0; q < size; ++q)
            k.entries(p, q) = row[std::size_t(std::abs(p - q))];
    return k;
}

ScatteringSpec reverse(const ScatteringSpec& spec) {
    ScatteringSpec out = spec;
    for (DelayPath& p : out.delay.paths) p.delay = -p.delay;
    std::reverse(out.delay.paths.begin(), out.delay.paths.end());
    if (out.doppler.kind == DopplerSpectrum::Kind::lines)
        for (DopplerLine& l : out.doppler.lines) l.nu = -l.nu;
    out.time_offset_samples = -out.time_offset_samples;
    out.freq_offset = -out.freq_offset;
    return out;
}

ScatteringSpec apply_sync_errors(const ScatteringSpec& spec, std::int64_t dt_samples, double dnu) {
    ScatteringSpec out = spec;
    out.time_offset_samples += dt_samples;
    out.freq_offset += dnu;
    return out;
}

int balanced_path_count(double BdTm, const LatticeConfig& cfg) {
    if (!(BdTm > 0.0)) throw std::invalid_argument("balanced_path_count: BdTm must be positive");
    int K = 1 + int(std::lround(std::sqrt(BdTm * double(cfg.Q) * double(cfg.N))));
    return std::max(K, 2);
}

std::vector<ScatteringSpec> balanced_spec(double BdTm, const LatticeConfig& cfg,
                                          const std::vector<int>& K_grid) {
    if (K_grid.empty()) throw std::invalid_argument("balanced_spec: empty K grid");
    if (!(BdTm > 0.0)) throw std::invalid_argument("balanced_spec: BdTm must be positive");
    std::vector<ScatteringSpec> specs;
    specs.reserve(K_grid.size());
    for (int K : K_grid) {
        if (K < 2) throw std::invalid_argument("balanced_spec: K grid entries must be >= 2");
        const double Tm = double(K - 1) * cfg.Ts;
        const double f_D = BdTm / (2.0 * Tm);  // B_d = 2 f_D
        if (f_D >= 0.5 / cfg.Ts)
            throw std::invalid_argument("balanced_spec: implied f_D reaches Nyquist");
        ScatteringSpec s;
        s.delay = exponential_profile(K, default_decay_factor(K));
        s.doppler = DopplerSpectrum::jakes(f_D);
        specs.push_back(std::move(s));
    }
    return specs;
}

cplx ChannelRealization::path_gain(const RealizedPath& path, std::int64_t q) const {
    cplx h{0.0, 0.0};
    for (const RealizedLine& l : path.lines) {
        double ang = 2.0 * std::numbers::pi * l.nu * Ts * double(q);
        h += l.amp * cplx(std::cos(ang), std::sin(ang));
    }
    return h;
}

ChannelRealization sample_realization(const ScatteringSpec& spec, double Ts,
                                      std::uint64_t seed, int n_doppler_lines) {
    if (spec.doppler.kind == DopplerSpectrum::Kind::jakes && n_doppler_lines < 1)
        throw std::invalid_argument("sample_realization: need at least one Doppler line");
    std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), 0x9e3779b9u};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uangle(0.0, std::numbers::pi);

    ChannelRealization out;
    out.Ts = Ts;
    out.paths.reserve(spec.delay.paths.size());
    for (const DelayPath& p : spec.delay.paths) {
        RealizedPath rp;
        rp.delay = p.delay + spec.time_offset_samples;
        switch (spec.doppler.kind) {
            case DopplerSpectrum::Kind::none: {
                double s = std::sqrt(0.5 * p.power);
                rp.lines.push_back({spec.freq_offset, cplx(s * gauss(rng), s * gauss(rng))});
                break;
            }
            case DopplerSpectrum::Kind::jakes: {
                // Sum-of-lines Jakes: nu = f_D cos(theta), theta uniform on [0, pi).
                double s = std::sqrt(0.5 * p.power / double(n_doppler_lines));
                for (int l = 0; l < n_doppler_lines; ++l) {
                    double nu = spec.doppler.f_D * std::cos(uangle(rng));
                    rp.lines.push_back(
                        {nu + spec.freq_offset, cplx(s * gauss(rng), s * gauss(rng))});
                }
                break;
            }
            case DopplerSpectrum::Kind::lines: {
                for (const DopplerLine& l : spec.doppler.lines) {
                    double s = std::sqrt(0.5 * p.power * l.weight);
                    rp.lines.push_back(
                        {l.nu + spec.freq_offset, cplx(s * gauss(rng), s * gauss(rng))});
                }
                break;
            }
        }
        out.paths.push_back(std::move(rp));
    }
    return out;
}

}  // namespace pops
