#include "popslab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace pops {
namespace {

std::string kind_name(LatticeKind k) {
    return k == LatticeKind::hexagonal ? "hexagonal" : "rectangular";
}

int lattice_n_for(int Q, double FT, LatticeKind kind) {
    double nd = Q * FT;
    int n = int(std::lround(nd));
    if (std::abs(nd - n) > 1e-9)
        throw std::invalid_argument("FT value does not give an integer N for this Q");
    if (kind == LatticeKind::hexagonal && n % 2 != 0)
        throw std::invalid_argument("FT value gives odd N, not usable on a hexagonal lattice");
    return n;
}

ScatteringSpec eval_spec(double BdTm, const LatticeConfig& cfg) {
    return balanced_spec(BdTm, cfg, {balanced_path_count(BdTm, cfg)}).front();
}

}  // namespace

DesignOutcome design_waveforms(double BdTm, const LatticeConfig& cfg, const PopsConfig& pops,
                               int D_over_T) {
    if (D_over_T < 1) throw std::invalid_argument("design_waveforms: D_over_T must be positive");
    std::vector<int> grid = pops.K_grid;
    if (grid.empty()) grid = {balanced_path_count(BdTm, cfg)};
    const int len = D_over_T * cfg.N;

    DesignOutcome best;
    bool have = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ScatteringSpec spec = balanced_spec(BdTm, cfg, {grid[i]}).front();
        PopsResult r = window_offset_search(spec, cfg, pops, len, len);
        if (!have || r.final_sinr_dB() > best.result.final_sinr_dB()) {
            best = {std::move(r), std::move(spec), grid[i]};
            have = true;
        }
    }
    return best;
}

OfdmPair conventional_ofdm_pair(int Q, int cp, double Ts) {
    if (Q < 1 || cp < 1) throw std::invalid_argument("conventional_ofdm_pair: bad Q or cp");
    OfdmPair out;
    out.cfg = LatticeConfig(LatticeKind::rectangular, Q, Q + cp, Ts);
    out.phi.Ts = Ts;
    out.phi.start_index = 0;
    out.phi.samples.assign(std::size_t(Q + cp), cplx(1.0 / std::sqrt(double(Q + cp)), 0.0));
    out.psi.Ts = Ts;
    out.psi.start_index = cp;
    out.psi.samples.assign(std::size_t(Q), cplx(1.0 / std::sqrt(double(Q)), 0.0));
    return out;
}

SweepResult sweep_ft(int Q, double BdTm, const std::vector<int>& D_over_T_list,
                     const std::vector<double>& FT_list,
                     const std::vector<LatticeKind>& kinds, const PopsConfig& pops) {
    SweepResult out;
    out.axis_name = "FT";
    out.axis_values = FT_list;
    std::ostringstream meta;
    meta << "sweep_ft Q=" << Q << " BdTm=" << BdTm;
    out.metadata = meta.str();
    for (LatticeKind kind : kinds) {
        for (int D : D_over_T_list) {
            std::vector<double> series;
            series.reserve(FT_list.size());
            for (double ft : FT_list) {
                LatticeConfig cfg(kind, Q, lattice_n_for(Q, ft, kind));
                series.push_back(design_waveforms(BdTm, cfg, pops, D).result.final_sinr_dB());
            }
            out.series.emplace_back(kind_name(kind) + "_D" + std::to_string(D) + "T",
                                    std::move(series));
        }
    }
    return out;
}

SweepResult sweep_spread(const LatticeConfig& cfg, int D_over_T,
                         const std::vector<double>& BdTm_list, const PopsConfig& pops) {
    SweepResult out;
    out.axis_name = "BdTm";
    out.axis_values = BdTm_list;
    std::ostringstream meta;
    meta << "sweep_spread Q=" << cfg.Q << " N=" << cfg.N << " D=" << D_over_T << "T";
    out.metadata = meta.str();

    LatticeConfig rect(LatticeKind::rectangular, cfg.Q, cfg.N, cfg.Ts);
    OfdmPair ofdm = conventional_ofdm_pair(cfg.Q, cfg.N - cfg.Q, cfg.Ts);

    std::vector<double> hex_s, rect_s, ofdm_s;
    for (double bdtm : BdTm_list) {
        LatticeConfig hex(LatticeKind::hexagonal, cfg.Q, cfg.N, cfg.Ts);
        hex_s.push_back(design_waveforms(bdtm, hex, pops, D_over_T).result.final_sinr_dB());
        rect_s.push_back(design_waveforms(bdtm, rect, pops, D_over_T).result.final_sinr_dB());
        ofdm_s.push_back(
            sinr_of_pair(ofdm.phi, ofdm.psi, eval_spec(bdtm, rect), ofdm.cfg, pops.snr));
    }
    out.series.emplace_back("hexagonal", std::move(hex_s));
    out.series.emplace_back("rectangular", std::move(rect_s));
    out.series.emplace_back("ofdm", std::move(ofdm_s));
    return out;
}

SweepResult sweep_q(const std::vector<int>& Q_list, const std::vector<int>& D_over_T_list,
                    double FT, double BdTm, const PopsConfig& pops) {
    SweepResult out;
    out.axis_name = "Q";
    out.axis_values.assign(Q_list.begin(), Q_list.end());
    std::ostringstream meta;
    meta << "sweep_q FT=" << FT << " BdTm=" << BdTm;
    out.metadata = meta.str();
    for (int D : D_over_T_list) {
        std::vector<double> series;
        for (int q : Q_list) {
            LatticeConfig cfg(LatticeKind::hexagonal, q, lattice_n_for(q, FT, LatticeKind::hexagonal));
            series.push_back(design_waveforms(BdTm, cfg, pops, D).result.final_sinr_dB());
        }
        out.series.emplace_back("hexagonal_D" + std::to_string(D) + "T", std::move(series));
    }
    return out;
}

PsdResult psd(const SampledWaveform& w, int Q, int oversample) {
    if (oversample < 1) throw std::invalid_argument("psd: oversample must be positive");
    const int M = oversample * Q;
    if (w.length() > M)
        throw std::invalid_argument("psd: waveform longer than the DFT size; raise oversample");
    PsdResult out;
    out.psd_linear.assign(std::size_t(M), 0.0);
    const double two_pi_over_m = 2.0 * std::numbers::pi / M;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < M; ++i) {
        cplx acc{0.0, 0.0};
        for (int q = 0; q < w.length(); ++q) {
            double ang = -two_pi_over_m * double(i) * double(q);
            acc += w.samples[std::size_t(q)] * cplx(std::cos(ang), std::sin(ang));
        }
        out.psd_linear[std::size_t(i)] = std::norm(acc) / double(w.length());
    }
    // Center the axis: bin i -> frequency (i - M/2) * F / oversample.
    std::rotate(out.psd_linear.begin(), out.psd_linear.begin() + M / 2, out.psd_linear.end());
    out.freq_over_F.resize(std::size_t(M));
    for (int i = 0; i < M; ++i)
        out.freq_over_F[std::size_t(i)] = double(i - M / 2) / double(oversample);
    double peak = *std::max_element(out.psd_linear.begin(), out.psd_linear.end());
    out.psd_dB.resize(std::size_t(M));
    for (int i = 0; i < M; ++i)
        out.psd_dB[std::size_t(i)] = 10.0 * std::log10(out.psd_linear[std::size_t(i)] / peak);
    return out;
}

PsdResult aggregate_psd(const SampledWaveform& w, const LatticeConfig& cfg, int n_subcarriers,
                        int oversample) {
    PsdResult base = psd(w, cfg.Q, oversample);
    const int M = int(base.psd_linear.size());
    PsdResult out;
    out.freq_over_F = base.freq_over_F;
    out.psd_linear.assign(std::size_t(M), 0.0);
    const int half = n_subcarriers / 2;
    for (int m = -half; m <= half; ++m) {
        int shift = m * oversample;  // one subcarrier = F = oversample bins
        for (int i = 0; i < M; ++i) {
            int j = ((i - shift) % M + M) % M;  // discrete-time spectrum is periodic
            out.psd_linear[std::size_t(i)] += base.psd_linear[std::size_t(j)];
        }
    }
    double peak = *std::max_element(out.psd_linear.begin(), out.psd_linear.end());
    out.psd_dB.resize(std::size_t(M));
    for (int i = 0; i < M; ++i)
        out.psd_dB[std::size_t(i)] = 10.0 * std::log10(out.psd_linear[std::size_t(i)] / peak);
    return out;
}

double oob_leakage(const PsdResult& p, double offset_F, double band_edge_F) {
    double worst = -std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t i = 0; i < p.freq_over_F.size(); ++i) {
        if (std::abs(p.freq_over_F[i]) >= band_edge_F + offset_F) {
            worst = std::max(worst, p.psd_dB[i]);
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("oob_leakage: offset beyond the computed axis");
    return worst;
}

SweepResult sensitivity_sweep(const SampledWaveform& phi, const SampledWaveform& psi,
                              const ScatteringSpec& spec, const LatticeConfig& cfg, double snr,
                              SyncAxis axis, const std::vector<double>& values,
                              const std::string& series_name) {
    SweepResult out;
    out.axis_name = axis == SyncAxis::freq ? "dnu_over_F" : "dtau_over_Ts";
    out.axis_values = values;
    std::vector<double> series;
    series.reserve(values.size());
    for (double v : values) {
        ScatteringSpec perturbed =
            axis == SyncAxis::freq
                ? apply_sync_errors(spec, 0, v * cfg.F())
                : apply_sync_errors(spec, std::int64_t(std::llround(v)), 0.0);
        series.push_back(sinr_of_pair(phi, psi, perturbed, cfg, snr));
    }
    out.series.emplace_back(series_name, std::move(series));
    return out;
}

Codebook build_codebook(const std::vector<double>& design_BdTm, const LatticeConfig& cfg,
                        const PopsConfig& pops, int D_over_T) {
    std::vector<double> sorted = design_BdTm;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("build_codebook: duplicate design points");
    Codebook cb;
    // Design from the most dispersive point down, warm-starting each entry
    // from its neighbor: at small spread factors the quotient landscape is
    // nearly flat and a cold (Gaussian) start converges orders of magnitude
    // more slowly than continuation along the spread axis.
    PopsConfig chained = pops;
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
        DesignOutcome d = design_waveforms(*it, cfg, chained, D_over_T);
        chained.init = d.result.phi_opt;
        canonicalize_phase(d.result.phi_opt);
        canonicalize_phase(d.result.psi_opt);
        double sir = sinr_of_pair(d.result.phi_opt, d.result.psi_opt, d.spec, cfg, pops.snr);
        cb.entries.push_back({*it, d.result.phi_opt, d.result.psi_opt, cfg, d.K, pops.snr, sir});
    }
    std::reverse(cb.entries.begin(), cb.entries.end());
    return cb;
}

SweepResult mismatch_matrix(const Codebook& cb, const std::vector<double>& eval_BdTm,
                            double snr) {
    SweepResult out;
    out.axis_name = "BdTm";
    out.axis_values = eval_BdTm;
    std::vector<double> envelope(eval_BdTm.size(), -std::numeric_limits<double>::infinity());
    for (const CodebookEntry& e : cb.entries) {
        std::vector<double> series;
        for (std::size_t i = 0; i < eval_BdTm.size(); ++i) {
            double sir = sinr_of_pair(e.phi, e.psi, eval_spec(eval_BdTm[i], e.lattice),
                                      e.lattice, snr);
            series.push_back(sir);
            envelope[i] = std::max(envelope[i], sir);
        }
        std::ostringstream name;
        name << "design_" << e.design_BdTm;
        out.series.emplace_back(name.str(), std::move(series));
    }
    out.series.emplace_back("envelope", std::move(envelope));
    return out;
}

void canonicalize_phase(SampledWaveform& w) {
    std::size_t imax = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        double a = std::abs(w.samples[i]);
        if (a > best) {
            best = a;
            imax = i;
        }
    }
    if (best <= 0.0) return;
    cplx phase = w.samples[imax] / best;
    for (cplx& v : w.samples) v /= phase;
}

}  // namespace pops
