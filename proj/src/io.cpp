#include "popslab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pops {
namespace {

void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

std::string format_waveform_line(const cplx& v) {
    return format_double(v.real()) + "," + format_double(v.imag());
}

}  // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw std::runtime_error("format_double failed");
    return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("bad float literal: '" + s + "'");
    return v;
}

void write_csv(const SweepResult& r, const std::string& path) {
    std::ofstream f(path);
    if (!f) fail(path, "cannot open for writing");
    f << r.axis_name;
    for (const auto& [name, values] : r.series) {
        if (values.size() != r.axis_values.size()) fail(path, "ragged series '" + name + "'");
        f << "," << name;
    }
    f << "\n";
    for (std::size_t i = 0; i < r.axis_values.size(); ++i) {
        f << format_double(r.axis_values[i]);
        for (const auto& [name, values] : r.series) f << "," << format_double(values[i]);
        f << "\n";
    }
    if (!f) fail(path, "write error");
}

void save_codebook(const Codebook& cb, const std::string& path) {
    std::ofstream f(path);
    if (!f) fail(path, "cannot open for writing");
    f << "POPSCB v1\n";
    f << "entries " << cb.entries.size() << "\n";
    for (const CodebookEntry& e : cb.entries) {
        f << "design " << format_double(e.design_BdTm) << " " << e.K << " "
          << format_double(e.snr) << " " << format_double(e.sir_dB) << "\n";
        f << "lattice "
          << (e.lattice.kind == LatticeKind::hexagonal ? "hexagonal" : "rectangular") << " "
          << e.lattice.Q << " " << e.lattice.N << " " << format_double(e.lattice.Ts) << "\n";
        f << "offsets " << e.phi.start_index << " " << e.psi.start_index << "\n";
        f << "phi " << e.phi.length() << "\n";
        for (const cplx& v : e.phi.samples) f << format_waveform_line(v) << "\n";
        f << "psi " << e.psi.length() << "\n";
        for (const cplx& v : e.psi.samples) f << format_waveform_line(v) << "\n";
    }
    if (!f) fail(path, "write error");
}

Codebook load_codebook(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(path, "cannot open");
    std::string line;
    auto next_line = [&](const char* what) {
        if (!std::getline(f, line)) fail(path, std::string("unexpected end of file, wanted ") + what);
        return line;
    };
    if (next_line("header") != "POPSCB v1") fail(path, "bad header");
    std::istringstream hs(next_line("entry count"));
    std::string tag;
    std::size_t count = 0;
    hs >> tag >> count;
    if (tag != "entries") fail(path, "bad entry count line");

    auto read_samples = [&](const char* name, SampledWaveform& w) {
        std::istringstream ls(next_line(name));
        std::string t;
        int n = 0;
        ls >> t >> n;
        if (t != name || n < 1) fail(path, std::string("bad ") + name + " length line");
        w.samples.resize(std::size_t(n));
        for (int i = 0; i < n; ++i) {
            std::string s = next_line("sample");
            auto comma = s.find(',');
            if (comma == std::string::npos) fail(path, "bad sample line '" + s + "'");
            w.samples[std::size_t(i)] =
                cplx(parse_double(s.substr(0, comma)), parse_double(s.substr(comma + 1)));
        }
    };

    Codebook cb;
    for (std::size_t i = 0; i < count; ++i) {
        CodebookEntry e;
        {
            std::istringstream ls(next_line("design"));
            std::string t, bdtm, snr, sir;
            ls >> t >> bdtm >> e.K >> snr >> sir;
            if (t != "design") fail(path, "bad design line");
            e.design_BdTm = parse_double(bdtm);
            e.snr = parse_double(snr);
            e.sir_dB = parse_double(sir);
        }
        {
            std::istringstream ls(next_line("lattice"));
            std::string t, kind, ts;
            int q = 0, n = 0;
            ls >> t >> kind >> q >> n >> ts;
            if (t != "lattice" || (kind != "hexagonal" && kind != "rectangular"))
                fail(path, "bad lattice line");
            e.lattice = LatticeConfig(
                kind == "hexagonal" ? LatticeKind::hexagonal : LatticeKind::rectangular, q, n,
                parse_double(ts));
        }
        {
            std::istringstream ls(next_line("offsets"));
            std::string t;
            ls >> t >> e.phi.start_index >> e.psi.start_index;
            if (t != "offsets") fail(path, "bad offsets line");
        }
        e.phi.Ts = e.lattice.Ts;
        e.psi.Ts = e.lattice.Ts;
        read_samples("phi", e.phi);
        read_samples("psi", e.psi);
        if (i > 0 && !(e.design_BdTm > cb.entries.back().design_BdTm))
            fail(path, "design points not strictly increasing");
        cb.entries.push_back(std::move(e));
    }
    return cb;
}

ScatteringSpec codebook_entry_spec(const CodebookEntry& e) {
    return balanced_spec(e.design_BdTm, e.lattice, {e.K}).front();
}

}  // namespace pops
