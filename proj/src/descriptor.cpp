#include "popslab/descriptor.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "popslab/io.hpp"

namespace pops {
namespace {

struct RawEntry {
    std::string value;
    int line;
};

[[noreturn]] void semantic_error(const std::string& key, const std::string& what) {
    throw std::runtime_error("descriptor key '" + key + "': " + what);
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

class KeyMap {
  public:
    explicit KeyMap(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("descriptor parse error at line " +
                                         std::to_string(lineno) + ": expected key = value");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty())
                throw std::runtime_error("descriptor parse error at line " +
                                         std::to_string(lineno) + ": empty key or value");
            auto [it, inserted] = entries_.emplace(key, RawEntry{value, lineno});
            if (!inserted)
                throw std::runtime_error("duplicate key '" + key + "' at lines " +
                                         std::to_string(it->second.line) + " and " +
                                         std::to_string(lineno));
        }
    }

    std::optional<std::string> take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        std::string v = it->second.value;
        entries_.erase(it);
        return v;
    }

    void reject_leftovers() const {
        if (entries_.empty()) return;
        std::string msg = "unknown descriptor key(s):";
        for (const auto& [k, e] : entries_)
            msg += " '" + k + "' (line " + std::to_string(e.line) + ")";
        throw std::runtime_error(msg);
    }

  private:
    std::map<std::string, RawEntry> entries_;
};

int to_int(const std::string& key, const std::string& s) {
    int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        semantic_error(key, "bad integer '" + s + "'");
    return v;
}

double to_real(const std::string& key, const std::string& s) {
    try {
        return parse_double(s);
    } catch (const std::exception&) {
        semantic_error(key, "bad number '" + s + "'");
    }
}

}  // namespace

ScatteringSpec ExperimentDescriptor::channel_spec() const {
    ScatteringSpec spec;
    if (BdTm) {
        int k = K_grid.empty() ? balanced_path_count(*BdTm, lattice()) : K_grid.front();
        return balanced_spec(*BdTm, lattice(), {k}).front();
    }
    spec.delay = (*K == 1) ? exponential_profile(1, 0.5) : exponential_profile(*K, *b);
    spec.doppler = *fD_Ts > 0.0 ? DopplerSpectrum::jakes(*fD_Ts / Ts) : DopplerSpectrum::none();
    return spec;
}

LatticeConfig ExperimentDescriptor::lattice() const { return LatticeConfig(kind, Q, N, Ts); }

ExperimentDescriptor parse_descriptor(const std::string& text) {
    KeyMap keys(text);
    ExperimentDescriptor d;

    {
        auto cmd = keys.take("command");
        if (!cmd) semantic_error("command", "missing");
        static const std::map<std::string, Command> commands = {
            {"optimize", Command::optimize},   {"sweep_ft", Command::sweep_ft},
            {"sweep_spread", Command::sweep_spread}, {"sweep_q", Command::sweep_q},
            {"psd", Command::psd},             {"sensitivity", Command::sensitivity},
            {"codebook", Command::codebook},   {"validate", Command::validate}};
        auto it = commands.find(*cmd);
        if (it == commands.end()) semantic_error("command", "unknown command '" + *cmd + "'");
        d.command = it->second;
    }

    if (auto v = keys.take("lattice.kind")) {
        if (*v == "hexagonal")
            d.kind = LatticeKind::hexagonal;
        else if (*v == "rectangular")
            d.kind = LatticeKind::rectangular;
        else
            semantic_error("lattice.kind", "must be hexagonal or rectangular");
    }
    auto q = keys.take("lattice.Q");
    if (!q) semantic_error("lattice.Q", "missing");
    d.Q = to_int("lattice.Q", *q);
    auto n = keys.take("lattice.N");
    auto cp = keys.take("lattice.CP");
    if (!!n == !!cp) semantic_error("lattice.N", "give exactly one of lattice.N / lattice.CP");
    d.N = n ? to_int("lattice.N", *n) : d.Q + to_int("lattice.CP", *cp);
    if (auto v = keys.take("lattice.Ts")) d.Ts = to_real("lattice.Ts", *v);
    // Validates Q/N/kind invariants (even N on hexagonal, density below one).
    (void)d.lattice();

    if (auto v = keys.take("channel.BdTm")) d.BdTm = to_real("channel.BdTm", *v);
    if (auto v = keys.take("channel.fD_Ts")) d.fD_Ts = to_real("channel.fD_Ts", *v);
    if (auto v = keys.take("channel.K")) d.K = to_int("channel.K", *v);
    if (auto v = keys.take("channel.b")) d.b = to_real("channel.b", *v);
    if (auto v = keys.take("channel.K_grid"))
        for (const std::string& s : split_commas(*v)) d.K_grid.push_back(to_int("channel.K_grid", s));
    const bool explicit_channel = d.fD_Ts || d.K || d.b;
    if (d.BdTm && explicit_channel)
        semantic_error("channel.BdTm", "give either BdTm or the explicit (fD_Ts, K, b) triple");
    if (!d.BdTm) {
        if (!d.fD_Ts || !d.K) semantic_error("channel.fD_Ts", "explicit channel needs fD_Ts and K");
        if (*d.K > 1 && !d.b) semantic_error("channel.b", "needed when channel.K > 1");
    }

    if (auto v = keys.take("pops.snr_dB")) {
        double snr_db = to_real("pops.snr_dB", *v);
        d.snr = std::isinf(snr_db) ? kSnrInfinite : std::pow(10.0, snr_db / 10.0);
    }
    if (auto v = keys.take("pops.epsilon")) d.epsilon = to_real("pops.epsilon", *v);
    if (auto v = keys.take("pops.max_iters")) d.max_iters = to_int("pops.max_iters", *v);
    if (auto v = keys.take("pops.window_search"))
        d.window_search = to_int("pops.window_search", *v);
    auto dd = keys.take("pops.D_over_T");
    if (!dd) semantic_error("pops.D_over_T", "missing");
    d.D_over_T = to_int("pops.D_over_T", *dd);
    if (d.D_over_T < 1) semantic_error("pops.D_over_T", "must be a positive integer");

    if (auto v = keys.take("sweep.FT_list"))
        for (const std::string& s : split_commas(*v)) d.ft_list.push_back(to_real("sweep.FT_list", s));
    if (auto v = keys.take("sweep.D_list"))
        for (const std::string& s : split_commas(*v)) d.d_list.push_back(to_int("sweep.D_list", s));
    if (auto v = keys.take("sweep.BdTm_list"))
        for (const std::string& s : split_commas(*v))
            d.bdtm_list.push_back(to_real("sweep.BdTm_list", s));
    if (auto v = keys.take("sweep.Q_list"))
        for (const std::string& s : split_commas(*v)) d.q_list.push_back(to_int("sweep.Q_list", s));
    if (auto v = keys.take("sweep.axis")) {
        if (*v == "freq")
            d.sync_axis = SyncAxis::freq;
        else if (*v == "time")
            d.sync_axis = SyncAxis::time;
        else
            semantic_error("sweep.axis", "must be freq or time");
    }
    if (auto v = keys.take("sweep.min")) d.sweep_min = to_real("sweep.min", *v);
    if (auto v = keys.take("sweep.max")) d.sweep_max = to_real("sweep.max", *v);
    if (auto v = keys.take("sweep.steps")) d.sweep_steps = to_int("sweep.steps", *v);

    if (auto v = keys.take("psd.oversample")) d.psd_oversample = to_int("psd.oversample", *v);
    if (auto v = keys.take("psd.n_subcarriers"))
        d.psd_n_subcarriers = to_int("psd.n_subcarriers", *v);
    if (auto v = keys.take("mc.trials")) d.mc_trials = to_int("mc.trials", *v);
    if (auto v = keys.take("seed")) d.seed = std::uint64_t(to_int("seed", *v));

    // Per-command requirements.
    switch (d.command) {
        case Command::sweep_ft:
            if (d.ft_list.empty()) semantic_error("sweep.FT_list", "required for sweep_ft");
            if (d.d_list.empty()) d.d_list = {d.D_over_T};
            break;
        case Command::sweep_spread:
            if (d.bdtm_list.empty()) semantic_error("sweep.BdTm_list", "required for sweep_spread");
            break;
        case Command::sweep_q:
            if (d.q_list.empty()) semantic_error("sweep.Q_list", "required for sweep_q");
            if (d.d_list.empty()) d.d_list = {d.D_over_T};
            break;
        case Command::sensitivity:
            if (!d.sync_axis) semantic_error("sweep.axis", "required for sensitivity");
            if (d.sweep_steps < 2) semantic_error("sweep.steps", "need at least 2");
            break;
        case Command::codebook:
            if (d.bdtm_list.empty()) semantic_error("sweep.BdTm_list", "required for codebook");
            break;
        default:
            break;
    }
    if ((d.command == Command::sweep_ft || d.command == Command::sweep_spread ||
         d.command == Command::sweep_q || d.command == Command::codebook) &&
        !d.BdTm)
        semantic_error("channel.BdTm", "sweeps and codebooks need the BdTm parameterization");

    keys.reject_leftovers();
    return d;
}

ExperimentDescriptor parse_descriptor_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open descriptor '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_descriptor(ss.str());
}

}  // namespace pops
