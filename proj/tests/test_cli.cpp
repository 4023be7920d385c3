// End-to-end checks of the command-line binary (path injected by the build).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "popslab/io.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path p;
    TempDir() {
        p = fs::temp_directory_path() /
            ("popslab_cli_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(p);
    }
    ~TempDir() { fs::remove_all(p); }
    std::string file(const std::string& name) const { return (p / name).string(); }
};

int run(const std::string& args) {
    std::string cmd = std::string(POPSLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* kOptimizeCfg =
    "command = optimize\n"
    "lattice.kind = hexagonal\n"
    "lattice.Q = 16\n"
    "lattice.N = 20\n"
    "channel.BdTm = 0.01\n"
    "pops.D_over_T = 3\n"
    "pops.snr_dB = 20\n"
    "pops.max_iters = 40\n";

}  // namespace

TEST_CASE("optimize writes a trace and a codebook, deterministically") {
    TempDir tmp;
    write_file(tmp.file("run.cfg"), kOptimizeCfg);
    REQUIRE(run("optimize --config " + tmp.file("run.cfg") + " --out " + tmp.file("a")) == 0);
    CHECK(fs::exists(tmp.file("a") + "/optimize_trace.csv"));
    CHECK(fs::exists(tmp.file("a") + "/codebook.popscb"));

    std::string header;
    {
        std::ifstream f(tmp.file("a") + "/optimize_trace.csv");
        std::getline(f, header);
    }
    CHECK(header == "half_step,sinr_dB");

    pops::Codebook cb = pops::load_codebook(tmp.file("a") + "/codebook.popscb");
    REQUIRE(cb.entries.size() == 1);
    CHECK(cb.entries[0].phi.norm() == doctest::Approx(1.0).epsilon(1e-12));

    // Rerunning reproduces both artifacts byte for byte.
    REQUIRE(run("optimize --config " + tmp.file("run.cfg") + " --out " + tmp.file("b")) == 0);
    CHECK(slurp(tmp.file("a") + "/optimize_trace.csv") ==
          slurp(tmp.file("b") + "/optimize_trace.csv"));
    CHECK(slurp(tmp.file("a") + "/codebook.popscb") == slurp(tmp.file("b") + "/codebook.popscb"));
}

TEST_CASE("validate compares analytic and simulated SINR within tolerance") {
    TempDir tmp;
    write_file(tmp.file("v.cfg"),
               "command = validate\n"
               "lattice.Q = 16\n"
               "lattice.N = 20\n"
               "channel.BdTm = 0.01\n"
               "pops.D_over_T = 3\n"
               "pops.snr_dB = 15\n"
               "pops.max_iters = 40\n"
               "mc.trials = 10000\n"
               "seed = 3\n");
    CHECK(run("validate --config " + tmp.file("v.cfg") + " --out " + tmp.file("v")) == 0);
    std::string csv = slurp(tmp.file("v") + "/validate.csv");
    CHECK(csv.substr(0, csv.find('\n')) ==
          "trial_count,analytic_sinr_dB,mc_sinr_dB,mc_ci95_dB,abs_diff_dB");
}

TEST_CASE("sensitivity sweep produces the axis grid") {
    TempDir tmp;
    write_file(tmp.file("s.cfg"),
               "command = sensitivity\n"
               "lattice.Q = 16\n"
               "lattice.N = 20\n"
               "channel.BdTm = 0.01\n"
               "pops.D_over_T = 3\n"
               "pops.max_iters = 25\n"
               "sweep.axis = freq\n"
               "sweep.min = -0.2\n"
               "sweep.max = 0.2\n"
               "sweep.steps = 5\n");
    REQUIRE(run("sensitivity --config " + tmp.file("s.cfg") + " --out " + tmp.file("s")) == 0);
    std::string csv = slurp(tmp.file("s") + "/sensitivity.csv");
    CHECK(csv.substr(0, csv.find('\n')) == "dnu_over_F,sir");
    int rows = 0;
    for (char c : csv)
        if (c == '\n') ++rows;
    CHECK(rows == 6);  // header + 5 grid points
}

TEST_CASE("bad invocations fail with a nonzero exit") {
    TempDir tmp;
    write_file(tmp.file("run.cfg"), kOptimizeCfg);
    // Subcommand must match the descriptor command.
    CHECK(run("psd --config " + tmp.file("run.cfg") + " --out " + tmp.file("x")) != 0);
    // Missing config file.
    CHECK(run("optimize --config " + tmp.file("absent.cfg")) != 0);
    // Malformed descriptor.
    write_file(tmp.file("bad.cfg"), "command = optimize\nlattice.Q 16\n");
    CHECK(run("optimize --config " + tmp.file("bad.cfg")) != 0);
    // No subcommand.
    CHECK(run("--config " + tmp.file("run.cfg")) != 0);
}

TEST_CASE("thread overrides are accepted") {
    TempDir tmp;
    write_file(tmp.file("run.cfg"), kOptimizeCfg);
    CHECK(run("optimize --config " + tmp.file("run.cfg") + " --out " + tmp.file("t") +
              " --threads 1") == 0);
    CHECK(run("optimize --config " + tmp.file("run.cfg") + " --out " + tmp.file("t2") +
              " --threads 0") != 0);  // must be positive
}
