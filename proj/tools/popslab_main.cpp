#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include "CLI11.hpp"
#include "popslab/run.hpp"

extern "C" void openblas_set_num_threads(int);

namespace {

int resolve_threads(std::optional<int> cli_threads) {
    if (cli_threads) return *cli_threads;
    if (const char* env = std::getenv("POPSLAB_THREADS")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            throw std::runtime_error(std::string("bad POPSLAB_THREADS value '") + env + "'");
        }
    }
    return 0;  // leave the OpenMP default alone
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Offline SINR-optimal FBMC waveform design on hexagonal and "
                 "rectangular time-frequency lattices"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;

    const char* names[] = {"optimize", "sweep_ft", "sweep_spread", "sweep_q",
                           "psd",      "sensitivity", "codebook",  "validate"};
    for (const char* name : names) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment descriptor file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory (default: cwd)");
        sub->add_option("--seed", seed, "override the descriptor seed");
        sub->add_option("--threads", threads, "worker thread count")
            ->check(CLI::PositiveNumber);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        int n_threads = resolve_threads(threads);
        if (n_threads > 0) omp_set_num_threads(n_threads);
        // The eigensolvers run inside already-parallel regions; keep BLAS serial.
        openblas_set_num_threads(1);

        pops::ExperimentDescriptor d = pops::parse_descriptor_file(config_path);
        std::string sub = app.get_subcommands().front()->get_name();
        std::string descriptor_cmd;
        switch (d.command) {
            case pops::Command::optimize: descriptor_cmd = "optimize"; break;
            case pops::Command::sweep_ft: descriptor_cmd = "sweep_ft"; break;
            case pops::Command::sweep_spread: descriptor_cmd = "sweep_spread"; break;
            case pops::Command::sweep_q: descriptor_cmd = "sweep_q"; break;
            case pops::Command::psd: descriptor_cmd = "psd"; break;
            case pops::Command::sensitivity: descriptor_cmd = "sensitivity"; break;
            case pops::Command::codebook: descriptor_cmd = "codebook"; break;
            case pops::Command::validate: descriptor_cmd = "validate"; break;
        }
        if (sub != descriptor_cmd)
            throw std::runtime_error("descriptor command '" + descriptor_cmd +
                                     "' does not match subcommand '" + sub + "'");
        if (seed) d.seed = *seed;
        return pops::run_experiment(d, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
