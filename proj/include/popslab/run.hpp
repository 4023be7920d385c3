#ifndef POPSLAB_RUN_HPP
#define POPSLAB_RUN_HPP

#include <string>

#include "popslab/descriptor.hpp"

namespace pops {

// Executes one experiment descriptor, writing CSV (and codebook) files under
// out_dir. Returns a process exit status; `validate` returns nonzero when the
// Monte-Carlo / analytic comparison breaches its tolerance.
int run_experiment(const ExperimentDescriptor& d, const std::string& out_dir);

}  // namespace pops

#endif
