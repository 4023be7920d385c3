#ifndef POPSLAB_IO_HPP
#define POPSLAB_IO_HPP

#include <string>

#include "popslab/metrics.hpp"

namespace pops {

// Shortest decimal that round-trips to the same double; "inf"/"-inf" sentinels.
std::string format_double(double v);
double parse_double(const std::string& s);

// CSV schema: header "axis,<series1>,<series2>,...", one row per axis value.
void write_csv(const SweepResult& r, const std::string& path);

// Versioned text codebook format ("POPSCB v1").
void save_codebook(const Codebook& cb, const std::string& path);
Codebook load_codebook(const std::string& path);

// Scattering statistics a codebook entry was designed for.
ScatteringSpec codebook_entry_spec(const CodebookEntry& e);

}  // namespace pops

#endif
