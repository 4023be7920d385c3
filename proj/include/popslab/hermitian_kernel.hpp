#ifndef POPSLAB_HERMITIAN_KERNEL_HPP
#define POPSLAB_HERMITIAN_KERNEL_HPP

#include <Eigen/Dense>
#include <cstdint>

namespace pops {

// Square Hermitian matrix backing a quadratic form over a waveform whose
// samples start at global grid index window_start.
struct HermitianKernel {
    Eigen::MatrixXcd entries;
    std::int64_t window_start = 0;

    int size() const { return int(entries.rows()); }

    void symmetrize() {
        entries = 0.5 * (entries + entries.adjoint()).eval();
    }
};

}  // namespace pops

#endif
