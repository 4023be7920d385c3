#include "popslab/eig.hpp"

#include <complex>
#include <stdexcept>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace pops {

EigResult hermitian_eig(const Eigen::MatrixXcd& a) {
    const lapack_int n = lapack_int(a.rows());
    EigResult r;
    r.vectors = a;
    r.values.resize(n);
    lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                     r.vectors.data(), n, r.values.data());
    if (info != 0) throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
    return r;
}

void hermitian_top_eig(const Eigen::MatrixXcd& a, double& value, Eigen::VectorXcd& vector) {
    const lapack_int n = lapack_int(a.rows());
    Eigen::MatrixXcd work = a;
    Eigen::VectorXd w(n);
    vector.resize(n);
    std::vector<lapack_int> isuppz(2);
    lapack_int found = 0;
    lapack_int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, work.data(), n,
                                     0.0, 0.0, n, n, 0.0, &found, w.data(),
                                     vector.data(), n, isuppz.data());
    if (info != 0 || found != 1)
        throw std::runtime_error("zheevr failed, info=" + std::to_string(info));
    value = w(0);
}

double eig_residual(const Eigen::MatrixXcd& a, const EigResult& e) {
    Eigen::MatrixXcd res = a * e.vectors - e.vectors * e.values.asDiagonal();
    double denom = a.norm();
    return denom > 0.0 ? res.norm() / denom : res.norm();
}

}  // namespace pops
