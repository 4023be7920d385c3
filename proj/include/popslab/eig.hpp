#ifndef POPSLAB_EIG_HPP
#define POPSLAB_EIG_HPP

#include <Eigen/Dense>

namespace pops {

struct EigResult {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXcd vectors; // columns
};

// Full eigendecomposition of a Hermitian matrix (LAPACK zheevd).
EigResult hermitian_eig(const Eigen::MatrixXcd& a);

// Largest eigenpair of a Hermitian matrix (LAPACK zheevr).
void hermitian_top_eig(const Eigen::MatrixXcd& a, double& value, Eigen::VectorXcd& vector);

// Frobenius residual ||A*U - U*diag(w)|| / ||A||.
double eig_residual(const Eigen::MatrixXcd& a, const EigResult& e);

}  // namespace pops

#endif
