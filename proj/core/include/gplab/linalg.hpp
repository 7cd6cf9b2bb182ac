#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace gplab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, std::int64_t>;

struct NormEstimate {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Largest singular value by power iteration on A*A, started from a fixed
/// deterministic vector.
NormEstimate operator_norm(const SparseMatrix& a, double tolerance = 1e-12, int max_iterations = 5000);
/// Dense SVD reference for operator_norm.
double operator_norm_dense(const CMatrix& a);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMatrix& hermitian);

double frobenius_norm(const SparseMatrix& a);

}  // namespace gplab
