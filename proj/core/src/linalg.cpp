#include "gplab/linalg.hpp"

#include <cmath>

namespace gplab {

NormEstimate operator_norm(const SparseMatrix& a, double tolerance, int max_iterations) {
    NormEstimate out;
    if (a.cols() == 0 || a.rows() == 0 || a.nonZeros() == 0) {
        out.converged = true;
        return out;
    }
    // Start vector with distinct, irrational-ish entries so that it is not
    // orthogonal to any top singular vector of structured test matrices.
    CVector x(a.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x[i] = Complex(1.0 + std::sin(0.7 * static_cast<double>(i) + 0.3), 0.25 * std::cos(1.3 * static_cast<double>(i)));
    x.normalize();
    double sigma2 = 0.0;
    const SparseMatrix adj = a.adjoint();
    for (int it = 1; it <= max_iterations; ++it) {
        CVector y = adj * (a * x);
        double next = y.norm();
        out.iterations = it;
        if (next == 0.0) {
            sigma2 = 0.0;
            out.converged = true;
            break;
        }
        x = y / next;
        if (std::abs(next - sigma2) <= tolerance * std::max(next, 1e-300)) {
            sigma2 = next;
            out.converged = true;
            break;
        }
        sigma2 = next;
    }
    out.value = std::sqrt(sigma2);
    return out;
}

double operator_norm_dense(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(a);
    return svd.singularValues()(0);
}

double min_eigenvalue(const CMatrix& hermitian) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

double frobenius_norm(const SparseMatrix& a) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < a.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a, k); it; ++it) s += std::norm(it.value());
    return std::sqrt(s);
}

}  // namespace gplab
