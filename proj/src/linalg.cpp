#include "cutrom/linalg.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cutrom/errors.hpp"

namespace cutrom {

Eigen::VectorXd sparse_solve(const SpMat& A, const Eigen::VectorXd& b) {
  if (A.rows() != A.cols()) throw std::invalid_argument("sparse_solve: matrix not square");
  if (A.rows() != b.size()) throw std::invalid_argument("sparse_solve: size mismatch");

  Eigen::SparseLU<SpMat> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success)
    throw SingularMatrixError("sparse_solve: factorization failed (singular pivot)");

  Eigen::VectorXd x = lu.solve(b);
  const double bnorm = b.norm();
  if (bnorm == 0) return Eigen::VectorXd::Zero(b.size());
  double res = (A * x - b).norm() / bnorm;
  if (res > 1e-10) {
    x += lu.solve(b - A * x);  // one refinement pass
    res = (A * x - b).norm() / bnorm;
  }
  if (!std::isfinite(res) || res > 1e-8) {
    // locate the weakest row as a diagnostic
    int worst = -1;
    double worst_diag = std::numeric_limits<double>::infinity();
    for (int k = 0; k < A.outerSize(); ++k) {
      double diag = 0;
      for (SpMat::InnerIterator it(A, k); it; ++it)
        if (it.row() == it.col()) diag = std::abs(it.value());
      if (diag < worst_diag) { worst_diag = diag; worst = k; }
    }
    throw SingularMatrixError("sparse_solve: residual " + std::to_string(res) +
                                  " exceeds contract",
                              worst);
  }
  return x;
}

void sym_eig(const Eigen::MatrixXd& A, Eigen::VectorXd& eigenvalues,
             Eigen::MatrixXd& eigenvectors) {
  if (A.rows() != A.cols()) throw std::invalid_argument("sym_eig: matrix not square");
  const double scale = A.norm();
  if (scale > 0 && (A - A.transpose()).norm() > 1e-10 * scale)
    throw std::invalid_argument("sym_eig: matrix not symmetric");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("sym_eig: eigensolver failed to converge");

  // Eigen returns ascending; flip to descending
  const int n = (int)A.rows();
  eigenvalues.resize(n);
  eigenvectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    eigenvalues[i] = es.eigenvalues()[n - 1 - i];
    eigenvectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
}

Eigen::VectorXd dense_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  if (A.rows() != A.cols()) throw std::invalid_argument("dense_solve: matrix not square");
  if (A.rows() != b.size()) throw std::invalid_argument("dense_solve: size mismatch");

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const Eigen::VectorXd x = lu.solve(b);
  const double bnorm = b.norm();
  const double res = (A * x - b).norm();

  // A collapsed pivot ratio means the matrix is numerically rank deficient;
  // such systems can still be consistent, so the residual alone would accept
  // a solution polluted by near-nullspace noise.
  int worst = 0;
  const auto& U = lu.matrixLU();
  double dmin = std::numeric_limits<double>::infinity(), dmax = 0;
  for (int k = 0; k < A.rows(); ++k) {
    const double d = std::abs(U(k, k));
    if (d < dmin) { dmin = d; worst = k; }
    if (d > dmax) dmax = d;
  }
  if (!std::isfinite(res) || (bnorm > 0 && res > 1e-10 * bnorm) ||
      (bnorm == 0 && res > 0) || !(dmin > 1e-12 * dmax))
    throw SingularMatrixError("dense_solve: system singular or ill-conditioned", worst);
  return x;
}

}  // namespace cutrom
