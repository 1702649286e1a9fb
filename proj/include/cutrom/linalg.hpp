#pragma once
#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

namespace cutrom {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// direct sparse LU; residual contract ||Ax-b|| <= 1e-10 ||b|| (one step of
// iterative refinement if the first factor solve misses it)
Eigen::VectorXd sparse_solve(const SpMat& A, const Eigen::VectorXd& b);

// symmetric eigendecomposition, eigenvalues descending, eigenvectors
// orthonormal columns; input symmetry checked to 1e-10 relative
void sym_eig(const Eigen::MatrixXd& A, Eigen::VectorXd& eigenvalues,
             Eigen::MatrixXd& eigenvectors);

// dense LU with partial pivoting
Eigen::VectorXd dense_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace cutrom
