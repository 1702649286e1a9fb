#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cutrom/linalg.hpp"
#include "cutrom/mesh.hpp"
#include "cutrom/snapshot.hpp"

namespace cutrom {

// orthonormal modes on the background mesh with the eigenvalue record
struct ReducedBasis {
  FieldKind kind = FieldKind::scalar;
  int components = 1;
  std::vector<Eigen::VectorXd> modes;  // unit L2 norm each
  Eigen::VectorXd eigenvalues;         // full descending list (length M)
  ExtensionMode extension_mode = ExtensionMode::natural;
  bool transported = false;
  Eigen::VectorXd transport_reference;

  int size() const { return (int)modes.size(); }
};

// P1 mass matrix over the full background mesh (the correlation inner product)
SpMat background_mass_matrix(const BackgroundMesh& mesh);

// C_ij = <s_i, s_j>_{L2(B)}, componentwise-summed for vector fields;
// row-parallel kernel with a serial reference
Eigen::MatrixXd correlation(const SnapshotSet& set, const SpMat& mass);
Eigen::MatrixXd correlation_serial(const SnapshotSet& set, const SpMat& mass);

// eigendecompose the correlation matrix, build the first N modes, normalize
// to unit L2 norm; modes with eigenvalue below 1e-14 * lambda_1 are dropped
ReducedBasis compress(const SnapshotSet& set, int N, const SpMat& mass);

// L2 inner product of background fields (componentwise sum)
double l2_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                const SpMat& mass, int components);

// projection of a field onto the first N modes
Eigen::VectorXd project(const ReducedBasis& basis, const Eigen::VectorXd& field,
                        const SpMat& mass, int N);

// combined velocity space for the saddle problem: N velocity modes, N
// supremizer modes, N pressure modes, in that order
struct StokesReducedSpace {
  std::vector<Eigen::VectorXd> velocity_modes;  // 2N entries: u modes then s modes
  std::vector<Eigen::VectorXd> pressure_modes;  // N entries
  int N = 0;
  bool transported = false;
  Eigen::VectorXd transport_reference;
  // optional lifting (snapshots were fluctuations around this field): the
  // online stage subtracts its residual and adds it back on reconstruction
  Eigen::VectorXd lift_velocity;  // 2-component background; empty = off
  Eigen::VectorXd lift_pressure;
};
StokesReducedSpace build_stokes_spaces(const ReducedBasis& vel,
                                       const ReducedBasis& sup,
                                       const ReducedBasis& pr, int N);

// persistence on top of the snapshot directory format (kind=basis, with the
// underlying field kind and eigenvalues in the manifest)
void save_basis(const ReducedBasis& basis, const std::string& dir);
ReducedBasis load_basis(const std::string& dir);

}  // namespace cutrom
