#pragma once
#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "cutrom/geometry.hpp"
#include "cutrom/linalg.hpp"

namespace cutrom {

using ScalarField2 =
    std::function<double(const Eigen::Vector2d&, const Eigen::VectorXd&)>;
// cell-aware variant for data that are only piecewise defined (supremizer
// source, nodal-interpolant Dirichlet traces)
using CellField = std::function<double(int cell, const Eigen::Vector2d&)>;

// Scalar elliptic model on an embedded domain: bulk diffusion, Nitsche weak
// Dirichlet terms on the embedded boundary, optional Neumann flux penalty,
// ghost penalty across faces near the cut. Also reused for the harmonic
// extension and (componentwise) the supremizer solves.
struct DarcyProblem {
  LevelSetDomain domain;
  ScalarField2 g;    // bulk source
  ScalarField2 g_D;  // Dirichlet datum on the embedded boundary
  ScalarField2 g_N;  // Neumann datum
  CellField g_cell;    // overrides g when set
  CellField g_D_cell;  // overrides g_D when set

  double gamma_D = 10.0;  // Dirichlet penalty, scaled by 1/h_K of the cut cell
  double gamma_N = 0.0;   // Neumann flux penalty, scaled by h_K
  double gamma_1 = 0.1;   // ghost penalty, scaled by h_F

  // pin background-box boundary vertices to this value (symmetric
  // elimination); used by the harmonic extension and the supremizer
  std::optional<double> strong_outer_bc;
  // restrict pinning to selected box edges (empty = all edges)
  std::vector<BackgroundMesh::BoundaryLabel> strong_outer_edges;

  int bulk_order = 2, interface_order = 2;
};

struct AssembledSystem {
  SpMat A;
  Eigen::VectorXd b;
};

// cell-parallel assembly with a fixed merge order (bit-identical to the
// serial reference for any worker count)
AssembledSystem assemble(const DarcyProblem& problem, const ActiveMesh& active);
AssembledSystem assemble_serial(const DarcyProblem& problem, const ActiveMesh& active);

// assemble + sparse solve; values per active DOF
Eigen::VectorXd solve(const DarcyProblem& problem, const ActiveMesh& active);

// Laplace problem on the complement B \ D(mu): Dirichlet datum on the
// embedded boundary = P1 interpolant of the given active-DOF field, zero
// strong condition on the box boundary. Returns a background-length field
// (complement values; zero where the complement mesh is inactive).
Eigen::VectorXd solve_harmonic_extension(const Eigen::VectorXd& trace_active,
                                         const ActiveMesh& primal,
                                         const LevelSetDomain& domain);

}  // namespace cutrom
