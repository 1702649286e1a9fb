#pragma once
#include <Eigen/Dense>
#include <vector>

#include "cutrom/darcy.hpp"
#include "cutrom/geometry.hpp"
#include "cutrom/pod.hpp"
#include "cutrom/stokes.hpp"

namespace cutrom {

struct RomSolution {
  Eigen::VectorXd alpha;
  // reconstructed background fields: one entry for scalar problems,
  // {u1, u2, p} for the saddle problem
  std::vector<Eigen::VectorXd> fields;
};

// full system + basis columns prepared for one query parameter; the reduced
// Gram blocks are cached so sweeps over N reuse one assembly
struct ProjectedDarcy {
  ActiveMesh active;
  std::vector<Eigen::VectorXd> modes_at_mu;  // inverse-transported, background length
  SpMat A;                                   // assembled active system
  Eigen::VectorXd b;
  bool coercive = true;                      // false when sliver cuts turn A indefinite
  std::vector<Eigen::VectorXd> columns;      // modes restricted to active DOFs
  Eigen::MatrixXd reduced_A;                 // Z^T A Z over all prepared modes
  Eigen::VectorXd reduced_b;
  std::vector<double> column_norms;          // restricted-column norms
};

// classify + assemble at mu, inverse-transport the basis when it was built
// from transported snapshots (map required in that case), project
ProjectedDarcy project_darcy(const ReducedBasis& basis, const DarcyProblem& problem,
                             const BackgroundMesh& mesh, const TransportMap* map,
                             const Eigen::VectorXd& mu);

// reduced solve with the leading N columns; near-zero restricted columns are
// discarded on a singular solve and the system retried once, after which the
// singularity propagates
Eigen::VectorXd reduced_solve(const Eigen::MatrixXd& reduced_A,
                              const Eigen::VectorXd& reduced_b,
                              const std::vector<double>& column_norms, int N,
                              std::vector<int>* used_columns = nullptr);

// reduced solve + reconstruction with the leading N columns of a prepared
// projection (sweeps over N reuse one assembly + projection); singular
// coefficient-space systems — more modes than independent active DOFs under
// them — and non-coercive cut configurations are rerouted to a
// minimum-residual solve on the restricted-column span
RomSolution solve_projected_darcy(const ProjectedDarcy& proj, int N);

RomSolution online_solve_darcy(const ReducedBasis& basis, const DarcyProblem& problem,
                               const BackgroundMesh& mesh, const TransportMap* map,
                               const Eigen::VectorXd& mu, int N);

struct ProjectedStokes {
  ActiveMesh active;
  int n_max = 0;  // prepared block size; columns: [u 0..n) [s n..2n) [p 2n..3n)
  std::vector<Eigen::VectorXd> velocity_modes_at_mu;  // 2-component
  std::vector<Eigen::VectorXd> pressure_modes_at_mu;
  SpMat A;                               // assembled active system
  Eigen::VectorXd b;                     // lifting already subtracted
  std::vector<Eigen::VectorXd> columns;  // block columns over [u1|u2|p] active DOFs
  Eigen::MatrixXd reduced_A;
  Eigen::VectorXd reduced_b;
  std::vector<double> column_norms;
  // lifting evaluated at mu (inverse-transported); empty when lifting is off
  Eigen::VectorXd lift_velocity_at_mu;  // 2-component background
  Eigen::VectorXd lift_pressure_at_mu;
};

ProjectedStokes project_stokes(const StokesReducedSpace& space,
                               const StokesProblem& problem,
                               const BackgroundMesh& mesh, const TransportMap* map,
                               const Eigen::VectorXd& mu);

// index subset for block size N inside a prepared block of size n_max
std::vector<int> stokes_block_indices(int n_max, int N);

RomSolution solve_projected_stokes(const ProjectedStokes& proj, int N);

RomSolution online_solve_stokes(const StokesReducedSpace& space,
                                const StokesProblem& problem,
                                const BackgroundMesh& mesh, const TransportMap* map,
                                const Eigen::VectorXd& mu, int N);

// ||hf - rom||_L2(D(mu)) / ||hf||_L2(D(mu)) over the physical domain via cut
// bulk rules; multi-component fields are stacked background vectors
double relative_error(const Eigen::VectorXd& hf, const Eigen::VectorXd& rom,
                      const ActiveMesh& active, int components = 1);

}  // namespace cutrom
