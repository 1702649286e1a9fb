#pragma once
#include <Eigen/Dense>
#include <functional>

#include "cutrom/darcy.hpp"
#include "cutrom/geometry.hpp"
#include "cutrom/linalg.hpp"

namespace cutrom {

// Equal-order P1/P1 Stokes on an embedded flow domain: Nitsche conditions on
// the embedded (cylinder) boundary, strong conditions on the fitted box
// edges, jump stabilization for velocity near the cut and for pressure.
// DOF layout of the block system: [u1 | u2 | p], each of active-DOF length.
struct StokesProblem {
  LevelSetDomain obstacle;  // level set negative inside the obstacle; the
                            // flow domain is its complement
  double nu = 1.0;
  double gamma_D = 10.0;   // Nitsche penalty on the embedded boundary
  double gamma_1u = 0.1;   // velocity jump penalty (ghost faces)
  double gamma_1p = 0.1;   // pressure jump penalty, h^3-scaled
  // false: pressure jumps stabilized on all interior faces of the active
  // mesh; true: ghost faces only (weaker; kept as a comparison switch)
  bool paper_faces = false;

  Eigen::Vector2d inlet{1.0, 0.0};  // strong value on the left edge
  std::function<Eigen::Vector2d(const Eigen::Vector2d&, const Eigen::VectorXd&)>
      body_force;  // optional
  std::function<Eigen::Vector2d(const Eigen::Vector2d&, const Eigen::VectorXd&)>
      g_D_interface;  // embedded-boundary datum; unset = no-slip zero

  int bulk_order = 2, interface_order = 2;

  // the flow domain (level set sign flipped)
  LevelSetDomain flow_domain() const { return obstacle.complement(); }
};

struct StokesField {
  Eigen::VectorXd u1, u2, p;  // active-DOF length each
};

// active = classify(mesh, problem.flow_domain(), mu).
// apply_strong_bcs=false leaves the raw saddle system (used to check the
// block structure); true replaces the velocity rows of left/top/bottom
// boundary DOFs with value pinning (left: inlet, walls: zero).
AssembledSystem assemble_stokes(const StokesProblem& problem,
                                const ActiveMesh& active,
                                bool apply_strong_bcs = true);

StokesField solve_stokes(const StokesProblem& problem, const ActiveMesh& active);

// enrichment field for the pressure: componentwise scalar solves of
// -lap s = grad(p_h) with zero conditions on the embedded boundary (weak) and
// the strong box edges, natural on the outflow edge
std::pair<Eigen::VectorXd, Eigen::VectorXd> solve_supremizer(
    const Eigen::VectorXd& pressure_active, const StokesProblem& problem,
    const ActiveMesh& active);

}  // namespace cutrom
