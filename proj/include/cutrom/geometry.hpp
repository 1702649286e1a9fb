#pragma once
#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "cutrom/mesh.hpp"

namespace cutrom {

enum class BoundaryPart { dirichlet, neumann };

// Parametrized domain D(mu) described by a level set, negative inside.
struct LevelSetDomain {
  std::function<double(const Eigen::Vector2d&, const Eigen::VectorXd&)> phi;
  std::vector<std::pair<double, double>> parameter_box;  // K, per component
  // which condition an interface point carries (whole interface is a single
  // type in both bundled cases, but the hook is general)
  std::function<BoundaryPart(const Eigen::Vector2d&, const Eigen::VectorXd&)>
      boundary_split;

  // same parametrization, sign-flipped phi: describes B \ D(mu)
  LevelSetDomain complement() const;

  bool contains(const Eigen::VectorXd& mu) const;  // mu in K
};

enum class CellClass : std::uint8_t { inside, cut, outside };

// mu-dependent view of the background mesh
struct ActiveMesh {
  const BackgroundMesh* mesh = nullptr;
  Eigen::VectorXd mu;
  std::vector<CellClass> classification;  // per background cell
  std::vector<int> active_cells;          // inside + cut
  std::vector<int> cut_cells;
  std::vector<int> ghost_faces;   // interior faces of the active mesh with >=1 cut neighbor
  std::vector<int> active_dofs;   // background vertex ids, ascending
  std::vector<int> dof_of_vertex; // inverse map, -1 if inactive
  Eigen::VectorXd phi_vertex;     // phi at all background vertices

  int n_dofs() const { return (int)active_dofs.size(); }

  // interior faces of the active mesh (both neighbors active); superset of
  // ghost_faces, used by the full-interior stabilization variant
  std::vector<int> interior_active_faces() const;

  // embed an active-DOF vector into a background-length vector (zeros elsewhere)
  Eigen::VectorXd embed(const Eigen::VectorXd& active_values) const;
  // restrict a background-length vector to active DOFs
  Eigen::VectorXd restrict_to_active(const Eigen::VectorXd& background) const;
};

// vertex-sign classification with snap tolerance 1e-12*h; cells with a vertex
// within tolerance of the interface count as cut
ActiveMesh classify(const BackgroundMesh& mesh, const LevelSetDomain& domain,
                    const Eigen::VectorXd& mu);

// parametrized bijection of B, identity at the reference parameter
struct TransportMap {
  std::function<Eigen::Vector2d(const Eigen::Vector2d&, const Eigen::VectorXd&)>
      forward, inverse;
  Eigen::VectorXd reference_parameter;
};

// ellipse case: phi = mu2^2 (x-mu3)^2 + mu1^2 (y-mu4)^2 - mu1^2 mu2^2 R^2,
// K = [0.3,1.8]^2 x [-0.85,0.85]^2, whole interface Dirichlet
LevelSetDomain ellipse_levelset(double R);
// affine map (x,y) -> (mu1 x + mu3, mu2 y + mu4), reference (1,1,0,0)
TransportMap ellipse_transport();

// cylinder case: phi = (x-3/2)^2 + (y-mu)^2 - R^2, R = 0.2, K = [-0.5,0.5];
// negative inside the cylinder, so the flow domain is the complement
LevelSetDomain cylinder_levelset();
// vertical stretch y -> y + mu (1-y^2) keeping walls fixed, x unchanged,
// reference 0; inverse has a removable singularity at mu = 0
TransportMap cylinder_transport();

}  // namespace cutrom
