#pragma once
#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace cutrom {

// Fixed background triangulation of the box B. Structured: nx x ny squares,
// each split along one diagonal. Squares alternate the diagonal direction in
// a checkerboard pattern so the mesh is symmetric under x- and y-reflection
// (for even counts); a uniform diagonal direction would bias the
// discretization and break the symmetry of symmetric problems.
struct BackgroundMesh {
  enum class BoundaryLabel : std::uint8_t { none, bottom, top, left, right };

  struct Face {
    int v0, v1;  // ordered so the right-hand normal (dy,-dx) points c0 -> c1
    int c0, c1;  // adjacent cells, c0 < c1; c1 = -1 on the boundary
  };

  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> cells;  // vertex ids, counterclockwise
  std::vector<Face> faces;
  std::vector<std::array<int, 3>> cell_faces;  // face ids per cell
  std::vector<BoundaryLabel> boundary_vertex_flags;
  std::vector<double> h_K;  // per-cell diameter (longest edge)
  double h = 0;             // max over h_K

  // structured-grid metadata, used for O(1) point location
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  int nx = 0, ny = 0;
  double dx = 0, dy = 0;

  double cell_area(int c) const;
  Eigen::Vector2d centroid(int c) const;
};

BackgroundMesh build_structured_mesh(double xmin, double ymin, double xmax,
                                     double ymax, double target_h);

struct PointLocation {
  int cell;
  std::array<double, 3> bary;
};

// containing cell + barycentric coordinates; lowest cell index wins on shared
// edges/vertices; nullopt if p lies outside B beyond tolerance
std::optional<PointLocation> locate_point(const BackgroundMesh& mesh,
                                          const Eigen::Vector2d& p);

// value of the P1 interpolant of a nodal field at p (via locate_point);
// fallback if p is outside B
double interpolate_p1(const BackgroundMesh& mesh, const Eigen::VectorXd& nodal,
                      const Eigen::Vector2d& p, double fallback);

}  // namespace cutrom
