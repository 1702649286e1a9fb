#pragma once
#include <Eigen/Dense>
#include <array>
#include <vector>

namespace cutrom {

// Integration rule on cut geometry. Weights carry the measure (area or
// length); normals, when present, are unit and constant per chord/face.
struct QuadratureRule {
  std::vector<Eigen::Vector2d> points;
  std::vector<double> weights;
  std::vector<Eigen::Vector2d> normals;  // empty for bulk rules

  double weight_sum() const {
    double s = 0;
    for (double w : weights) s += w;
    return s;
  }
};

using TriPoints = std::array<Eigen::Vector2d, 3>;
using TriValues = std::array<double, 3>;

// rule over {linear interpolant of phi <= 0} within the triangle: the chord
// splits the cell into 1 or 2 sub-triangles on the negative side (or the
// whole cell / nothing when uncut); symmetric Gauss rule of the requested
// polynomial order (1, 2 or 3) mapped onto each piece
QuadratureRule cut_bulk_rule(const TriPoints& tri, const TriValues& phi, int order);

// Gauss-Legendre rule with `order` points on the chord of the linear
// interpolant; normal along grad(interpolant), pointing toward positive phi
QuadratureRule interface_rule(const TriPoints& tri, const TriValues& phi, int order);

// Gauss-Legendre rule with `order` points on the segment p0-p1; weight sum =
// length; normal = right-hand normal of p0->p1 (the stored face orientation
// makes that point from the lower- to the higher-indexed adjacent cell)
QuadratureRule face_rule(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                         int order);

}  // namespace cutrom
