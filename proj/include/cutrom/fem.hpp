#pragma once
#include <Eigen/Dense>
#include <array>

#include "cutrom/mesh.hpp"

namespace cutrom {

// P1 basis data on one triangle: constant shape-function gradients and the
// barycentric evaluation needed at quadrature points
struct P1Cell {
  std::array<int, 3> v;               // vertex ids
  std::array<Eigen::Vector2d, 3> p;   // vertex coordinates
  std::array<Eigen::Vector2d, 3> grad;  // grad of each shape function
  double area;

  static P1Cell from(const BackgroundMesh& mesh, int cell) {
    P1Cell c;
    c.v = mesh.cells[cell];
    for (int k = 0; k < 3; ++k) c.p[k] = mesh.vertices[c.v[k]];
    const Eigen::Vector2d e1 = c.p[1] - c.p[0], e2 = c.p[2] - c.p[0];
    const double det = e1.x() * e2.y() - e1.y() * e2.x();
    c.area = 0.5 * det;
    // grad(lambda_k) rows of the inverse Jacobian
    c.grad[1] = Eigen::Vector2d(e2.y(), -e2.x()) / det;
    c.grad[2] = Eigen::Vector2d(-e1.y(), e1.x()) / det;
    c.grad[0] = -c.grad[1] - c.grad[2];
    return c;
  }

  std::array<double, 3> shape_at(const Eigen::Vector2d& x) const {
    std::array<double, 3> lam;
    for (int k = 0; k < 3; ++k)
      lam[k] = (k == 0 ? 1.0 : 0.0) + grad[k].dot(x - p[0]);
    return lam;
  }
};

}  // namespace cutrom
