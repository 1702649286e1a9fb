#include "cutrom/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "cutrom/errors.hpp"

namespace cutrom {

namespace {

struct BaryPoint {
  double l0, l1, l2, w;  // barycentric coords + weight (relative to area)
};

// symmetric rules, weights sum to 1; order = exact polynomial degree
const std::vector<BaryPoint>& triangle_rule(int order) {
  static const std::vector<BaryPoint> r1 = {{1. / 3, 1. / 3, 1. / 3, 1.0}};
  static const std::vector<BaryPoint> r2 = {
      {2. / 3, 1. / 6, 1. / 6, 1. / 3},
      {1. / 6, 2. / 3, 1. / 6, 1. / 3},
      {1. / 6, 1. / 6, 2. / 3, 1. / 3}};
  // 6-point degree-3 rule: all permutations of one asymmetric point, equal
  // weights (Stroud T2:3-1)
  static const std::vector<BaryPoint> r3 = [] {
    const double a = 0.659027622374092, b = 0.231933368553031,
                 c = 0.109039009072877;
    std::vector<BaryPoint> r;
    const double p[6][3] = {{a, b, c}, {a, c, b}, {b, a, c},
                            {b, c, a}, {c, a, b}, {c, b, a}};
    for (auto& q : p) r.push_back({q[0], q[1], q[2], 1. / 6});
    return r;
  }();
  switch (order) {
    case 1: return r1;
    case 2: return r2;
    case 3: return r3;
    default: throw std::invalid_argument("quadrature: bulk order must be 1, 2 or 3");
  }
}

struct GaussPoint {
  double t, w;  // position in [0,1], weight relative to length
};

// order = number of Gauss-Legendre points
std::vector<GaussPoint> segment_rule(int order) {
  switch (order) {
    case 1: return {{0.5, 1.0}};
    case 2: {
      const double d = 0.5 / std::sqrt(3.0);
      return {{0.5 - d, 0.5}, {0.5 + d, 0.5}};
    }
    case 3: {
      const double d = 0.5 * std::sqrt(3.0 / 5.0);
      return {{0.5 - d, 5. / 18}, {0.5, 8. / 18}, {0.5 + d, 5. / 18}};
    }
    default: throw std::invalid_argument("quadrature: segment order must be 1, 2 or 3");
  }
}

double signed_area(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                   const Eigen::Vector2d& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

void append_triangle(QuadratureRule& rule, const Eigen::Vector2d& a,
                     const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                     int order) {
  const double area = std::abs(signed_area(a, b, c));
  if (area == 0) return;
  for (const auto& q : triangle_rule(order)) {
    rule.points.emplace_back(q.l0 * a + q.l1 * b + q.l2 * c);
    rule.weights.push_back(q.w * area);
  }
}

// vertices exactly on the interface are nudged to the negative side so the
// chord construction stays nondegenerate
TriValues snap(const TriValues& phi) {
  TriValues out = phi;
  for (double& v : out)
    if (std::abs(v) <= 1e-14) v = -1e-14;
  return out;
}

// zero of the linear interpolant on edge a-b (phi values of opposite sign)
Eigen::Vector2d edge_zero(const Eigen::Vector2d& pa, const Eigen::Vector2d& pb,
                          double fa, double fb) {
  const double t = fa / (fa - fb);
  return pa + t * (pb - pa);
}

}  // namespace

QuadratureRule cut_bulk_rule(const TriPoints& tri, const TriValues& phi_in, int order) {
  triangle_rule(order);  // validate order up front
  const TriValues phi = snap(phi_in);
  QuadratureRule rule;

  int neg = 0;
  for (double v : phi)
    if (v < 0) ++neg;

  if (neg == 0) return rule;  // empty negative region
  if (neg == 3) {
    append_triangle(rule, tri[0], tri[1], tri[2], order);
    return rule;
  }

  // locate the lone vertex on one side
  int lone = -1;
  const bool lone_negative = (neg == 1);
  for (int k = 0; k < 3; ++k) {
    const bool is_neg = phi[k] < 0;
    if (is_neg == lone_negative) lone = k;
  }
  const int j = (lone + 1) % 3, k = (lone + 2) % 3;
  const Eigen::Vector2d zj = edge_zero(tri[lone], tri[j], phi[lone], phi[j]);
  const Eigen::Vector2d zk = edge_zero(tri[lone], tri[k], phi[lone], phi[k]);

  if (lone_negative) {
    append_triangle(rule, tri[lone], zj, zk, order);
  } else {
    // negative side is the quad (p_j, p_k, z_k, z_j)
    append_triangle(rule, tri[j], tri[k], zk, order);
    append_triangle(rule, tri[j], zk, zj, order);
  }
  return rule;
}

QuadratureRule interface_rule(const TriPoints& tri, const TriValues& phi_in, int order) {
  segment_rule(order);  // validate order up front
  const TriValues phi = snap(phi_in);

  int neg = 0;
  for (double v : phi)
    if (v < 0) ++neg;
  if (neg == 0 || neg == 3)
    throw NoInterfaceError("interface rule requested on an uncut cell");

  Eigen::Vector2d z[2];
  int nz = 0;
  for (int e = 0; e < 3; ++e) {
    const int a = e, b = (e + 1) % 3;
    if ((phi[a] < 0) != (phi[b] < 0))
      z[nz++] = edge_zero(tri[a], tri[b], phi[a], phi[b]);
  }

  // gradient of the linear interpolant points toward increasing phi
  Eigen::Matrix2d J;
  J.col(0) = tri[1] - tri[0];
  J.col(1) = tri[2] - tri[0];
  const Eigen::Vector2d grad =
      J.transpose().inverse() * Eigen::Vector2d(phi[1] - phi[0], phi[2] - phi[0]);
  const double gn = grad.norm();
  const Eigen::Vector2d normal = gn > 0 ? Eigen::Vector2d(grad / gn)
                                        : Eigen::Vector2d(0, 0);

  QuadratureRule rule;
  const double len = (z[1] - z[0]).norm();
  for (const auto& q : segment_rule(order)) {
    rule.points.emplace_back(z[0] + q.t * (z[1] - z[0]));
    rule.weights.push_back(q.w * len);
    rule.normals.push_back(normal);
  }
  return rule;
}

QuadratureRule face_rule(const Eigen::Vector2d& p0, const Eigen::Vector2d& p1,
                         int order) {
  const Eigen::Vector2d d = p1 - p0;
  const double len = d.norm();
  if (!(len > 0)) throw std::invalid_argument("quadrature: degenerate face");
  const Eigen::Vector2d normal(d.y() / len, -d.x() / len);

  QuadratureRule rule;
  for (const auto& q : segment_rule(order)) {
    rule.points.emplace_back(p0 + q.t * d);
    rule.weights.push_back(q.w * len);
    rule.normals.push_back(normal);
  }
  return rule;
}

}  // namespace cutrom
