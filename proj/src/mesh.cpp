#include "cutrom/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace cutrom {

double BackgroundMesh::cell_area(int c) const {
  const auto& t = cells[c];
  const Eigen::Vector2d &a = vertices[t[0]], &b = vertices[t[1]], &d = vertices[t[2]];
  return 0.5 * ((b.x() - a.x()) * (d.y() - a.y()) - (b.y() - a.y()) * (d.x() - a.x()));
}

Eigen::Vector2d BackgroundMesh::centroid(int c) const {
  const auto& t = cells[c];
  return (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) / 3.0;
}

BackgroundMesh build_structured_mesh(double xmin, double ymin, double xmax,
                                     double ymax, double target_h) {
  if (!(target_h > 0)) throw std::invalid_argument("mesh: target_h must be positive");
  if (!(xmax > xmin) || !(ymax > ymin))
    throw std::invalid_argument("mesh: degenerate box");

  BackgroundMesh m;
  m.xmin = xmin; m.xmax = xmax; m.ymin = ymin; m.ymax = ymax;
  m.nx = std::max(1, (int)std::ceil((xmax - xmin) / target_h - 1e-12));
  m.ny = std::max(1, (int)std::ceil((ymax - ymin) / target_h - 1e-12));
  m.dx = (xmax - xmin) / m.nx;
  m.dy = (ymax - ymin) / m.ny;

  const int nvx = m.nx + 1, nvy = m.ny + 1;
  m.vertices.reserve((size_t)nvx * nvy);
  for (int j = 0; j < nvy; ++j)
    for (int i = 0; i < nvx; ++i)
      m.vertices.emplace_back(xmin + i * m.dx, ymin + j * m.dy);
  auto vid = [&](int i, int j) { return j * nvx + i; };

  m.cells.reserve((size_t)2 * m.nx * m.ny);
  for (int j = 0; j < m.ny; ++j)
    for (int i = 0; i < m.nx; ++i) {
      const int bl = vid(i, j), br = vid(i + 1, j);
      const int tl = vid(i, j + 1), tr = vid(i + 1, j + 1);
      if ((i + j) % 2 == 0) {  // diagonal bl-tr
        m.cells.push_back({bl, br, tr});
        m.cells.push_back({bl, tr, tl});
      } else {  // diagonal br-tl
        m.cells.push_back({bl, br, tl});
        m.cells.push_back({br, tr, tl});
      }
    }

  // faces: first touch creates (c0 = lower cell index), second touch closes
  std::map<std::pair<int, int>, int> edge_face;
  m.cell_faces.assign(m.cells.size(), {-1, -1, -1});
  for (int c = 0; c < (int)m.cells.size(); ++c) {
    const auto& t = m.cells[c];
    for (int e = 0; e < 3; ++e) {
      const int a = t[e], b = t[(e + 1) % 3];
      const auto key = std::minmax(a, b);
      auto it = edge_face.find(key);
      if (it == edge_face.end()) {
        // store traversal order of the first (=lower-index) cell: for a ccw
        // cell the right-hand normal of a->b points away from it
        m.faces.push_back({a, b, c, -1});
        edge_face.emplace(key, (int)m.faces.size() - 1);
        m.cell_faces[c][e] = (int)m.faces.size() - 1;
      } else {
        m.faces[it->second].c1 = c;
        m.cell_faces[c][e] = it->second;
      }
    }
  }

  const double tol = 1e-12 * std::max(xmax - xmin, ymax - ymin);
  m.boundary_vertex_flags.assign(m.vertices.size(), BackgroundMesh::BoundaryLabel::none);
  for (size_t v = 0; v < m.vertices.size(); ++v) {
    const auto& p = m.vertices[v];
    // walls take precedence over inlet/outlet at box corners
    if (std::abs(p.y() - ymin) < tol) m.boundary_vertex_flags[v] = BackgroundMesh::BoundaryLabel::bottom;
    else if (std::abs(p.y() - ymax) < tol) m.boundary_vertex_flags[v] = BackgroundMesh::BoundaryLabel::top;
    else if (std::abs(p.x() - xmin) < tol) m.boundary_vertex_flags[v] = BackgroundMesh::BoundaryLabel::left;
    else if (std::abs(p.x() - xmax) < tol) m.boundary_vertex_flags[v] = BackgroundMesh::BoundaryLabel::right;
  }

  m.h_K.resize(m.cells.size());
  m.h = 0;
  for (size_t c = 0; c < m.cells.size(); ++c) {
    const auto& t = m.cells[c];
    double hk = 0;
    for (int e = 0; e < 3; ++e)
      hk = std::max(hk, (m.vertices[t[e]] - m.vertices[t[(e + 1) % 3]]).norm());
    m.h_K[c] = hk;
    m.h = std::max(m.h, hk);
  }
  return m;
}

namespace {

std::array<double, 3> barycentric(const BackgroundMesh& m, int c,
                                  const Eigen::Vector2d& p) {
  const auto& t = m.cells[c];
  const Eigen::Vector2d &a = m.vertices[t[0]], &b = m.vertices[t[1]], &d = m.vertices[t[2]];
  const double det = (b.x() - a.x()) * (d.y() - a.y()) - (b.y() - a.y()) * (d.x() - a.x());
  const double l1 = ((p.x() - a.x()) * (d.y() - a.y()) - (p.y() - a.y()) * (d.x() - a.x())) / det;
  const double l2 = ((b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x())) / det;
  return {1.0 - l1 - l2, l1, l2};
}

}  // namespace

std::optional<PointLocation> locate_point(const BackgroundMesh& m,
                                          const Eigen::Vector2d& p) {
  const double tol = 1e-12 * std::max(m.xmax - m.xmin, m.ymax - m.ymin);
  if (p.x() < m.xmin - tol || p.x() > m.xmax + tol ||
      p.y() < m.ymin - tol || p.y() > m.ymax + tol)
    return std::nullopt;

  const int si = std::clamp((int)std::floor((p.x() - m.xmin) / m.dx), 0, m.nx - 1);
  const int sj = std::clamp((int)std::floor((p.y() - m.ymin) / m.dy), 0, m.ny - 1);

  // candidate cells from the 3x3 square neighborhood, ascending cell index so
  // the lowest-index containing cell wins on shared edges
  std::array<int, 18> cand;
  int ncand = 0;
  for (int j = std::max(0, sj - 1); j <= std::min(m.ny - 1, sj + 1); ++j)
    for (int i = std::max(0, si - 1); i <= std::min(m.nx - 1, si + 1); ++i) {
      const int base = 2 * (j * m.nx + i);
      cand[ncand++] = base;
      cand[ncand++] = base + 1;
    }
  std::sort(cand.begin(), cand.begin() + ncand);

  for (int k = 0; k < ncand; ++k) {
    const auto bc = barycentric(m, cand[k], p);
    if (bc[0] >= -1e-12 && bc[1] >= -1e-12 && bc[2] >= -1e-12)
      return PointLocation{cand[k], bc};
  }
  return std::nullopt;
}

double interpolate_p1(const BackgroundMesh& m, const Eigen::VectorXd& nodal,
                      const Eigen::Vector2d& p, double fallback) {
  const auto loc = locate_point(m, p);
  if (!loc) return fallback;
  const auto& t = m.cells[loc->cell];
  return loc->bary[0] * nodal[t[0]] + loc->bary[1] * nodal[t[1]] +
         loc->bary[2] * nodal[t[2]];
}

}  // namespace cutrom
