#include "cutrom/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "cutrom/errors.hpp"

namespace cutrom {

LevelSetDomain LevelSetDomain::complement() const {
  LevelSetDomain c = *this;
  auto f = phi;
  c.phi = [f](const Eigen::Vector2d& p, const Eigen::VectorXd& mu) {
    return -f(p, mu);
  };
  return c;
}

bool LevelSetDomain::contains(const Eigen::VectorXd& mu) const {
  if ((size_t)mu.size() != parameter_box.size()) return false;
  for (int k = 0; k < mu.size(); ++k)
    if (mu[k] < parameter_box[k].first || mu[k] > parameter_box[k].second)
      return false;
  return true;
}

std::vector<int> ActiveMesh::interior_active_faces() const {
  std::vector<int> out;
  for (int f = 0; f < (int)mesh->faces.size(); ++f) {
    const auto& fc = mesh->faces[f];
    if (fc.c1 < 0) continue;
    if (classification[fc.c0] != CellClass::outside &&
        classification[fc.c1] != CellClass::outside)
      out.push_back(f);
  }
  return out;
}

Eigen::VectorXd ActiveMesh::embed(const Eigen::VectorXd& active_values) const {
  if (active_values.size() != (int)active_dofs.size())
    throw std::invalid_argument("active mesh: embed length mismatch");
  Eigen::VectorXd bg = Eigen::VectorXd::Zero(mesh->vertices.size());
  for (size_t k = 0; k < active_dofs.size(); ++k) bg[active_dofs[k]] = active_values[k];
  return bg;
}

Eigen::VectorXd ActiveMesh::restrict_to_active(const Eigen::VectorXd& background) const {
  if (background.size() != (int)mesh->vertices.size())
    throw std::invalid_argument("active mesh: restrict length mismatch");
  Eigen::VectorXd out(active_dofs.size());
  for (size_t k = 0; k < active_dofs.size(); ++k) out[k] = background[active_dofs[k]];
  return out;
}

ActiveMesh classify(const BackgroundMesh& mesh, const LevelSetDomain& domain,
                    const Eigen::VectorXd& mu) {
  ActiveMesh am;
  am.mesh = &mesh;
  am.mu = mu;
  const double tol = 1e-12 * mesh.h;

  am.phi_vertex.resize(mesh.vertices.size());
  for (size_t v = 0; v < mesh.vertices.size(); ++v)
    am.phi_vertex[v] = domain.phi(mesh.vertices[v], mu);

  am.classification.resize(mesh.cells.size());
  std::vector<char> vertex_active(mesh.vertices.size(), 0);
  for (size_t c = 0; c < mesh.cells.size(); ++c) {
    const auto& t = mesh.cells[c];
    int neg = 0, pos = 0;
    for (int k = 0; k < 3; ++k) {
      const double p = am.phi_vertex[t[k]];
      if (p < -tol) ++neg;
      else if (p > tol) ++pos;
      // |phi| <= tol: counts as neither -> cell cannot be inside or outside
    }
    CellClass cls;
    if (neg == 3) cls = CellClass::inside;
    else if (pos == 3) cls = CellClass::outside;
    else cls = CellClass::cut;
    am.classification[c] = cls;
    if (cls != CellClass::outside) {
      am.active_cells.push_back((int)c);
      if (cls == CellClass::cut) am.cut_cells.push_back((int)c);
      for (int k = 0; k < 3; ++k) vertex_active[t[k]] = 1;
    }
  }
  if (am.active_cells.empty())
    throw EmptyDomainError("classify: no cell intersects the domain");

  for (int f = 0; f < (int)mesh.faces.size(); ++f) {
    const auto& fc = mesh.faces[f];
    if (fc.c1 < 0) continue;  // boundary face of B
    const bool a0 = am.classification[fc.c0] != CellClass::outside;
    const bool a1 = am.classification[fc.c1] != CellClass::outside;
    if (!a0 || !a1) continue;  // boundary face of the active mesh: excluded
    if (am.classification[fc.c0] == CellClass::cut ||
        am.classification[fc.c1] == CellClass::cut)
      am.ghost_faces.push_back(f);
  }

  am.dof_of_vertex.assign(mesh.vertices.size(), -1);
  for (size_t v = 0; v < mesh.vertices.size(); ++v)
    if (vertex_active[v]) {
      am.dof_of_vertex[v] = (int)am.active_dofs.size();
      am.active_dofs.push_back((int)v);
    }
  return am;
}

LevelSetDomain ellipse_levelset(double R) {
  if (!(R > 0)) throw std::invalid_argument("ellipse: R must be positive");
  LevelSetDomain d;
  d.phi = [R](const Eigen::Vector2d& p, const Eigen::VectorXd& mu) {
    const double ex = p.x() - mu[2], ey = p.y() - mu[3];
    return mu[1] * mu[1] * ex * ex + mu[0] * mu[0] * ey * ey -
           mu[0] * mu[0] * mu[1] * mu[1] * R * R;
  };
  d.parameter_box = {{0.3, 1.8}, {0.3, 1.8}, {-0.85, 0.85}, {-0.85, 0.85}};
  d.boundary_split = [](const Eigen::Vector2d&, const Eigen::VectorXd&) {
    return BoundaryPart::dirichlet;
  };
  return d;
}

TransportMap ellipse_transport() {
  TransportMap t;
  t.forward = [](const Eigen::Vector2d& p, const Eigen::VectorXd& mu) {
    return Eigen::Vector2d(mu[0] * p.x() + mu[2], mu[1] * p.y() + mu[3]);
  };
  t.inverse = [](const Eigen::Vector2d& p, const Eigen::VectorXd& mu) {
    return Eigen::Vector2d((p.x() - mu[2]) / mu[0], (p.y() - mu[3]) / mu[1]);
  };
  t.reference_parameter = Eigen::Vector4d(1.0, 1.0, 0.0, 0.0);
  return t;
}

LevelSetDomain cylinder_levelset() {
  constexpr double R = 0.2;
  LevelSetDomain d;
  d.phi = [](const Eigen::Vector2d& p, const Eigen::VectorXd& mu) {
    const double ex = p.x() - 1.5, ey = p.y() - mu[0];
    return ex * ex + ey * ey - R * R;
  };
  d.parameter_box = {{-0.5, 0.5}};
  d.boundary_split = [](const Eigen::Vector2d&, const Eigen::VectorXd&) {
    return BoundaryPart::dirichlet;
  };
  return d;
}

TransportMap cylinder_transport() {
  TransportMap t;
  t.forward = [](const Eigen::Vector2d& p, const Eigen::VectorXd& mu) {
    return Eigen::Vector2d(p.x(), p.y() + mu[0] * (1.0 - p.y() * p.y()));
  };
  t.inverse = [](const Eigen::Vector2d& p, const Eigen::VectorXd& mu) {
    const double m = mu[0];
    if (std::abs(m) < 1e-8) return p;  // limit of the closed form as mu -> 0
    const double y = (1.0 - std::sqrt(4.0 * m * m - 4.0 * m * p.y() + 1.0)) / (2.0 * m);
    return Eigen::Vector2d(p.x(), y);
  };
  t.reference_parameter = Eigen::VectorXd::Zero(1);
  return t;
}

}  // namespace cutrom
