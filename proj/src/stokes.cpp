#include "cutrom/stokes.hpp"

#include <vector>

#include "cutrom/errors.hpp"
#include "cutrom/fem.hpp"
#include "cutrom/parallel.hpp"
#include "cutrom/quadrature.hpp"

namespace cutrom {

namespace {

struct CellContrib {
  std::vector<Triplet> trips;
  std::vector<std::pair<int, double>> rhs;
};

// block DOF ids: u1 = dof, u2 = n + dof, p = 2n + dof
CellContrib cell_contribution(const StokesProblem& pb, const ActiveMesh& am, int cell) {
  CellContrib out;
  const BackgroundMesh& mesh = *am.mesh;
  const int n = am.n_dofs();
  const P1Cell fe = P1Cell::from(mesh, cell);
  int dof[3];
  for (int k = 0; k < 3; ++k) dof[k] = am.dof_of_vertex[fe.v[k]];

  TriValues phi;
  for (int k = 0; k < 3; ++k) phi[k] = am.phi_vertex[fe.v[k]];
  const TriPoints tri = {fe.p[0], fe.p[1], fe.p[2]};

  const QuadratureRule bulk = cut_bulk_rule(tri, phi, pb.bulk_order);
  const double vol = bulk.weight_sum();
  std::array<double, 3> int_lam = {0, 0, 0};  // integral of each shape fn
  for (size_t q = 0; q < bulk.points.size(); ++q) {
    const auto lam = fe.shape_at(bulk.points[q]);
    for (int k = 0; k < 3; ++k) int_lam[k] += bulk.weights[q] * lam[k];
  }

  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      // nu (grad u, grad psi) on both velocity components
      const double diff = pb.nu * vol * fe.grad[a].dot(fe.grad[b]);
      if (diff != 0) {
        out.trips.emplace_back(dof[a], dof[b], diff);
        out.trips.emplace_back(n + dof[a], n + dof[b], diff);
      }
      // -(p, div psi) and +(div u, xi)
      for (int i = 0; i < 2; ++i) {
        const double bterm = int_lam[b] * fe.grad[a][i];
        if (bterm != 0) {
          out.trips.emplace_back(i * n + dof[a], 2 * n + dof[b], -bterm);
          out.trips.emplace_back(2 * n + dof[b], i * n + dof[a], bterm);
        }
      }
    }

  if (pb.body_force) {
    for (size_t q = 0; q < bulk.points.size(); ++q) {
      const Eigen::Vector2d f = pb.body_force(bulk.points[q], am.mu);
      if (f.isZero()) continue;
      const auto lam = fe.shape_at(bulk.points[q]);
      for (int a = 0; a < 3; ++a)
        for (int i = 0; i < 2; ++i)
          out.rhs.emplace_back(i * n + dof[a], bulk.weights[q] * f[i] * lam[a]);
    }
  }

  if (am.classification[cell] != CellClass::cut) return out;

  // Nitsche terms on the embedded boundary (normal points out of the flow
  // domain, toward the obstacle); skip the cell if the snap tolerance left
  // only a measure-zero chord
  QuadratureRule iface;
  try {
    iface = interface_rule(tri, phi, pb.interface_order);
  } catch (const NoInterfaceError&) {
    return out;
  }
  const double hK = mesh.h_K[cell];
  double ndg[3];
  for (size_t q = 0; q < iface.points.size(); ++q) {
    const double w = iface.weights[q];
    const Eigen::Vector2d& nrm = iface.normals[q];
    const auto lam = fe.shape_at(iface.points[q]);
    for (int k = 0; k < 3; ++k) ndg[k] = nrm.dot(fe.grad[k]);

    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        // -(nu n.grad u, psi) - (u, nu n.grad psi) + nu gamma_D/h (u, psi)
        const double vv = w * pb.nu *
                          (-ndg[b] * lam[a] - lam[b] * ndg[a] +
                           pb.gamma_D / hK * lam[a] * lam[b]);
        for (int i = 0; i < 2; ++i)
          out.trips.emplace_back(i * n + dof[a], i * n + dof[b], vv);
        // +(p n, psi) from the momentum flux, -(u.n, xi) from symmetrization
        for (int i = 0; i < 2; ++i) {
          const double pv = w * nrm[i] * lam[a] * lam[b];
          out.trips.emplace_back(i * n + dof[a], 2 * n + dof[b], pv);
          out.trips.emplace_back(2 * n + dof[b], i * n + dof[a], -pv);
        }
      }

    if (pb.g_D_interface) {
      const Eigen::Vector2d gd = pb.g_D_interface(iface.points[q], am.mu);
      if (!gd.isZero()) {
        for (int a = 0; a < 3; ++a) {
          for (int i = 0; i < 2; ++i)
            out.rhs.emplace_back(
                i * n + dof[a],
                w * pb.nu * gd[i] * (pb.gamma_D / hK * lam[a] - ndg[a]));
          out.rhs.emplace_back(2 * n + dof[a], -w * gd.dot(nrm) * lam[a]);
        }
      }
    }
  }
  return out;
}

// face-jump stabilization: jump functional of n.grad(field) across one face
void face_jump(const BackgroundMesh& mesh, const ActiveMesh& am, int face,
               int dofs[6], double coef[6], double* hF, double* len) {
  const auto& fc = mesh.faces[face];
  const Eigen::Vector2d &a = mesh.vertices[fc.v0], &b = mesh.vertices[fc.v1];
  const Eigen::Vector2d d = b - a;
  *len = d.norm();
  const Eigen::Vector2d n(d.y() / *len, -d.x() / *len);
  *hF = std::max(mesh.h_K[fc.c0], mesh.h_K[fc.c1]);
  int nloc = 0;
  for (int side = 0; side < 2; ++side) {
    const int cell = side == 0 ? fc.c0 : fc.c1;
    const P1Cell fe = P1Cell::from(mesh, cell);
    for (int k = 0; k < 3; ++k) {
      dofs[nloc] = am.dof_of_vertex[fe.v[k]];
      coef[nloc] = (side == 0 ? 1.0 : -1.0) * n.dot(fe.grad[k]);
      ++nloc;
    }
  }
}

}  // namespace

AssembledSystem assemble_stokes(const StokesProblem& pb, const ActiveMesh& am,
                                bool apply_strong_bcs) {
  if (am.active_cells.empty()) throw EmptyDomainError("stokes: empty active mesh");
  const BackgroundMesh& mesh = *am.mesh;
  const int n = am.n_dofs();
  const int nc = (int)am.active_cells.size();

  std::vector<CellContrib> per_cell(nc);
  parallel_for(nc, [&](int k) {
    per_cell[k] = cell_contribution(pb, am, am.active_cells[k]);
  });

  std::vector<Triplet> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(3 * n);
  for (const auto& cc : per_cell) {
    trips.insert(trips.end(), cc.trips.begin(), cc.trips.end());
    for (const auto& r : cc.rhs) rhs[r.first] += r.second;
  }

  // velocity jumps on ghost faces; pressure jumps (subtracted, h^3 scaling)
  // on all interior active faces unless restricted to ghost faces
  int dofs[6];
  double coef[6], hF, len;
  for (int f : am.ghost_faces) {
    face_jump(mesh, am, f, dofs, coef, &hF, &len);
    const double su = pb.gamma_1u * hF * len;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        for (int c = 0; c < 2; ++c)
          trips.emplace_back(c * n + dofs[i], c * n + dofs[j],
                             su * coef[i] * coef[j]);
  }
  const std::vector<int> pressure_faces =
      pb.paper_faces ? am.ghost_faces : am.interior_active_faces();
  for (int f : pressure_faces) {
    face_jump(mesh, am, f, dofs, coef, &hF, &len);
    const double sp = pb.gamma_1p * hF * hF * hF * len;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        trips.emplace_back(2 * n + dofs[i], 2 * n + dofs[j],
                           -sp * coef[i] * coef[j]);
  }

  if (apply_strong_bcs) {
    // row replacement on left/top/bottom velocity DOFs
    std::vector<char> pinned(n, 0);
    Eigen::VectorXd pin1 = Eigen::VectorXd::Zero(n), pin2 = Eigen::VectorXd::Zero(n);
    for (int dof = 0; dof < n; ++dof) {
      const auto label = mesh.boundary_vertex_flags[am.active_dofs[dof]];
      using L = BackgroundMesh::BoundaryLabel;
      if (label == L::left) {
        pinned[dof] = 1;
        pin1[dof] = pb.inlet[0];
        pin2[dof] = pb.inlet[1];
      } else if (label == L::top || label == L::bottom) {
        pinned[dof] = 1;
      }
    }
    std::vector<Triplet> kept;
    kept.reserve(trips.size());
    for (const auto& t : trips) {
      const int row = (int)t.row();
      const int comp = row / n;
      if (comp < 2 && pinned[row % n]) continue;
      kept.push_back(t);
    }
    for (int dof = 0; dof < n; ++dof)
      if (pinned[dof]) {
        kept.emplace_back(dof, dof, 1.0);
        kept.emplace_back(n + dof, n + dof, 1.0);
        rhs[dof] = pin1[dof];
        rhs[n + dof] = pin2[dof];
      }
    trips.swap(kept);
  }

  AssembledSystem sys;
  sys.A.resize(3 * n, 3 * n);
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.b = std::move(rhs);
  return sys;
}

StokesField solve_stokes(const StokesProblem& pb, const ActiveMesh& am) {
  const AssembledSystem sys = assemble_stokes(pb, am);
  const Eigen::VectorXd x = sparse_solve(sys.A, sys.b);
  const int n = am.n_dofs();
  StokesField f;
  f.u1 = x.segment(0, n);
  f.u2 = x.segment(n, n);
  f.p = x.segment(2 * n, n);
  return f;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> solve_supremizer(
    const Eigen::VectorXd& pressure_active, const StokesProblem& pb,
    const ActiveMesh& am) {
  if (pressure_active.size() != am.n_dofs())
    throw std::invalid_argument("supremizer: pressure length mismatch");
  const BackgroundMesh& mesh = *am.mesh;

  // cellwise-constant pressure gradient of the P1 field
  const int ncells = (int)mesh.cells.size();
  std::vector<Eigen::Vector2d> gradp(ncells, Eigen::Vector2d::Zero());
  for (int c : am.active_cells) {
    const P1Cell fe = P1Cell::from(mesh, c);
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (int k = 0; k < 3; ++k)
      g += pressure_active[am.dof_of_vertex[fe.v[k]]] * fe.grad[k];
    gradp[c] = g;
  }

  std::pair<Eigen::VectorXd, Eigen::VectorXd> out;
  for (int comp = 0; comp < 2; ++comp) {
    DarcyProblem sp;
    sp.domain = pb.flow_domain();
    sp.gamma_D = pb.gamma_D;
    sp.gamma_N = 0.0;
    sp.gamma_1 = pb.gamma_1u;
    sp.g_cell = [&gradp, comp](int cell, const Eigen::Vector2d&) {
      return gradp[cell][comp];
    };
    sp.strong_outer_bc = 0.0;
    sp.strong_outer_edges = {BackgroundMesh::BoundaryLabel::left,
                             BackgroundMesh::BoundaryLabel::top,
                             BackgroundMesh::BoundaryLabel::bottom};
    const Eigen::VectorXd s = solve(sp, am);
    (comp == 0 ? out.first : out.second) = s;
  }
  return out;
}

}  // namespace cutrom
