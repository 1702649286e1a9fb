#include "cutrom/darcy.hpp"

#include <algorithm>
#include <vector>

#include "cutrom/errors.hpp"
#include "cutrom/fem.hpp"
#include "cutrom/parallel.hpp"
#include "cutrom/quadrature.hpp"

namespace cutrom {

namespace {

struct CellContrib {
  std::vector<Triplet> trips;          // active-DOF indices
  std::vector<std::pair<int, double>> rhs;
};

// bulk + interface terms of one active cell
CellContrib cell_contribution(const DarcyProblem& pb, const ActiveMesh& am, int cell) {
  CellContrib out;
  const BackgroundMesh& mesh = *am.mesh;
  const P1Cell fe = P1Cell::from(mesh, cell);
  const auto& t = mesh.cells[cell];
  int dof[3];
  for (int k = 0; k < 3; ++k) dof[k] = am.dof_of_vertex[t[k]];

  TriValues phi;
  for (int k = 0; k < 3; ++k) phi[k] = am.phi_vertex[t[k]];
  const TriPoints tri = {fe.p[0], fe.p[1], fe.p[2]};
  const bool cut = am.classification[cell] == CellClass::cut;

  // diffusion over the physical part of the cell
  const QuadratureRule bulk = cut_bulk_rule(tri, phi, pb.bulk_order);
  const double vol = bulk.weight_sum();
  if (vol > 0) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        out.trips.emplace_back(dof[i], dof[j], vol * fe.grad[i].dot(fe.grad[j]));
  }
  if (pb.g || pb.g_cell) {
    for (size_t q = 0; q < bulk.points.size(); ++q) {
      const double gv = pb.g_cell ? pb.g_cell(cell, bulk.points[q])
                                  : pb.g(bulk.points[q], am.mu);
      if (gv == 0) continue;
      const auto lam = fe.shape_at(bulk.points[q]);
      for (int j = 0; j < 3; ++j)
        out.rhs.emplace_back(dof[j], bulk.weights[q] * gv * lam[j]);
    }
  }

  if (!cut) return out;

  // Nitsche terms on the embedded boundary piece; a cell can carry the cut
  // flag with a measure-zero chord (vertex exactly on the interface within
  // the classification tolerance) and then contributes nothing here
  QuadratureRule iface;
  try {
    iface = interface_rule(tri, phi, pb.interface_order);
  } catch (const NoInterfaceError&) {
    return out;
  }
  const double hK = mesh.h_K[cell];
  double ndg[3];  // n . grad(shape)
  for (size_t q = 0; q < iface.points.size(); ++q) {
    const double w = iface.weights[q];
    const Eigen::Vector2d& n = iface.normals[q];
    const auto lam = fe.shape_at(iface.points[q]);
    for (int k = 0; k < 3; ++k) ndg[k] = n.dot(fe.grad[k]);

    const BoundaryPart part = pb.domain.boundary_split
                                  ? pb.domain.boundary_split(iface.points[q], am.mu)
                                  : BoundaryPart::dirichlet;
    if (part == BoundaryPart::dirichlet) {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          out.trips.emplace_back(dof[i], dof[j],
                                 w * (-ndg[i] * lam[j] - lam[i] * ndg[j] +
                                      pb.gamma_D / hK * lam[i] * lam[j]));
      if (pb.g_D || pb.g_D_cell) {
        const double gd = pb.g_D_cell ? pb.g_D_cell(cell, iface.points[q])
                                      : pb.g_D(iface.points[q], am.mu);
        if (gd != 0)
          for (int j = 0; j < 3; ++j)
            out.rhs.emplace_back(dof[j],
                                 w * gd * (pb.gamma_D / hK * lam[j] - ndg[j]));
      }
    } else {  // Neumann: flux penalty + data terms
      if (pb.gamma_N != 0)
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            out.trips.emplace_back(dof[i], dof[j],
                                   w * pb.gamma_N * hK * ndg[i] * ndg[j]);
      if (pb.g_N) {
        const double gn = pb.g_N(iface.points[q], am.mu);
        if (gn != 0)
          for (int j = 0; j < 3; ++j)
            out.rhs.emplace_back(dof[j],
                                 w * gn * (lam[j] + pb.gamma_N * hK * ndg[j]));
      }
    }
  }
  return out;
}

// jump penalty gamma_1 h_F ([n.grad u],[n.grad v])_F over one ghost face;
// P1 normal gradients are constant, so the integral is closed-form
void ghost_face_contribution(const DarcyProblem& pb, const ActiveMesh& am,
                             int face, std::vector<Triplet>& trips) {
  const BackgroundMesh& mesh = *am.mesh;
  const auto& fc = mesh.faces[face];
  const Eigen::Vector2d &a = mesh.vertices[fc.v0], &b = mesh.vertices[fc.v1];
  const Eigen::Vector2d d = b - a;
  const double len = d.norm();
  const Eigen::Vector2d n(d.y() / len, -d.x() / len);  // points c0 -> c1
  const double hF = std::max(mesh.h_K[fc.c0], mesh.h_K[fc.c1]);
  const double scale = pb.gamma_1 * hF * len;

  // jump functional: +n.grad on c0 side, -n.grad on c1 side
  int dofs[6];
  double coef[6];
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
  for (int i = 0; i < nloc; ++i)
    for (int j = 0; j < nloc; ++j)
      trips.emplace_back(dofs[i], dofs[j], scale * coef[i] * coef[j]);
}

AssembledSystem assemble_impl(const DarcyProblem& pb, const ActiveMesh& am,
                              bool run_parallel) {
  if (am.active_cells.empty())
    throw EmptyDomainError("darcy: empty active mesh");
  const BackgroundMesh& mesh = *am.mesh;
  const int n = am.n_dofs();
  const int nc = (int)am.active_cells.size();

  std::vector<CellContrib> per_cell(nc);
  const auto body = [&](int k) {
    per_cell[k] = cell_contribution(pb, am, am.active_cells[k]);
  };
  if (run_parallel) parallel_for(nc, body);
  else serial_for(nc, body);

  // strong pinning of box-boundary vertices (symmetric elimination)
  std::vector<char> pinned(n, 0);
  if (pb.strong_outer_bc) {
    for (int dof = 0; dof < n; ++dof) {
      const auto label = mesh.boundary_vertex_flags[am.active_dofs[dof]];
      if (label == BackgroundMesh::BoundaryLabel::none) continue;
      if (pb.strong_outer_edges.empty() ||
          std::find(pb.strong_outer_edges.begin(), pb.strong_outer_edges.end(),
                    label) != pb.strong_outer_edges.end())
        pinned[dof] = 1;
    }
  }
  const double pin_value = pb.strong_outer_bc.value_or(0.0);

  std::vector<Triplet> trips;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  // merge in fixed cell order so the result is independent of scheduling
  for (const auto& cc : per_cell) {
    for (const auto& t : cc.trips) {
      if (pinned[t.row()]) continue;
      if (pinned[t.col()]) {
        rhs[t.row()] -= t.value() * pin_value;
        continue;
      }
      trips.push_back(t);
    }
    for (const auto& r : cc.rhs)
      if (!pinned[r.first]) rhs[r.first] += r.second;
  }
  {
    std::vector<Triplet> gtrips;
    for (int f : am.ghost_faces) ghost_face_contribution(pb, am, f, gtrips);
    for (const auto& t : gtrips) {
      if (pinned[t.row()]) continue;
      if (pinned[t.col()]) {
        rhs[t.row()] -= t.value() * pin_value;
        continue;
      }
      trips.push_back(t);
    }
  }
  for (int dof = 0; dof < n; ++dof)
    if (pinned[dof]) {
      trips.emplace_back(dof, dof, 1.0);
      rhs[dof] = pin_value;
    }

  AssembledSystem sys;
  sys.A.resize(n, n);
  sys.A.setFromTriplets(trips.begin(), trips.end());
  sys.b = std::move(rhs);
  return sys;
}

}  // namespace

AssembledSystem assemble(const DarcyProblem& pb, const ActiveMesh& am) {
  return assemble_impl(pb, am, true);
}

AssembledSystem assemble_serial(const DarcyProblem& pb, const ActiveMesh& am) {
  return assemble_impl(pb, am, false);
}

Eigen::VectorXd solve(const DarcyProblem& pb, const ActiveMesh& am) {
  const AssembledSystem sys = assemble(pb, am);
  return sparse_solve(sys.A, sys.b);
}

Eigen::VectorXd solve_harmonic_extension(const Eigen::VectorXd& trace_active,
                                         const ActiveMesh& primal,
                                         const LevelSetDomain& domain) {
  const BackgroundMesh& mesh = *primal.mesh;
  const Eigen::VectorXd trace_bg = primal.embed(trace_active);

  const LevelSetDomain comp = domain.complement();
  const ActiveMesh cam = classify(mesh, comp, primal.mu);

  DarcyProblem pb;
  pb.domain = comp;
  // datum: P1 interpolant of the primal solution, evaluated cellwise (cut
  // cells coincide for domain and complement, so all vertices carry values)
  pb.g_D_cell = [&mesh, &trace_bg](int cell, const Eigen::Vector2d& x) {
    const P1Cell fe = P1Cell::from(mesh, cell);
    const auto lam = fe.shape_at(x);
    double v = 0;
    for (int k = 0; k < 3; ++k) v += lam[k] * trace_bg[fe.v[k]];
    return v;
  };
  pb.strong_outer_bc = 0.0;

  const Eigen::VectorXd uc = solve(pb, cam);
  return cam.embed(uc);
}

}  // namespace cutrom
