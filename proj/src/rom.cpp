#include "cutrom/rom.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <stdexcept>

#include "cutrom/errors.hpp"
#include "cutrom/fem.hpp"
#include "cutrom/quadrature.hpp"
#include "cutrom/snapshot.hpp"

namespace cutrom {

namespace {

// Z^T A Z and Z^T b for given columns (active-DOF restricted)
void project_system(const SpMat& A, const Eigen::VectorXd& b,
                    const std::vector<Eigen::VectorXd>& cols,
                    Eigen::MatrixXd* rA, Eigen::VectorXd* rb,
                    std::vector<double>* norms) {
  const int N = (int)cols.size();
  Eigen::MatrixXd Z(A.rows(), N);
  for (int i = 0; i < N; ++i) Z.col(i) = cols[i];
  const Eigen::MatrixXd AZ = A * Z;
  *rA = Z.transpose() * AZ;
  *rb = Z.transpose() * b;
  norms->resize(N);
  for (int i = 0; i < N; ++i) (*norms)[i] = Z.col(i).norm();
}

}  // namespace

ProjectedDarcy project_darcy(const ReducedBasis& basis, const DarcyProblem& pb,
                             const BackgroundMesh& mesh, const TransportMap* map,
                             const Eigen::VectorXd& mu) {
  if (basis.transported && map == nullptr)
    throw std::invalid_argument("project_darcy: transported basis needs its map");

  ProjectedDarcy out;
  out.active = classify(mesh, pb.domain, mu);
  const AssembledSystem sys = assemble(pb, out.active);

  out.modes_at_mu.reserve(basis.size());
  for (const auto& mode : basis.modes)
    out.modes_at_mu.push_back(
        basis.transported
            ? transport_compose(mode, mesh, *map, mu, TransportDirection::inverse)
            : mode);

  out.columns.reserve(basis.size());
  for (const auto& m : out.modes_at_mu)
    out.columns.push_back(out.active.restrict_to_active(m));
  project_system(sys.A, sys.b, out.columns, &out.reduced_A, &out.reduced_b,
                 &out.column_norms);
  out.A = sys.A;
  out.b = sys.b;

  // LDLT inertia check: sliver cuts can push the Nitsche form indefinite, in
  // which case every Galerkin solve at this mu is rerouted to the span solver
  Eigen::SimplicialLDLT<SpMat> ldlt(out.A);
  out.coercive = ldlt.info() == Eigen::Success;
  if (out.coercive) {
    const auto& D = ldlt.vectorD();
    const double dmax = D.cwiseAbs().maxCoeff();
    for (int i = 0; i < D.size(); ++i)
      if (D[i] < -1e-10 * dmax) out.coercive = false;
  }
  return out;
}

Eigen::VectorXd reduced_solve(const Eigen::MatrixXd& rA, const Eigen::VectorXd& rb,
                              const std::vector<double>& norms, int N,
                              std::vector<int>* used_columns) {
  if (N < 1 || N > rA.rows())
    throw std::invalid_argument("reduced_solve: N out of range");

  auto solve_subset = [&](const std::vector<int>& idx) {
    const int k = (int)idx.size();
    Eigen::MatrixXd A(k, k);
    Eigen::VectorXd b(k);
    for (int i = 0; i < k; ++i) {
      b[i] = rb[idx[i]];
      for (int j = 0; j < k; ++j) A(i, j) = rA(idx[i], idx[j]);
    }
    return dense_solve(A, b);
  };

  std::vector<int> idx(N);
  for (int i = 0; i < N; ++i) idx[i] = i;
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(N);
  try {
    const Eigen::VectorXd a = solve_subset(idx);
    for (int i = 0; i < N; ++i) alpha[i] = a[i];
    if (used_columns) *used_columns = idx;
    return alpha;
  } catch (const SingularMatrixError&) {
    // drop columns that vanish on the active mesh and retry once
    std::vector<int> keep;
    for (int i = 0; i < N; ++i)
      if (norms[i] >= 1e-12) keep.push_back(i);
    if (!keep.empty() && (int)keep.size() < N) {
      try {
        const Eigen::VectorXd a = solve_subset(keep);
        for (size_t i = 0; i < keep.size(); ++i) alpha[keep[i]] = a[i];
        if (used_columns) *used_columns = keep;
        return alpha;
      } catch (const SingularMatrixError&) {
      }
    }
    throw SingularMatrixError(
        "reduced_solve: singular reduced system with basis size " +
        std::to_string(N));
  }
}

// Minimum-residual solve on the span of the restricted columns, with
// minimum-norm coefficients. The coefficient-space Galerkin system is
// unusable when it is rank deficient (more modes than independent active
// DOFs under them) and also when a sliver cut costs the form its coercivity
// — a Galerkin "projection" in an indefinite metric carries no approximation
// bound and can amplify without limit. Minimizing the operator residual over
// the span stays well posed in both situations and degrades to alpha = 0
// when no mode touches the active mesh.
static Eigen::VectorXd span_least_squares(const SpMat& A, const Eigen::VectorXd& b,
                                          const std::vector<const Eigen::VectorXd*>& cols) {
  const int k = (int)cols.size();
  Eigen::MatrixXd AZ(A.rows(), k);
  for (int i = 0; i < k; ++i) AZ.col(i) = A * (*cols[i]);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-10);
  cod.compute(AZ);
  Eigen::VectorXd alpha = cod.solve(b);
  if (!alpha.allFinite())
    throw SingularMatrixError("span solve produced non-finite coefficients");
  return alpha;
}

RomSolution solve_projected_darcy(const ProjectedDarcy& proj, int N) {
  RomSolution sol;
  auto fallback = [&]() {
    std::vector<const Eigen::VectorXd*> cols(N);
    for (int i = 0; i < N; ++i) cols[i] = &proj.columns[i];
    return span_least_squares(proj.A, proj.b, cols);
  };
  if (!proj.coercive) {
    sol.alpha = fallback();
  } else {
    try {
      sol.alpha = reduced_solve(proj.reduced_A, proj.reduced_b, proj.column_norms, N);
    } catch (const SingularMatrixError&) {
      sol.alpha = fallback();
    }
  }
  Eigen::VectorXd field =
      Eigen::VectorXd::Zero(proj.active.mesh->vertices.size());
  for (int i = 0; i < N; ++i) field += sol.alpha[i] * proj.modes_at_mu[i];
  sol.fields.push_back(std::move(field));
  return sol;
}

RomSolution online_solve_darcy(const ReducedBasis& basis, const DarcyProblem& pb,
                               const BackgroundMesh& mesh, const TransportMap* map,
                               const Eigen::VectorXd& mu, int N) {
  if (!pb.domain.contains(mu))
    throw std::invalid_argument("online_solve_darcy: mu outside the parameter box");
  if (N < 1 || N > basis.size())
    throw std::invalid_argument("online_solve_darcy: N out of range");
  return solve_projected_darcy(project_darcy(basis, pb, mesh, map, mu), N);
}

std::vector<int> stokes_block_indices(int n_max, int N) {
  std::vector<int> idx;
  idx.reserve(3 * N);
  for (int i = 0; i < N; ++i) idx.push_back(i);                  // velocity
  for (int i = 0; i < N; ++i) idx.push_back(n_max + i);          // supremizer
  for (int i = 0; i < N; ++i) idx.push_back(2 * n_max + i);      // pressure
  return idx;
}

ProjectedStokes project_stokes(const StokesReducedSpace& space,
                               const StokesProblem& pb,
                               const BackgroundMesh& mesh, const TransportMap* map,
                               const Eigen::VectorXd& mu) {
  if (space.transported && map == nullptr)
    throw std::invalid_argument("project_stokes: transported space needs its map");

  ProjectedStokes out;
  out.n_max = space.N;
  out.active = classify(mesh, pb.flow_domain(), mu);
  const AssembledSystem sys = assemble_stokes(pb, out.active);
  const int n = out.active.n_dofs();
  const int nv = (int)mesh.vertices.size();

  auto transport2 = [&](const Eigen::VectorXd& m2) {
    return space.transported
               ? transport_compose_components(m2, 2, mesh, *map, mu,
                                              TransportDirection::inverse)
               : m2;
  };
  auto transport1 = [&](const Eigen::VectorXd& m1) {
    return space.transported
               ? transport_compose(m1, mesh, *map, mu, TransportDirection::inverse)
               : m1;
  };

  for (const auto& m : space.velocity_modes)
    out.velocity_modes_at_mu.push_back(transport2(m));
  for (const auto& m : space.pressure_modes)
    out.pressure_modes_at_mu.push_back(transport1(m));

  // block columns over [u1 | u2 | p] active DOFs
  std::vector<Eigen::VectorXd> cols;
  cols.reserve(3 * space.N);
  auto velocity_column = [&](const Eigen::VectorXd& m2) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(3 * n);
    for (int d = 0; d < n; ++d) {
      col[d] = m2[out.active.active_dofs[d]];
      col[n + d] = m2[nv + out.active.active_dofs[d]];
    }
    return col;
  };
  auto pressure_column = [&](const Eigen::VectorXd& m1) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(3 * n);
    for (int d = 0; d < n; ++d) col[2 * n + d] = m1[out.active.active_dofs[d]];
    return col;
  };
  for (const auto& m : out.velocity_modes_at_mu) cols.push_back(velocity_column(m));
  for (const auto& m : out.pressure_modes_at_mu) cols.push_back(pressure_column(m));

  Eigen::VectorXd b = sys.b;
  if (space.lift_velocity.size()) {
    out.lift_velocity_at_mu = transport2(space.lift_velocity);
    out.lift_pressure_at_mu = transport1(space.lift_pressure);
    const Eigen::VectorXd x_lift = velocity_column(out.lift_velocity_at_mu) +
                                   pressure_column(out.lift_pressure_at_mu);
    b -= sys.A * x_lift;
  }
  project_system(sys.A, b, cols, &out.reduced_A, &out.reduced_b, &out.column_norms);
  out.A = sys.A;
  out.b = std::move(b);
  out.columns = std::move(cols);
  return out;
}

RomSolution solve_projected_stokes(const ProjectedStokes& proj, int N) {
  if (N < 1 || N > proj.n_max)
    throw std::invalid_argument("solve_projected_stokes: N out of range");
  const std::vector<int> idx = stokes_block_indices(proj.n_max, N);
  const int k = (int)idx.size();

  Eigen::MatrixXd rA(k, k);
  Eigen::VectorXd rb(k);
  std::vector<double> norms(k);
  for (int i = 0; i < k; ++i) {
    rb[i] = proj.reduced_b[idx[i]];
    norms[i] = proj.column_norms[idx[i]];
    for (int j = 0; j < k; ++j) rA(i, j) = proj.reduced_A(idx[i], idx[j]);
  }
  RomSolution sol;
  try {
    sol.alpha = reduced_solve(rA, rb, norms, k);
  } catch (const SingularMatrixError&) {
    std::vector<const Eigen::VectorXd*> cols(k);
    for (int i = 0; i < k; ++i) cols[i] = &proj.columns[idx[i]];
    sol.alpha = span_least_squares(proj.A, proj.b, cols);
  }

  const int nv = (int)proj.active.mesh->vertices.size();
  Eigen::VectorXd u1 = Eigen::VectorXd::Zero(nv), u2 = Eigen::VectorXd::Zero(nv),
                  p = Eigen::VectorXd::Zero(nv);
  for (int i = 0; i < 2 * N; ++i) {
    const auto& m = proj.velocity_modes_at_mu[i < N ? i : proj.n_max + (i - N)];
    u1 += sol.alpha[i] * m.segment(0, nv);
    u2 += sol.alpha[i] * m.segment(nv, nv);
  }
  for (int i = 0; i < N; ++i)
    p += sol.alpha[2 * N + i] * proj.pressure_modes_at_mu[i];
  if (proj.lift_velocity_at_mu.size()) {
    u1 += proj.lift_velocity_at_mu.segment(0, nv);
    u2 += proj.lift_velocity_at_mu.segment(nv, nv);
    p += proj.lift_pressure_at_mu;
  }
  sol.fields = {u1, u2, p};
  return sol;
}

RomSolution online_solve_stokes(const StokesReducedSpace& space,
                                const StokesProblem& pb,
                                const BackgroundMesh& mesh, const TransportMap* map,
                                const Eigen::VectorXd& mu, int N) {
  if (!pb.obstacle.contains(mu))
    throw std::invalid_argument("online_solve_stokes: mu outside the parameter box");
  if (N < 1 || N > space.N)
    throw std::invalid_argument("online_solve_stokes: N out of range");
  return solve_projected_stokes(project_stokes(space, pb, mesh, map, mu), N);
}

double relative_error(const Eigen::VectorXd& hf, const Eigen::VectorXd& rom,
                      const ActiveMesh& am, int components) {
  const BackgroundMesh& mesh = *am.mesh;
  const int nv = (int)mesh.vertices.size();
  if (hf.size() != components * nv || rom.size() != components * nv)
    throw std::invalid_argument("relative_error: field length mismatch");

  double num = 0, den = 0;
  for (int cell : am.active_cells) {
    const P1Cell fe = P1Cell::from(mesh, cell);
    TriValues phi;
    for (int k = 0; k < 3; ++k) phi[k] = am.phi_vertex[fe.v[k]];
    const QuadratureRule rule =
        cut_bulk_rule({fe.p[0], fe.p[1], fe.p[2]}, phi, 2);
    for (size_t q = 0; q < rule.points.size(); ++q) {
      const auto lam = fe.shape_at(rule.points[q]);
      for (int c = 0; c < components; ++c) {
        double vh = 0, vr = 0;
        for (int k = 0; k < 3; ++k) {
          vh += lam[k] * hf[c * nv + fe.v[k]];
          vr += lam[k] * rom[c * nv + fe.v[k]];
        }
        num += rule.weights[q] * (vh - vr) * (vh - vr);
        den += rule.weights[q] * vh * vh;
      }
    }
  }
  if (den <= 0)
    throw std::invalid_argument("relative_error: reference field has zero norm");
  return std::sqrt(num / den);
}

}  // namespace cutrom
