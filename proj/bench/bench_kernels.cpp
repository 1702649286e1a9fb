// serial-vs-parallel timing for the three heavy kernels: system assembly,
// snapshot correlation, transport interpolation.  Also cross-checks that both
// paths produce bit-identical results.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "cutrom/darcy.hpp"
#include "cutrom/parallel.hpp"
#include "cutrom/pipeline.hpp"
#include "cutrom/pod.hpp"
#include "cutrom/rng.hpp"
#include "cutrom/snapshot.hpp"

using namespace cutrom;

namespace {

template <class F>
double best_ms(F&& fn, int reps) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool same) {
  std::printf("%-14s serial %8.2f ms   parallel %8.2f ms   speedup %5.2fx   %s\n",
              name, serial_ms, parallel_ms, serial_ms / parallel_ms,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  int workers = 0;
  if (argc > 1) workers = std::atoi(argv[1]);

  RunConfig cfg;
  cfg.mesh_h = 0.02;  // finer than the production runs so timings are stable
  DarcyCase c = make_darcy_case(cfg);
  // swap in a large embedded disk: the production ellipses cover only a few
  // cells, too small to exercise the assembly loop (radius chosen so no grid
  // vertex lies on the circle)
  c.problem.domain.phi = [](const Eigen::Vector2d& p, const Eigen::VectorXd&) {
    return p.squaredNorm() - 0.8137;
  };
  Eigen::VectorXd mu(4);
  mu << 1.2, 0.9, 0.3, -0.2;
  const ActiveMesh am = classify(c.mesh, c.problem.domain, mu);
  const int nv = (int)c.mesh.vertices.size();
  std::printf("mesh: %d vertices, %zu cells, %d active dofs, workers=%d\n", nv,
              c.mesh.cells.size(), am.n_dofs(), workers);

  // assembly
  set_worker_count(1);
  AssembledSystem ser;
  const double t_as = best_ms([&] { ser = assemble_serial(c.problem, am); }, 3);
  set_worker_count(workers);
  AssembledSystem par;
  const double t_ap = best_ms([&] { par = assemble(c.problem, am); }, 3);
  bool same = (ser.b == par.b) && (ser.A.nonZeros() == par.A.nonZeros());
  if (same)
    for (int k = 0; k < ser.A.nonZeros(); ++k)
      if (ser.A.valuePtr()[k] != par.A.valuePtr()[k]) { same = false; break; }
  report("assembly", t_as, t_ap, same);

  // correlation of synthetic snapshots
  Xoshiro256ss rng(7);
  SnapshotSet set;
  set.kind = FieldKind::scalar;
  set.components = 1;
  for (int i = 0; i < 150; ++i) {
    Eigen::VectorXd f(nv);
    for (int v = 0; v < nv; ++v) f[v] = rng.uniform(-1, 1);
    set.fields.push_back(std::move(f));
    set.parameters.push_back(mu);
  }
  const SpMat mass = background_mass_matrix(c.mesh);
  set_worker_count(1);
  Eigen::MatrixXd Cs;
  const double t_cs = best_ms([&] { Cs = correlation_serial(set, mass); }, 3);
  set_worker_count(workers);
  Eigen::MatrixXd Cp;
  const double t_cp = best_ms([&] { Cp = correlation(set, mass); }, 3);
  report("correlation", t_cs, t_cp, Cs == Cp);

  // transport interpolation
  Eigen::VectorXd field(nv);
  for (int v = 0; v < nv; ++v) field[v] = rng.uniform(-1, 1);
  set_worker_count(1);
  Eigen::VectorXd ts;
  const double t_ts = best_ms(
      [&] {
        ts = transport_compose_serial(field, c.mesh, c.map, mu,
                                      TransportDirection::forward);
      },
      3);
  set_worker_count(workers);
  Eigen::VectorXd tp;
  const double t_tp = best_ms(
      [&] {
        tp = transport_compose(field, c.mesh, c.map, mu,
                               TransportDirection::forward);
      },
      3);
  report("transport", t_ts, t_tp, ts == tp);
  return 0;
}
