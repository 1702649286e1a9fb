#include "cutrom/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <stdexcept>

#include "cutrom/csv.hpp"
#include "cutrom/errors.hpp"
#include "cutrom/parallel.hpp"

namespace fs = std::filesystem;

namespace cutrom {

namespace {

// parallel_for with exception transport (OpenMP bodies must not throw)
void parallel_try(int n, const std::function<void(int)>& body) {
  std::exception_ptr err;
  std::mutex guard;
  parallel_for(n, [&](int i) {
    try {
      body(i);
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!err) err = std::current_exception();
    }
  });
  if (err) std::rethrow_exception(err);
}

void write_eigenvalues_csv(const std::string& path, const Eigen::VectorXd& ev) {
  CsvWriter csv({"index", "lambda", "lambda_normalized"});
  const double l1 = ev.size() ? ev[0] : 0.0;
  for (int i = 0; i < ev.size(); ++i)
    csv.add_row({(double)i, ev[i], l1 > 0 ? ev[i] / l1 : 0.0});
  csv.write(path);
}

Eigen::VectorXd stack2(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Eigen::VectorXd out(a.size() + b.size());
  out << a, b;
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (case_name != "darcy-ellipse" && case_name != "stokes-cylinder")
    throw std::invalid_argument("unknown case: " + case_name);
  if (mesh_h < 0) throw std::invalid_argument("mesh size must be positive");
  if (m_train < 1) throw std::invalid_argument("training set must be non-empty");
  if (n_max < 1 || n_max > m_train)
    throw std::invalid_argument("n_max must lie in [1, m_train]");
  if (test_count < 1) throw std::invalid_argument("test set must be non-empty");
  if (gamma_D <= 0) throw std::invalid_argument("gamma_D must be positive");
  if (lifting && case_name == "darcy-ellipse")
    throw std::invalid_argument("lifting is only available for the saddle case");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config parse error in " + path + ": " + e.what());
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k == "case") cfg.case_name = it->get<std::string>();
    else if (k == "h") cfg.mesh_h = it->get<double>();
    else if (k == "train") cfg.m_train = it->get<int>();
    else if (k == "nmax") cfg.n_max = it->get<int>();
    else if (k == "test") cfg.test_count = it->get<int>();
    else if (k == "extension") cfg.extension = extension_from_string(it->get<std::string>());
    else if (k == "transport") cfg.transport = it->get<bool>();
    else if (k == "gamma_d") cfg.gamma_D = it->get<double>();
    else if (k == "gamma_n") cfg.gamma_N = it->get<double>();
    else if (k == "gamma_1") cfg.gamma_1 = it->get<double>();
    else if (k == "gamma_1u") cfg.gamma_1u = it->get<double>();
    else if (k == "gamma_1p") cfg.gamma_1p = it->get<double>();
    else if (k == "paper_faces") cfg.paper_faces = it->get<bool>();
    else if (k == "lifting") cfg.lifting = it->get<bool>();
    else if (k == "seed") cfg.seed = it->get<std::uint64_t>();
    else if (k == "workers") cfg.workers = it->get<int>();
    else if (k == "out") cfg.out_dir = it->get<std::string>();
    else throw std::invalid_argument("unknown config key: " + k);
  }
}

DarcyCase make_darcy_case(const RunConfig& cfg) {
  DarcyCase c;
  const double h = cfg.mesh_h > 0 ? cfg.mesh_h : 0.05;
  c.mesh = build_structured_mesh(-1.2, -1.2, 1.2, 1.2, h);
  c.problem.domain = ellipse_levelset(0.05);
  c.problem.g = [](const Eigen::Vector2d&, const Eigen::VectorXd&) { return 20.0; };
  c.problem.g_D = [](const Eigen::Vector2d& p, const Eigen::VectorXd&) {
    return 0.5 + p.x() * p.y();
  };
  c.problem.gamma_D = cfg.gamma_D;
  c.problem.gamma_N = cfg.gamma_N;
  c.problem.gamma_1 = cfg.gamma_1;
  c.map = ellipse_transport();
  return c;
}

StokesCase make_stokes_case(const RunConfig& cfg) {
  StokesCase c;
  const double h = cfg.mesh_h > 0 ? cfg.mesh_h : 0.035;
  c.mesh = build_structured_mesh(-2.0, -1.0, 2.0, 1.0, h);
  c.problem.obstacle = cylinder_levelset();
  c.problem.nu = 1.0;
  c.problem.gamma_D = cfg.gamma_D;
  c.problem.gamma_1u = cfg.gamma_1u;
  c.problem.gamma_1p = cfg.gamma_1p;
  c.problem.paper_faces = cfg.paper_faces;
  c.problem.inlet = Eigen::Vector2d(1.0, 0.0);
  c.map = cylinder_transport();
  return c;
}

std::vector<Eigen::VectorXd> sample_parameters(const BackgroundMesh& mesh,
                                               const LevelSetDomain& domain,
                                               int count, Xoshiro256ss& rng) {
  const int dim = (int)domain.parameter_box.size();
  std::vector<Eigen::VectorXd> out;
  out.reserve(count);
  long attempts = 0;
  const long cap = 1000 + 100L * count;
  while ((int)out.size() < count) {
    if (++attempts > cap)
      throw std::runtime_error("sample_parameters: too many empty-domain draws");
    Eigen::VectorXd mu(dim);
    for (int d = 0; d < dim; ++d) {
      const auto& [lo, hi] = domain.parameter_box[d];
      mu[d] = rng.uniform(lo, hi);
    }
    try {
      classify(mesh, domain, mu);  // reject draws with no active cell
    } catch (const EmptyDomainError&) {
      continue;
    }
    out.push_back(std::move(mu));
  }
  return out;
}

std::uint64_t test_seed(std::uint64_t seed) {
  std::uint64_t s = seed ^ 0x9E3779B97F4A7C15ULL;
  return splitmix64(s);
}

DarcyTraining darcy_solve_training(const DarcyCase& c,
                                   const std::vector<Eigen::VectorXd>& params) {
  DarcyTraining tr;
  tr.parameters = params;
  const int M = (int)params.size();
  tr.active.resize(M);
  tr.hf.resize(M);
  parallel_try(M, [&](int i) {
    tr.active[i] = classify(c.mesh, c.problem.domain, params[i]);
    tr.hf[i] = solve(c.problem, tr.active[i]);
  });
  return tr;
}

SnapshotSet darcy_build_set(const DarcyCase& c, const DarcyTraining& tr,
                            ExtensionMode mode, bool transport) {
  SnapshotSet set;
  set.kind = FieldKind::scalar;
  set.components = 1;
  set.parameters = tr.parameters;
  set.extension_mode = mode;
  set.transported = transport;
  if (transport) set.transport_reference = c.map.reference_parameter;
  const int M = (int)tr.hf.size();
  set.fields.resize(M);
  parallel_try(M, [&](int i) {
    Eigen::VectorXd f = extend(tr.hf[i], tr.active[i], mode, c.problem.domain);
    if (transport)
      f = transport_compose_serial(f, c.mesh, c.map, tr.parameters[i],
                                   TransportDirection::forward);
    set.fields[i] = std::move(f);
  });
  return set;
}

std::vector<int> error_grid(int n_max) {
  std::vector<int> grid;
  grid.push_back(1);
  for (int n = 5; n < n_max; n += 5) grid.push_back(n);
  if (n_max > 1) grid.push_back(n_max);
  return grid;
}

ErrorCurve darcy_error_curve(const DarcyCase& c, const ReducedBasis& basis,
                             const std::vector<Eigen::VectorXd>& test_params,
                             const std::vector<int>& grid) {
  const int T = (int)test_params.size(), G = (int)grid.size();
  Eigen::MatrixXd errs(T, G);
  parallel_try(T, [&](int t) {
    const ProjectedDarcy proj = project_darcy(basis, c.problem, c.mesh,
                                              basis.transported ? &c.map : nullptr,
                                              test_params[t]);
    const Eigen::VectorXd hf =
        proj.active.embed(solve(c.problem, proj.active));
    for (int g = 0; g < G; ++g) {
      const RomSolution sol = solve_projected_darcy(proj, grid[g]);
      errs(t, g) = relative_error(hf, sol.fields[0], proj.active);
    }
  });
  ErrorCurve curve;
  curve.N = grid;
  for (int g = 0; g < G; ++g) curve.scalar_err.push_back(errs.col(g).mean());
  return curve;
}

StokesTraining stokes_solve_training(const StokesCase& c,
                                     const std::vector<Eigen::VectorXd>& params) {
  StokesTraining tr;
  tr.parameters = params;
  const int M = (int)params.size();
  tr.active.resize(M);
  tr.hf.resize(M);
  tr.supremizer.resize(M);
  parallel_try(M, [&](int i) {
    tr.active[i] = classify(c.mesh, c.problem.flow_domain(), params[i]);
    tr.hf[i] = solve_stokes(c.problem, tr.active[i]);
    tr.supremizer[i] = solve_supremizer(tr.hf[i].p, c.problem, tr.active[i]);
  });
  return tr;
}

StokesSets stokes_build_sets(const StokesCase& c, const StokesTraining& tr,
                             ExtensionMode mode, bool transport) {
  const LevelSetDomain flow = c.problem.flow_domain();
  const int M = (int)tr.hf.size();
  StokesSets out;
  for (SnapshotSet* set : {&out.velocity, &out.pressure, &out.supremizer}) {
    set->parameters = tr.parameters;
    set->extension_mode = mode;
    set->transported = transport;
    if (transport) set->transport_reference = c.map.reference_parameter;
    set->fields.resize(M);
  }
  out.velocity.kind = FieldKind::velocity;
  out.velocity.components = 2;
  out.pressure.kind = FieldKind::pressure;
  out.pressure.components = 1;
  out.supremizer.kind = FieldKind::supremizer;
  out.supremizer.components = 2;

  parallel_try(M, [&](int i) {
    const ActiveMesh& am = tr.active[i];
    Eigen::VectorXd u = stack2(extend(tr.hf[i].u1, am, mode, flow),
                               extend(tr.hf[i].u2, am, mode, flow));
    Eigen::VectorXd p = extend(tr.hf[i].p, am, mode, flow);
    Eigen::VectorXd s = stack2(extend(tr.supremizer[i].first, am, mode, flow),
                               extend(tr.supremizer[i].second, am, mode, flow));
    if (transport) {
      const Eigen::VectorXd& mu = tr.parameters[i];
      u = transport_compose_components(u, 2, c.mesh, c.map, mu,
                                       TransportDirection::forward);
      p = transport_compose_serial(p, c.mesh, c.map, mu,
                                   TransportDirection::forward);
      s = transport_compose_components(s, 2, c.mesh, c.map, mu,
                                       TransportDirection::forward);
    }
    out.velocity.fields[i] = std::move(u);
    out.pressure.fields[i] = std::move(p);
    out.supremizer.fields[i] = std::move(s);
  });
  return out;
}

void stokes_lift_fields(const StokesCase& c, ExtensionMode mode,
                        Eigen::VectorXd* lift_velocity,
                        Eigen::VectorXd* lift_pressure) {
  const LevelSetDomain flow = c.problem.flow_domain();
  const ActiveMesh am = classify(c.mesh, flow, c.map.reference_parameter);
  const StokesField ref = solve_stokes(c.problem, am);
  *lift_velocity = stack2(extend(ref.u1, am, mode, flow),
                          extend(ref.u2, am, mode, flow));
  *lift_pressure = extend(ref.p, am, mode, flow);
}

StokesReducedSpace stokes_build_space(const StokesCase& c, const StokesSets& sets,
                                      int N, bool lifting, ExtensionMode mode) {
  StokesSets work = sets;
  Eigen::VectorXd lift_v, lift_p;
  if (lifting) {
    stokes_lift_fields(c, mode, &lift_v, &lift_p);
    for (auto& f : work.velocity.fields) f -= lift_v;
    for (auto& f : work.pressure.fields) f -= lift_p;
  }
  const SpMat mass = background_mass_matrix(c.mesh);
  const ReducedBasis vel = compress(work.velocity, N, mass);
  const ReducedBasis sup = compress(work.supremizer, N, mass);
  const ReducedBasis pr = compress(work.pressure, N, mass);
  const int n = std::min({N, vel.size(), sup.size(), pr.size()});
  StokesReducedSpace space = build_stokes_spaces(vel, sup, pr, n);
  if (lifting) {
    space.lift_velocity = std::move(lift_v);
    space.lift_pressure = std::move(lift_p);
  }
  return space;
}

ErrorCurve stokes_error_curve(const StokesCase& c, const StokesReducedSpace& space,
                              const std::vector<Eigen::VectorXd>& test_params,
                              const std::vector<int>& grid) {
  const int T = (int)test_params.size(), G = (int)grid.size();
  Eigen::MatrixXd verrs(T, G), perrs(T, G);
  parallel_try(T, [&](int t) {
    const ProjectedStokes proj =
        project_stokes(space, c.problem, c.mesh,
                       space.transported ? &c.map : nullptr, test_params[t]);
    const StokesField hf = solve_stokes(c.problem, proj.active);
    const Eigen::VectorXd hf_vel =
        stack2(proj.active.embed(hf.u1), proj.active.embed(hf.u2));
    const Eigen::VectorXd hf_p = proj.active.embed(hf.p);
    for (int g = 0; g < G; ++g) {
      const RomSolution sol = solve_projected_stokes(proj, grid[g]);
      verrs(t, g) = relative_error(hf_vel, stack2(sol.fields[0], sol.fields[1]),
                                   proj.active, 2);
      perrs(t, g) = relative_error(hf_p, sol.fields[2], proj.active);
    }
  });
  ErrorCurve curve;
  curve.N = grid;
  for (int g = 0; g < G; ++g) {
    curve.velocity_err.push_back(verrs.col(g).mean());
    curve.pressure_err.push_back(perrs.col(g).mean());
  }
  return curve;
}

void run_offline(const RunConfig& cfg) {
  cfg.validate();
  set_worker_count(cfg.workers);
  fs::create_directories(cfg.out_dir);
  Xoshiro256ss rng(cfg.seed);

  if (cfg.case_name == "darcy-ellipse") {
    const DarcyCase c = make_darcy_case(cfg);
    const auto params =
        sample_parameters(c.mesh, c.problem.domain, cfg.m_train, rng);
    const DarcyTraining tr = darcy_solve_training(c, params);
    const SnapshotSet set = darcy_build_set(c, tr, cfg.extension, cfg.transport);
    save(set, cfg.out_dir + "/snapshots_scalar");
    const SpMat mass = background_mass_matrix(c.mesh);
    const ReducedBasis basis = compress(set, cfg.n_max, mass);
    save_basis(basis, cfg.out_dir + "/basis_scalar");
    write_eigenvalues_csv(cfg.out_dir + "/eigenvalues.csv", basis.eigenvalues);
    return;
  }

  const StokesCase c = make_stokes_case(cfg);
  const auto params =
      sample_parameters(c.mesh, c.problem.flow_domain(), cfg.m_train, rng);
  const StokesTraining tr = stokes_solve_training(c, params);
  StokesSets sets = stokes_build_sets(c, tr, cfg.extension, cfg.transport);
  if (cfg.lifting) {
    Eigen::VectorXd lift_v, lift_p;
    stokes_lift_fields(c, cfg.extension, &lift_v, &lift_p);
    for (auto& f : sets.velocity.fields) f -= lift_v;
    for (auto& f : sets.pressure.fields) f -= lift_p;
    SnapshotSet lv, lp;
    lv.kind = FieldKind::velocity;
    lv.components = 2;
    lv.fields = {lift_v};
    lv.parameters = {c.map.reference_parameter};
    lv.extension_mode = cfg.extension;
    lp = lv;
    lp.kind = FieldKind::pressure;
    lp.components = 1;
    lp.fields = {lift_p};
    save(lv, cfg.out_dir + "/lift_velocity");
    save(lp, cfg.out_dir + "/lift_pressure");
  }
  save(sets.velocity, cfg.out_dir + "/snapshots_velocity");
  save(sets.pressure, cfg.out_dir + "/snapshots_pressure");
  save(sets.supremizer, cfg.out_dir + "/snapshots_supremizer");
  const SpMat mass = background_mass_matrix(c.mesh);
  const ReducedBasis vel = compress(sets.velocity, cfg.n_max, mass);
  const ReducedBasis sup = compress(sets.supremizer, cfg.n_max, mass);
  const ReducedBasis pr = compress(sets.pressure, cfg.n_max, mass);
  save_basis(vel, cfg.out_dir + "/basis_velocity");
  save_basis(sup, cfg.out_dir + "/basis_supremizer");
  save_basis(pr, cfg.out_dir + "/basis_pressure");
  write_eigenvalues_csv(cfg.out_dir + "/eigenvalues_velocity.csv", vel.eigenvalues);
  write_eigenvalues_csv(cfg.out_dir + "/eigenvalues_supremizer.csv", sup.eigenvalues);
  write_eigenvalues_csv(cfg.out_dir + "/eigenvalues_pressure.csv", pr.eigenvalues);
}

namespace {

StokesReducedSpace load_stokes_space(const RunConfig& cfg, int* n_space) {
  const ReducedBasis vel = load_basis(cfg.out_dir + "/basis_velocity");
  const ReducedBasis sup = load_basis(cfg.out_dir + "/basis_supremizer");
  const ReducedBasis pr = load_basis(cfg.out_dir + "/basis_pressure");
  const int n = std::min({cfg.n_max, vel.size(), sup.size(), pr.size()});
  StokesReducedSpace space = build_stokes_spaces(vel, sup, pr, n);
  if (cfg.lifting) {
    space.lift_velocity = load(cfg.out_dir + "/lift_velocity").fields.at(0);
    space.lift_pressure = load(cfg.out_dir + "/lift_pressure").fields.at(0);
  }
  if (n_space) *n_space = n;
  return space;
}

}  // namespace

void run_errors(const RunConfig& cfg) {
  cfg.validate();
  set_worker_count(cfg.workers);
  fs::create_directories(cfg.out_dir);
  Xoshiro256ss rng(test_seed(cfg.seed));

  if (cfg.case_name == "darcy-ellipse") {
    const DarcyCase c = make_darcy_case(cfg);
    const ReducedBasis basis = load_basis(cfg.out_dir + "/basis_scalar");
    const auto test_params =
        sample_parameters(c.mesh, c.problem.domain, cfg.test_count, rng);
    const auto grid = error_grid(std::min(cfg.n_max, basis.size()));
    const ErrorCurve curve = darcy_error_curve(c, basis, test_params, grid);
    CsvWriter csv({"N", "mean_rel_err"});
    for (size_t i = 0; i < curve.N.size(); ++i)
      csv.add_row({(double)curve.N[i], curve.scalar_err[i]});
    csv.write(cfg.out_dir + "/errors.csv");
    return;
  }

  const StokesCase c = make_stokes_case(cfg);
  int n_space = 0;
  const StokesReducedSpace space = load_stokes_space(cfg, &n_space);
  const auto test_params =
      sample_parameters(c.mesh, c.problem.flow_domain(), cfg.test_count, rng);
  const auto grid = error_grid(n_space);
  const ErrorCurve curve = stokes_error_curve(c, space, test_params, grid);
  CsvWriter csv({"N", "mean_rel_err_velocity", "mean_rel_err_pressure"});
  for (size_t i = 0; i < curve.N.size(); ++i)
    csv.add_row({(double)curve.N[i], curve.velocity_err[i], curve.pressure_err[i]});
  csv.write(cfg.out_dir + "/errors.csv");
}

void run_online(const RunConfig& cfg, const Eigen::VectorXd& mu) {
  cfg.validate();
  set_worker_count(cfg.workers);
  fs::create_directories(cfg.out_dir);

  if (cfg.case_name == "darcy-ellipse") {
    const DarcyCase c = make_darcy_case(cfg);
    if (!c.problem.domain.contains(mu))
      throw std::out_of_range("parameter outside the admissible box");
    const ReducedBasis basis = load_basis(cfg.out_dir + "/basis_scalar");
    const int N = std::min(cfg.n_max, basis.size());
    const RomSolution sol = online_solve_darcy(
        basis, c.problem, c.mesh, basis.transported ? &c.map : nullptr, mu, N);
    CsvWriter csv({"x", "y", "scalar"});
    for (size_t v = 0; v < c.mesh.vertices.size(); ++v)
      csv.add_row({c.mesh.vertices[v].x(), c.mesh.vertices[v].y(),
                   sol.fields[0][v]});
    csv.write(cfg.out_dir + "/solution.csv");
    CsvWriter acsv({"index", "alpha"});
    for (int i = 0; i < sol.alpha.size(); ++i) acsv.add_row({(double)i, sol.alpha[i]});
    acsv.write(cfg.out_dir + "/alpha.csv");
    return;
  }

  const StokesCase c = make_stokes_case(cfg);
  if (!c.problem.obstacle.contains(mu))
    throw std::out_of_range("parameter outside the admissible box");
  int n_space = 0;
  const StokesReducedSpace space = load_stokes_space(cfg, &n_space);
  const RomSolution sol = online_solve_stokes(
      space, c.problem, c.mesh, space.transported ? &c.map : nullptr, mu, n_space);
  CsvWriter csv({"x", "y", "u1", "u2", "p"});
  for (size_t v = 0; v < c.mesh.vertices.size(); ++v)
    csv.add_row({c.mesh.vertices[v].x(), c.mesh.vertices[v].y(), sol.fields[0][v],
                 sol.fields[1][v], sol.fields[2][v]});
  csv.write(cfg.out_dir + "/solution.csv");
  CsvWriter acsv({"index", "alpha"});
  for (int i = 0; i < sol.alpha.size(); ++i) acsv.add_row({(double)i, sol.alpha[i]});
  acsv.write(cfg.out_dir + "/alpha.csv");
}

void run_hf_solve(const RunConfig& cfg, const Eigen::VectorXd& mu) {
  cfg.validate();
  set_worker_count(cfg.workers);
  fs::create_directories(cfg.out_dir);

  if (cfg.case_name == "darcy-ellipse") {
    const DarcyCase c = make_darcy_case(cfg);
    if (!c.problem.domain.contains(mu))
      throw std::out_of_range("parameter outside the admissible box");
    const ActiveMesh am = classify(c.mesh, c.problem.domain, mu);
    const Eigen::VectorXd u = am.embed(solve(c.problem, am));
    CsvWriter csv({"x", "y", "scalar"});
    for (size_t v = 0; v < c.mesh.vertices.size(); ++v)
      csv.add_row({c.mesh.vertices[v].x(), c.mesh.vertices[v].y(), u[v]});
    csv.write(cfg.out_dir + "/solution.csv");
    return;
  }

  const StokesCase c = make_stokes_case(cfg);
  if (!c.problem.obstacle.contains(mu))
    throw std::out_of_range("parameter outside the admissible box");
  const ActiveMesh am = classify(c.mesh, c.problem.flow_domain(), mu);
  const StokesField f = solve_stokes(c.problem, am);
  const Eigen::VectorXd u1 = am.embed(f.u1), u2 = am.embed(f.u2),
                        p = am.embed(f.p);
  CsvWriter csv({"x", "y", "u1", "u2", "p"});
  for (size_t v = 0; v < c.mesh.vertices.size(); ++v)
    csv.add_row({c.mesh.vertices[v].x(), c.mesh.vertices[v].y(), u1[v], u2[v],
                 p[v]});
  csv.write(cfg.out_dir + "/solution.csv");
}

void run_gamma_sweep(const RunConfig& cfg, const std::vector<double>& gammas) {
  cfg.validate();
  if (cfg.case_name != "darcy-ellipse")
    throw std::invalid_argument("gamma-sweep supports the scalar case only");
  if (gammas.empty()) throw std::invalid_argument("gamma-sweep needs values");
  set_worker_count(cfg.workers);
  fs::create_directories(cfg.out_dir);

  // identical parameter draws for every gamma: the sweep isolates the penalty
  Xoshiro256ss train_rng(cfg.seed);
  Xoshiro256ss test_rng(test_seed(cfg.seed));
  const DarcyCase probe = make_darcy_case(cfg);
  const auto train_params =
      sample_parameters(probe.mesh, probe.problem.domain, cfg.m_train, train_rng);
  const auto test_params =
      sample_parameters(probe.mesh, probe.problem.domain, cfg.test_count, test_rng);

  CsvWriter csv({"gamma_d", "N", "mean_rel_err"});
  for (double gamma : gammas) {
    RunConfig gcfg = cfg;
    gcfg.gamma_D = gamma;
    const DarcyCase c = make_darcy_case(gcfg);
    const DarcyTraining tr = darcy_solve_training(c, train_params);
    const SnapshotSet set = darcy_build_set(c, tr, cfg.extension, cfg.transport);
    const SpMat mass = background_mass_matrix(c.mesh);
    const ReducedBasis basis = compress(set, cfg.n_max, mass);
    const int N = std::min(cfg.n_max, basis.size());
    const ErrorCurve curve = darcy_error_curve(c, basis, test_params, {N});
    csv.add_row({gamma, (double)N, curve.scalar_err[0]});
  }
  csv.write(cfg.out_dir + "/gamma_sweep.csv");
}

void run_eigs_export(const RunConfig& cfg, const std::string& basis_dir) {
  fs::create_directories(cfg.out_dir);
  const ReducedBasis basis = load_basis(basis_dir);
  write_eigenvalues_csv(cfg.out_dir + "/eigenvalues.csv", basis.eigenvalues);
}

}  // namespace cutrom
