#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cutrom/errors.hpp"
#include "cutrom/pipeline.hpp"
#include "cutrom/pod.hpp"
#include "cutrom/rng.hpp"
#include "cutrom/snapshot.hpp"

using namespace cutrom;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cutrom_pipe_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// parsed CSV: header + numeric rows
struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
Csv read_csv(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  Csv out;
  std::string line;
  REQUIRE(std::getline(in, line));
  std::istringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) out.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream rs(line);
    std::vector<double> row;
    for (std::string cell; std::getline(rs, cell, ',');)
      row.push_back(std::stod(cell));
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::vector<fs::path> tree_files(const fs::path& root) {
  std::vector<fs::path> rel;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) rel.push_back(fs::relative(e.path(), root));
  std::sort(rel.begin(), rel.end());
  return rel;
}

RunConfig tiny_darcy_cfg(const fs::path& out) {
  RunConfig cfg;
  cfg.m_train = 4;
  cfg.n_max = 2;
  cfg.test_count = 3;
  cfg.seed = 7;
  cfg.out_dir = out.string();
  return cfg;
}

}  // namespace

TEST_CASE("the error grid runs 1,5,10,... and always ends at the cap") {
  CHECK(error_grid(1) == std::vector<int>{1});
  CHECK(error_grid(5) == std::vector<int>{1, 5});
  CHECK(error_grid(7) == std::vector<int>{1, 5, 7});
  const std::vector<int> g = error_grid(140);
  REQUIRE(g.size() == 29);
  CHECK(g.front() == 1);
  CHECK(g[1] == 5);
  CHECK(g[2] == 10);
  CHECK(g[g.size() - 2] == 135);
  CHECK(g.back() == 140);
}

TEST_CASE("config validation rejects inconsistent settings") {
  RunConfig ok;
  ok.validate();  // defaults are valid

  RunConfig c = ok;
  c.case_name = "heat-sphere";
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.mesh_h = -0.1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.m_train = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.n_max = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.n_max = c.m_train + 1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.test_count = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.gamma_D = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = ok;
  c.lifting = true;  // scalar case has no inlet data to lift
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.case_name = "stokes-cylinder";
  c.validate();
}

TEST_CASE("config files override defaults and reject junk") {
  const fs::path dir = fresh_dir("config");
  const fs::path good = dir / "good.json";
  std::ofstream(good) << R"({"case":"stokes-cylinder","h":0.2,"train":7,
      "nmax":3,"test":4,"extension":"harmonic","transport":true,
      "gamma_d":12.5,"gamma_1p":0.05,"paper_faces":true,"seed":99,
      "workers":2,"out":"elsewhere"})";
  RunConfig cfg;
  apply_config_file(cfg, good.string());
  CHECK(cfg.case_name == "stokes-cylinder");
  CHECK(cfg.mesh_h == 0.2);
  CHECK(cfg.m_train == 7);
  CHECK(cfg.n_max == 3);
  CHECK(cfg.test_count == 4);
  CHECK(cfg.extension == ExtensionMode::harmonic);
  CHECK(cfg.transport);
  CHECK(cfg.gamma_D == 12.5);
  CHECK(cfg.gamma_1p == 0.05);
  CHECK(cfg.paper_faces);
  CHECK(cfg.seed == 99);
  CHECK(cfg.workers == 2);
  CHECK(cfg.out_dir == "elsewhere");
  CHECK(cfg.gamma_N == 0.0);  // untouched keys keep defaults

  const fs::path unknown = dir / "unknown.json";
  std::ofstream(unknown) << R"({"trian":4})";
  RunConfig c2;
  CHECK_THROWS_WITH_AS(apply_config_file(c2, unknown.string()),
                       doctest::Contains("unknown config key"),
                       std::invalid_argument);

  const fs::path broken = dir / "broken.json";
  std::ofstream(broken) << "{not json";
  CHECK_THROWS_AS(apply_config_file(c2, broken.string()), std::invalid_argument);
  CHECK_THROWS_AS(apply_config_file(c2, (dir / "absent.json").string()), IoError);
}

TEST_CASE("parameter sampling is seeded, in-box, and admissible") {
  RunConfig cfg;
  cfg.mesh_h = 0.1;
  const DarcyCase c = make_darcy_case(cfg);

  Xoshiro256ss r1(42), r2(42), r3(43);
  const auto a = sample_parameters(c.mesh, c.problem.domain, 10, r1);
  const auto b = sample_parameters(c.mesh, c.problem.domain, 10, r2);
  const auto d = sample_parameters(c.mesh, c.problem.domain, 10, r3);
  REQUIRE(a.size() == 10);
  bool same = true, other = false;
  for (int i = 0; i < 10; ++i) {
    same = same && a[i] == b[i];
    other = other || a[i] != d[i];
  }
  CHECK(same);
  CHECK(other);

  for (const auto& mu : a) {
    REQUIRE(mu.size() == (int)c.problem.domain.parameter_box.size());
    for (int k = 0; k < mu.size(); ++k) {
      const auto& [lo, hi] = c.problem.domain.parameter_box[k];
      CHECK(mu[k] >= lo);
      CHECK(mu[k] <= hi);
    }
    CHECK_NOTHROW(classify(c.mesh, c.problem.domain, mu));  // admissible draw
  }

  // shorter requests are prefixes of longer ones from the same seed
  Xoshiro256ss r4(42);
  const auto head = sample_parameters(c.mesh, c.problem.domain, 4, r4);
  for (int i = 0; i < 4; ++i) CHECK(head[i] == a[i]);
}

TEST_CASE("the test stream is decorrelated from the training stream") {
  CHECK(test_seed(42) != 42);
  CHECK(test_seed(42) != test_seed(43));
  RunConfig cfg;
  cfg.mesh_h = 0.1;
  const DarcyCase c = make_darcy_case(cfg);
  Xoshiro256ss train(cfg.seed), test(test_seed(cfg.seed));
  const auto a = sample_parameters(c.mesh, c.problem.domain, 5, train);
  const auto b = sample_parameters(c.mesh, c.problem.domain, 5, test);
  bool differ = false;
  for (int i = 0; i < 5; ++i) differ = differ || a[i] != b[i];
  CHECK(differ);
}

TEST_CASE("case factories carry the advertised defaults") {
  RunConfig cfg;
  const DarcyCase dc = make_darcy_case(cfg);
  CHECK(dc.mesh.vertices.size() == 2401);
  CHECK(dc.problem.gamma_D == 10.0);
  CHECK(dc.map.reference_parameter.size() == 4);

  cfg.case_name = "stokes-cylinder";
  const StokesCase sc = make_stokes_case(cfg);
  CHECK(sc.mesh.vertices.size() == 116 * 59);  // ceil(4/0.035) x ceil(2/0.035)
  CHECK(sc.problem.inlet == Eigen::Vector2d(1.0, 0.0));
  CHECK(sc.map.reference_parameter.size() == 1);
}

TEST_CASE("offline runs are deterministic byte for byte") {
  const fs::path a = fresh_dir("offline_a"), b = fresh_dir("offline_b");
  run_offline(tiny_darcy_cfg(a));
  run_offline(tiny_darcy_cfg(b));

  int snaps = 0;
  for (const auto& e : fs::directory_iterator(a / "snapshots_scalar"))
    if (e.path().extension() == ".f64") ++snaps;
  CHECK(snaps == 4);
  CHECK(load_basis((a / "basis_scalar").string()).size() <= 2);

  const auto fa = tree_files(a), fb = tree_files(b);
  REQUIRE(fa == fb);
  REQUIRE(!fa.empty());
  for (const auto& rel : fa) CHECK(slurp(a / rel) == slurp(b / rel));
}

TEST_CASE("exported eigenvalues are normalized from 1.0 downward") {
  const fs::path a = fresh_dir("offline_eigs");
  run_offline(tiny_darcy_cfg(a));
  const Csv csv = read_csv(a / "eigenvalues.csv");
  REQUIRE(csv.header == std::vector<std::string>{"index", "lambda",
                                                "lambda_normalized"});
  REQUIRE(!csv.rows.empty());
  CHECK(csv.rows[0][2] == 1.0);
  for (size_t i = 1; i < csv.rows.size(); ++i) {
    CHECK(csv.rows[i][2] <= csv.rows[i - 1][2]);
    CHECK(std::isfinite(csv.rows[i][1]));
  }

  // re-export from the persisted basis reproduces the file exactly
  const fs::path d = fresh_dir("eigs_export");
  RunConfig cfg = tiny_darcy_cfg(d);
  run_eigs_export(cfg, (a / "basis_scalar").string());
  CHECK(slurp(d / "eigenvalues.csv") == slurp(a / "eigenvalues.csv"));
}

TEST_CASE("the saddle offline stage persists three snapshot families") {
  const fs::path out = fresh_dir("offline_stokes");
  RunConfig cfg;
  cfg.case_name = "stokes-cylinder";
  cfg.mesh_h = 0.2;
  cfg.m_train = 2;
  cfg.n_max = 2;
  cfg.seed = 5;
  cfg.out_dir = out.string();
  run_offline(cfg);

  for (const char* name : {"velocity", "pressure", "supremizer"}) {
    const SnapshotSet set = load((out / (std::string("snapshots_") + name)).string());
    CHECK(set.size() == 2);
    CHECK(fs::exists(out / (std::string("basis_") + name) / "manifest.json"));
    CHECK(fs::exists(out / (std::string("eigenvalues_") + name + ".csv")));
  }
  CHECK(load((out / "snapshots_velocity").string()).components == 2);
  CHECK(load((out / "snapshots_pressure").string()).components == 1);
}

TEST_CASE("error analysis writes a finite, nonnegative curve deterministically") {
  const fs::path out = fresh_dir("errors_run");
  const RunConfig cfg = tiny_darcy_cfg(out);
  run_offline(cfg);
  run_errors(cfg);
  const std::string first = slurp(out / "errors.csv");
  const Csv csv = read_csv(out / "errors.csv");
  REQUIRE(csv.header == std::vector<std::string>{"N", "mean_rel_err"});
  REQUIRE(!csv.rows.empty());
  CHECK(csv.rows[0][0] == 1);
  for (const auto& row : csv.rows) {
    CHECK(std::isfinite(row[1]));
    CHECK(row[1] >= 0);
  }
  run_errors(cfg);
  CHECK(slurp(out / "errors.csv") == first);
}

TEST_CASE("querying the training set with the full basis reconstructs it") {
  RunConfig cfg;
  cfg.m_train = 8;
  cfg.n_max = 8;
  const DarcyCase c = make_darcy_case(cfg);
  Xoshiro256ss rng(cfg.seed);
  const auto params =
      sample_parameters(c.mesh, c.problem.domain, cfg.m_train, rng);
  const DarcyTraining tr = darcy_solve_training(c, params);
  const SnapshotSet set = darcy_build_set(c, tr, ExtensionMode::natural, false);
  const SpMat mass = background_mass_matrix(c.mesh);
  const ReducedBasis basis = compress(set, cfg.n_max, mass);

  const ErrorCurve curve = darcy_error_curve(c, basis, params, {basis.size()});
  INFO("training-set error " << curve.scalar_err[0] << " at N=" << basis.size());
  CHECK(curve.scalar_err[0] <= 1e-5);
}

TEST_CASE("online queries emit finite fields and respect the parameter box") {
  const fs::path out = fresh_dir("online_run");
  const RunConfig cfg = tiny_darcy_cfg(out);
  run_offline(cfg);

  Eigen::VectorXd mu(4);
  mu << 1.3222, 1.7666, 0.2514, 0.7365;
  run_online(cfg, mu);
  const Csv sol = read_csv(out / "solution.csv");
  REQUIRE(sol.header == std::vector<std::string>{"x", "y", "scalar"});
  CHECK(sol.rows.size() == 2401);
  for (const auto& row : sol.rows) CHECK(std::isfinite(row[2]));
  const Csv alpha = read_csv(out / "alpha.csv");
  REQUIRE(alpha.header == std::vector<std::string>{"index", "alpha"});
  for (const auto& row : alpha.rows) CHECK(std::isfinite(row[1]));

  Eigen::VectorXd bad(4);
  bad << 5.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(run_online(cfg, bad), std::out_of_range);
  CHECK_THROWS_AS(run_hf_solve(cfg, bad), std::out_of_range);
}

TEST_CASE("the debugging high-fidelity solve writes the nodal field") {
  const fs::path out = fresh_dir("hf_run");
  RunConfig cfg = tiny_darcy_cfg(out);
  cfg.mesh_h = 0.1;
  Eigen::VectorXd mu(4);
  mu << 1.0, 1.0, 0.0, 0.0;
  run_hf_solve(cfg, mu);
  const Csv sol = read_csv(out / "solution.csv");
  REQUIRE(sol.header == std::vector<std::string>{"x", "y", "scalar"});
  double maxv = 0;
  for (const auto& row : sol.rows) {
    REQUIRE(std::isfinite(row[2]));
    maxv = std::max(maxv, std::abs(row[2]));
  }
  CHECK(maxv > 0);
}

TEST_CASE("a single-value penalty sweep degenerates to one error analysis") {
  const fs::path out = fresh_dir("gamma_run");
  RunConfig cfg = tiny_darcy_cfg(out);
  cfg.test_count = 2;
  run_gamma_sweep(cfg, {10.0});
  const Csv csv = read_csv(out / "gamma_sweep.csv");
  REQUIRE(csv.header ==
          std::vector<std::string>{"gamma_d", "N", "mean_rel_err"});
  REQUIRE(csv.rows.size() == 1);
  CHECK(csv.rows[0][0] == 10.0);
  CHECK(std::isfinite(csv.rows[0][2]));

  CHECK_THROWS_AS(run_gamma_sweep(cfg, {}), std::invalid_argument);
  RunConfig scfg = cfg;
  scfg.case_name = "stokes-cylinder";
  CHECK_THROWS_AS(run_gamma_sweep(scfg, {10.0}), std::invalid_argument);
}
