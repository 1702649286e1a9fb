#include <CLI11.hpp>
#include <Eigen/Dense>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "cutrom/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::string case_name, extension, out;
  double h = 0, gamma_d = 0, gamma_n = 0, gamma_1 = 0, gamma_1u = 0, gamma_1p = 0;
  int train = 0, test = 0, nmax = 0, workers = 0;
  std::uint64_t seed = 0;
  bool transport = false, paper_faces = false, lifting = false;
  std::vector<double> mu;
  std::vector<double> gammas;
  std::string basis_dir;
};

// shared options; config file first, explicit flags override it
void add_common(CLI::App* cmd, Flags& f) {
  cmd->set_help_flag("--help", "print help");  // frees -h for mesh size
  cmd->add_option("--config", f.config, "JSON config file");
  cmd->add_option("--case", f.case_name, "darcy-ellipse | stokes-cylinder");
  cmd->add_option("--h", f.h, "background mesh size");
  cmd->add_option("--train", f.train, "training snapshots");
  cmd->add_option("--test", f.test, "test parameters");
  cmd->add_option("--nmax", f.nmax, "largest reduced dimension");
  cmd->add_option("--extension", f.extension, "zero | natural | harmonic");
  cmd->add_flag("--transport", f.transport, "map snapshots to the reference domain");
  cmd->add_option("--gamma-d", f.gamma_d, "Nitsche penalty");
  cmd->add_option("--gamma-n", f.gamma_n, "Neumann flux penalty");
  cmd->add_option("--gamma-1", f.gamma_1, "ghost penalty (scalar case)");
  cmd->add_option("--gamma-1u", f.gamma_1u, "velocity jump penalty");
  cmd->add_option("--gamma-1p", f.gamma_1p, "pressure jump penalty");
  cmd->add_flag("--paper-faces", f.paper_faces,
                "pressure stabilization on ghost faces only");
  cmd->add_flag("--lifting", f.lifting, "subtract the reference solve (saddle case)");
  cmd->add_option("--seed", f.seed, "sampling seed");
  cmd->add_option("--workers", f.workers, "worker threads (0 = default)");
  cmd->add_option("--out", f.out, "output directory");
}

cutrom::RunConfig build_config(const CLI::App* cmd, const Flags& f) {
  cutrom::RunConfig cfg;
  if (cmd->count("--config")) cutrom::apply_config_file(cfg, f.config);
  if (cmd->count("--case")) cfg.case_name = f.case_name;
  if (cmd->count("--h")) cfg.mesh_h = f.h;
  if (cmd->count("--train")) cfg.m_train = f.train;
  if (cmd->count("--test")) cfg.test_count = f.test;
  if (cmd->count("--nmax")) cfg.n_max = f.nmax;
  if (cmd->count("--extension"))
    cfg.extension = cutrom::extension_from_string(f.extension);
  if (cmd->count("--transport")) cfg.transport = f.transport;
  if (cmd->count("--gamma-d")) cfg.gamma_D = f.gamma_d;
  if (cmd->count("--gamma-n")) cfg.gamma_N = f.gamma_n;
  if (cmd->count("--gamma-1")) cfg.gamma_1 = f.gamma_1;
  if (cmd->count("--gamma-1u")) cfg.gamma_1u = f.gamma_1u;
  if (cmd->count("--gamma-1p")) cfg.gamma_1p = f.gamma_1p;
  if (cmd->count("--paper-faces")) cfg.paper_faces = f.paper_faces;
  if (cmd->count("--lifting")) cfg.lifting = f.lifting;
  if (cmd->count("--seed")) cfg.seed = f.seed;
  if (cmd->count("--workers")) cfg.workers = f.workers;
  if (cmd->count("--out")) cfg.out_dir = f.out;
  return cfg;
}

Eigen::VectorXd mu_vector(const cutrom::RunConfig& cfg,
                          const std::vector<double>& values) {
  const size_t dim = cfg.case_name == "darcy-ellipse" ? 4 : 1;
  if (values.size() != dim)
    throw std::invalid_argument("--mu needs " + std::to_string(dim) +
                                " component(s) for " + cfg.case_name);
  Eigen::VectorXd mu(values.size());
  for (size_t i = 0; i < values.size(); ++i) mu[i] = values[i];
  return mu;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CutFEM reduced-order pipeline for embedded-domain flow problems"};
  app.require_subcommand(1);

  Flags f;
  CLI::App* offline = app.add_subcommand("offline", "sample, solve, compress");
  add_common(offline, f);
  CLI::App* errors = app.add_subcommand("errors", "test-set error sweep over N");
  add_common(errors, f);
  CLI::App* online = app.add_subcommand("online", "reduced solve at one parameter");
  add_common(online, f);
  online->add_option("--mu", f.mu, "query parameter components")
      ->required()
      ->expected(-1);
  CLI::App* hf = app.add_subcommand("hf-solve", "high-fidelity solve at one parameter");
  add_common(hf, f);
  hf->add_option("--mu", f.mu, "query parameter components")->required()->expected(-1);
  CLI::App* sweep = app.add_subcommand("gamma-sweep",
                                       "offline + error at fixed N per penalty value");
  add_common(sweep, f);
  sweep->add_option("--gamma", f.gammas, "penalty values")->required()->expected(-1);
  CLI::App* eigs = app.add_subcommand("eigs-export", "eigenvalue CSV from a basis");
  add_common(eigs, f);
  eigs->add_option("--basis", f.basis_dir, "basis directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (offline->parsed()) {
      cutrom::run_offline(build_config(offline, f));
    } else if (errors->parsed()) {
      cutrom::run_errors(build_config(errors, f));
    } else if (online->parsed()) {
      const cutrom::RunConfig cfg = build_config(online, f);
      cutrom::run_online(cfg, mu_vector(cfg, f.mu));
    } else if (hf->parsed()) {
      const cutrom::RunConfig cfg = build_config(hf, f);
      cutrom::run_hf_solve(cfg, mu_vector(cfg, f.mu));
    } else if (sweep->parsed()) {
      cutrom::run_gamma_sweep(build_config(sweep, f), f.gammas);
    } else if (eigs->parsed()) {
      cutrom::run_eigs_export(build_config(eigs, f), f.basis_dir);
    }
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
