#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "cutrom/darcy.hpp"
#include "cutrom/pod.hpp"
#include "cutrom/rng.hpp"
#include "cutrom/rom.hpp"
#include "cutrom/snapshot.hpp"
#include "cutrom/stokes.hpp"

namespace cutrom {

struct RunConfig {
  std::string case_name = "darcy-ellipse";  // or stokes-cylinder
  double mesh_h = 0;                        // 0 = case default (0.05 / 0.035)
  int m_train = 400;
  int n_max = 140;
  int test_count = 30;
  ExtensionMode extension = ExtensionMode::natural;
  bool transport = false;
  double gamma_D = 10.0, gamma_N = 0.0, gamma_1 = 0.1;  // scalar case
  double gamma_1u = 0.1, gamma_1p = 0.1;                // saddle case
  bool paper_faces = false;
  bool lifting = false;
  std::uint64_t seed = 42;
  int workers = 0;
  std::string out_dir = "out";

  void validate() const;  // m_train >= n_max >= 1 etc.
};

// JSON config file with the RunConfig field names; missing keys keep defaults
void apply_config_file(RunConfig& cfg, const std::string& path);

struct DarcyCase {
  BackgroundMesh mesh;
  DarcyProblem problem;  // ellipse domain, g=20, g_D=0.5+x*y, penalties from config
  TransportMap map;
};
DarcyCase make_darcy_case(const RunConfig& cfg);

struct StokesCase {
  BackgroundMesh mesh;
  StokesProblem problem;  // cylinder obstacle, unit inlet, penalties from config
  TransportMap map;
};
StokesCase make_stokes_case(const RunConfig& cfg);

// uniform draws over the parameter box; draws whose active mesh is empty
// (possible for the smallest ellipses on a coarse mesh) are discarded and
// redrawn, keeping the sequence a deterministic function of the seed
std::vector<Eigen::VectorXd> sample_parameters(const BackgroundMesh& mesh,
                                               const LevelSetDomain& domain,
                                               int count, Xoshiro256ss& rng);
// decorrelated stream for the test set
std::uint64_t test_seed(std::uint64_t seed);

// ---- scalar case drivers ----

struct DarcyTraining {
  std::vector<Eigen::VectorXd> parameters;
  std::vector<ActiveMesh> active;       // per parameter
  std::vector<Eigen::VectorXd> hf;      // active-DOF solutions
};
DarcyTraining darcy_solve_training(const DarcyCase& c,
                                   const std::vector<Eigen::VectorXd>& params);

SnapshotSet darcy_build_set(const DarcyCase& c, const DarcyTraining& tr,
                            ExtensionMode mode, bool transport);

struct ErrorCurve {
  std::vector<int> N;
  std::vector<double> scalar_err;             // Darcy
  std::vector<double> velocity_err, pressure_err;  // Stokes
};
std::vector<int> error_grid(int n_max);  // 1,5,10,...,n_max

ErrorCurve darcy_error_curve(const DarcyCase& c, const ReducedBasis& basis,
                             const std::vector<Eigen::VectorXd>& test_params,
                             const std::vector<int>& grid);

// ---- saddle case drivers ----

struct StokesTraining {
  std::vector<Eigen::VectorXd> parameters;
  std::vector<ActiveMesh> active;
  std::vector<StokesField> hf;
  std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>> supremizer;
};
StokesTraining stokes_solve_training(const StokesCase& c,
                                     const std::vector<Eigen::VectorXd>& params);

struct StokesSets {
  SnapshotSet velocity, pressure, supremizer;
};
StokesSets stokes_build_sets(const StokesCase& c, const StokesTraining& tr,
                             ExtensionMode mode, bool transport);

// high-fidelity solve at the reference parameter, extended to the background
// mesh (the lifting field for inhomogeneous inlet data)
void stokes_lift_fields(const StokesCase& c, ExtensionMode mode,
                        Eigen::VectorXd* lift_velocity,
                        Eigen::VectorXd* lift_pressure);

// POD per field + combined space at N; optional lifting subtracts the
// high-fidelity solution at the reference parameter before compression
StokesReducedSpace stokes_build_space(const StokesCase& c, const StokesSets& sets,
                                      int N, bool lifting, ExtensionMode mode);

ErrorCurve stokes_error_curve(const StokesCase& c, const StokesReducedSpace& space,
                              const std::vector<Eigen::VectorXd>& test_params,
                              const std::vector<int>& grid);

// ---- CLI entry points (create out_dir, write CSVs/sets) ----
void run_offline(const RunConfig& cfg);
void run_errors(const RunConfig& cfg);
void run_online(const RunConfig& cfg, const Eigen::VectorXd& mu);
void run_hf_solve(const RunConfig& cfg, const Eigen::VectorXd& mu);
void run_gamma_sweep(const RunConfig& cfg, const std::vector<double>& gammas);
void run_eigs_export(const RunConfig& cfg, const std::string& basis_dir);

}  // namespace cutrom
