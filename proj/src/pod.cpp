#include "cutrom/pod.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "cutrom/errors.hpp"
#include "cutrom/fem.hpp"
#include "cutrom/parallel.hpp"

namespace cutrom {

namespace fs = std::filesystem;
using nlohmann::json;

SpMat background_mass_matrix(const BackgroundMesh& mesh) {
  std::vector<Triplet> trips;
  trips.reserve(mesh.cells.size() * 9);
  for (int c = 0; c < (int)mesh.cells.size(); ++c) {
    const auto& t = mesh.cells[c];
    const double a = mesh.cell_area(c);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trips.emplace_back(t[i], t[j], a * (i == j ? 1.0 / 6.0 : 1.0 / 12.0));
  }
  SpMat m((int)mesh.vertices.size(), (int)mesh.vertices.size());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

double l2_inner(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                const SpMat& mass, int components) {
  const int n = (int)mass.rows();
  if (a.size() != components * n || b.size() != components * n)
    throw std::invalid_argument("l2_inner: length mismatch");
  double s = 0;
  for (int c = 0; c < components; ++c)
    s += a.segment(c * n, n).dot(mass * b.segment(c * n, n));
  return s;
}

static Eigen::MatrixXd correlation_impl(const SnapshotSet& set, const SpMat& mass,
                                        bool par) {
  const int m = set.size();
  if (m == 0) throw std::invalid_argument("correlation: empty snapshot set");
  const int n = (int)mass.rows();
  const int len = (int)set.fields.front().size();
  if (len != set.components * n)
    throw std::invalid_argument("correlation: field length does not match mesh");

  // apply the mass matrix to every snapshot once, then dense dot products
  std::vector<Eigen::VectorXd> my(m);
  const auto apply = [&](int i) {
    my[i].resize(len);
    for (int c = 0; c < set.components; ++c)
      my[i].segment(c * n, n) = mass * set.fields[i].segment(c * n, n);
  };
  if (par) parallel_for(m, apply);
  else serial_for(m, apply);

  Eigen::MatrixXd C(m, m);
  const auto fill_row = [&](int i) {
    for (int j = 0; j < m; ++j) C(i, j) = set.fields[i].dot(my[j]);
  };
  if (par) parallel_for(m, fill_row);
  else serial_for(m, fill_row);
  // enforce exact symmetry (the two dot-product orders differ in rounding)
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double v = 0.5 * (C(i, j) + C(j, i));
      C(i, j) = C(j, i) = v;
    }
  return C;
}

Eigen::MatrixXd correlation(const SnapshotSet& set, const SpMat& mass) {
  return correlation_impl(set, mass, true);
}
Eigen::MatrixXd correlation_serial(const SnapshotSet& set, const SpMat& mass) {
  return correlation_impl(set, mass, false);
}

ReducedBasis compress(const SnapshotSet& set, int N, const SpMat& mass) {
  const int m = set.size();
  if (N < 1 || N > m) throw std::invalid_argument("compress: N out of range");

  const Eigen::MatrixXd C = correlation(set, mass);
  Eigen::VectorXd lambda;
  Eigen::MatrixXd Q;
  sym_eig(C, lambda, Q);

  ReducedBasis basis;
  basis.kind = set.kind;
  basis.components = set.components;
  basis.eigenvalues = lambda;
  basis.extension_mode = set.extension_mode;
  basis.transported = set.transported;
  basis.transport_reference = set.transport_reference;

  const double lead = lambda.size() ? lambda[0] : 0.0;
  for (int i = 0; i < N; ++i) {
    if (lead <= 0 || lambda[i] / lead < 1e-14) break;  // rank cutoff
    Eigen::VectorXd mode = Eigen::VectorXd::Zero(set.fields.front().size());
    for (int k = 0; k < m; ++k) mode += Q(k, i) * set.fields[k];
    const double norm = std::sqrt(l2_inner(mode, mode, mass, set.components));
    if (norm <= 0) break;
    basis.modes.push_back(mode / norm);
  }
  return basis;
}

Eigen::VectorXd project(const ReducedBasis& basis, const Eigen::VectorXd& field,
                        const SpMat& mass, int N) {
  if (N < 0 || N > basis.size()) throw std::invalid_argument("project: N out of range");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(field.size());
  for (int i = 0; i < N; ++i)
    out += l2_inner(basis.modes[i], field, mass, basis.components) * basis.modes[i];
  return out;
}

StokesReducedSpace build_stokes_spaces(const ReducedBasis& vel,
                                       const ReducedBasis& sup,
                                       const ReducedBasis& pr, int N) {
  if (N < 1) throw std::invalid_argument("build_stokes_spaces: N must be >= 1");
  if (vel.size() < N || sup.size() < N || pr.size() < N)
    throw std::invalid_argument("build_stokes_spaces: insufficient modes");
  StokesReducedSpace sp;
  sp.N = N;
  sp.transported = vel.transported;
  sp.transport_reference = vel.transport_reference;
  for (int i = 0; i < N; ++i) {
    if (vel.modes[i].norm() == 0 || sup.modes[i].norm() == 0 ||
        pr.modes[i].norm() == 0)
      throw std::invalid_argument("build_stokes_spaces: zero mode");
    sp.velocity_modes.push_back(vel.modes[i]);
  }
  for (int i = 0; i < N; ++i) sp.velocity_modes.push_back(sup.modes[i]);
  for (int i = 0; i < N; ++i) sp.pressure_modes.push_back(pr.modes[i]);
  return sp;
}

void save_basis(const ReducedBasis& basis, const std::string& dir) {
  if (basis.modes.empty()) throw std::invalid_argument("save_basis: empty basis");
  fs::create_directories(dir);

  json manifest;
  manifest["format_version"] = 1;
  manifest["kind"] = "basis";
  manifest["basis_of"] = to_string(basis.kind);
  manifest["components"] = basis.components;
  manifest["m"] = (int)basis.modes.size();
  manifest["field_length"] = (int)basis.modes.front().size();
  manifest["extension_mode"] = to_string(basis.extension_mode);
  manifest["transported"] = basis.transported;
  manifest["transport_reference"] = std::vector<double>(
      basis.transport_reference.begin(), basis.transport_reference.end());
  manifest["eigenvalues"] =
      std::vector<double>(basis.eigenvalues.begin(), basis.eigenvalues.end());

  json files = json::array();
  for (size_t i = 0; i < basis.modes.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%04d.f64", (int)i);
    const std::string checksum =
        write_field_file((fs::path(dir) / name).string(), basis.modes[i]);
    files.push_back({{"name", name}, {"checksum", checksum}});
  }
  manifest["files"] = files;

  std::ofstream mf(fs::path(dir) / "manifest.json", std::ios::binary);
  if (!mf) throw IoError("cannot write manifest in " + dir);
  mf << manifest.dump(2) << '\n';
}

ReducedBasis load_basis(const std::string& dir) {
  std::ifstream mf(fs::path(dir) / "manifest.json", std::ios::binary);
  if (!mf) throw IoError("missing manifest in " + dir);
  json manifest;
  try {
    mf >> manifest;
  } catch (const json::exception& e) {
    throw FormatVersionError("manifest parse failure in " + dir + ": " + e.what());
  }
  if (!manifest.contains("format_version") || manifest["format_version"] != 1)
    throw FormatVersionError("unsupported manifest version in " + dir);
  if (!manifest.contains("basis_of") || !manifest.contains("eigenvalues"))
    throw FormatVersionError("not a basis directory: " + dir);

  ReducedBasis basis;
  {
    const std::string underlying = manifest["basis_of"].get<std::string>();
    if (underlying == "scalar") basis.kind = FieldKind::scalar;
    else if (underlying == "velocity") basis.kind = FieldKind::velocity;
    else if (underlying == "pressure") basis.kind = FieldKind::pressure;
    else if (underlying == "supremizer") basis.kind = FieldKind::supremizer;
    else throw FormatVersionError("unknown basis_of: " + underlying);
  }
  basis.components = manifest.at("components").get<int>();
  basis.extension_mode =
      extension_from_string(manifest.at("extension_mode").get<std::string>());
  basis.transported = manifest.at("transported").get<bool>();
  const auto tref = manifest.at("transport_reference").get<std::vector<double>>();
  basis.transport_reference =
      Eigen::Map<const Eigen::VectorXd>(tref.data(), (int)tref.size());
  const auto ev = manifest.at("eigenvalues").get<std::vector<double>>();
  basis.eigenvalues = Eigen::Map<const Eigen::VectorXd>(ev.data(), (int)ev.size());

  const int m = manifest.at("m").get<int>();
  const int len = manifest.at("field_length").get<int>();
  for (const auto& fe : manifest.at("files")) {
    basis.modes.push_back(read_field_file(
        (fs::path(dir) / fe.at("name").get<std::string>()).string(), len,
        fe.at("checksum").get<std::string>()));
  }
  if ((int)basis.modes.size() != m)
    throw FormatVersionError("file list does not match m in " + dir);
  return basis;
}

}  // namespace cutrom
