#include "cutrom/snapshot.hpp"

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "cutrom/errors.hpp"
#include "cutrom/parallel.hpp"

namespace cutrom {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(ExtensionMode m) {
  switch (m) {
    case ExtensionMode::zero: return "zero";
    case ExtensionMode::natural: return "natural";
    case ExtensionMode::harmonic: return "harmonic";
  }
  return "?";
}

const char* to_string(FieldKind k) {
  switch (k) {
    case FieldKind::scalar: return "scalar";
    case FieldKind::velocity: return "velocity";
    case FieldKind::pressure: return "pressure";
    case FieldKind::supremizer: return "supremizer";
    case FieldKind::basis: return "basis";
  }
  return "?";
}

ExtensionMode extension_from_string(const std::string& s) {
  if (s == "zero") return ExtensionMode::zero;
  if (s == "natural") return ExtensionMode::natural;
  if (s == "harmonic") return ExtensionMode::harmonic;
  throw std::invalid_argument("unknown extension mode: " + s);
}

static FieldKind kind_from_string(const std::string& s) {
  if (s == "scalar") return FieldKind::scalar;
  if (s == "velocity") return FieldKind::velocity;
  if (s == "pressure") return FieldKind::pressure;
  if (s == "supremizer") return FieldKind::supremizer;
  if (s == "basis") return FieldKind::basis;
  throw FormatVersionError("unknown field kind: " + s);
}

Eigen::VectorXd extend(const Eigen::VectorXd& active_field, const ActiveMesh& am,
                       ExtensionMode mode, const LevelSetDomain& domain) {
  if (active_field.size() != am.n_dofs())
    throw std::invalid_argument("extend: field length does not match active DOFs");
  const int nv = (int)am.mesh->vertices.size();
  Eigen::VectorXd natural = Eigen::VectorXd::Zero(nv);
  for (int d = 0; d < am.n_dofs(); ++d) natural[am.active_dofs[d]] = active_field[d];

  switch (mode) {
    case ExtensionMode::natural:
      return natural;
    case ExtensionMode::zero: {
      Eigen::VectorXd out = Eigen::VectorXd::Zero(nv);
      for (int v = 0; v < nv; ++v)
        if (am.phi_vertex[v] <= 0) out[v] = natural[v];
      return out;
    }
    case ExtensionMode::harmonic: {
      const Eigen::VectorXd uc =
          solve_harmonic_extension(active_field, am, domain);
      Eigen::VectorXd out = uc;
      for (int v = 0; v < nv; ++v)
        if (am.phi_vertex[v] <= 0) out[v] = natural[v];
      return out;
    }
  }
  throw std::logic_error("extend: unreachable");
}

static Eigen::VectorXd transport_impl(const Eigen::VectorXd& field,
                                      const BackgroundMesh& mesh,
                                      const TransportMap& map,
                                      const Eigen::VectorXd& mu,
                                      TransportDirection dir, bool par) {
  if (field.size() != (int)mesh.vertices.size())
    throw std::invalid_argument("transport: field length mismatch");
  const int nv = (int)mesh.vertices.size();
  Eigen::VectorXd out(nv);
  const auto body = [&](int v) {
    const Eigen::Vector2d q = dir == TransportDirection::forward
                                  ? map.forward(mesh.vertices[v], mu)
                                  : map.inverse(mesh.vertices[v], mu);
    out[v] = interpolate_p1(mesh, field, q, 0.0);
  };
  if (par) parallel_for(nv, body);
  else serial_for(nv, body);
  return out;
}

Eigen::VectorXd transport_compose(const Eigen::VectorXd& field,
                                  const BackgroundMesh& mesh, const TransportMap& map,
                                  const Eigen::VectorXd& mu, TransportDirection dir) {
  return transport_impl(field, mesh, map, mu, dir, true);
}

Eigen::VectorXd transport_compose_serial(const Eigen::VectorXd& field,
                                         const BackgroundMesh& mesh,
                                         const TransportMap& map,
                                         const Eigen::VectorXd& mu,
                                         TransportDirection dir) {
  return transport_impl(field, mesh, map, mu, dir, false);
}

Eigen::VectorXd transport_compose_components(const Eigen::VectorXd& field,
                                             int components,
                                             const BackgroundMesh& mesh,
                                             const TransportMap& map,
                                             const Eigen::VectorXd& mu,
                                             TransportDirection dir) {
  const int nv = (int)mesh.vertices.size();
  if (field.size() != components * nv)
    throw std::invalid_argument("transport: component length mismatch");
  Eigen::VectorXd out(field.size());
  for (int c = 0; c < components; ++c)
    out.segment(c * nv, nv) =
        transport_compose(field.segment(c * nv, nv), mesh, map, mu, dir);
  return out;
}

std::uint64_t fnv1a64(const unsigned char* data, size_t len) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", (unsigned long long)v);
  return buf;
}

}  // namespace

std::string write_field_file(const std::string& path, const Eigen::VectorXd& v) {
  static_assert(std::endian::native == std::endian::little,
                "persistence assumes a little-endian host");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for write: " + path);
  f.write(reinterpret_cast<const char*>(v.data()),
          (std::streamsize)(sizeof(double) * v.size()));
  if (!f) throw IoError("write failed: " + path);
  return hex64(fnv1a64(reinterpret_cast<const unsigned char*>(v.data()),
                       sizeof(double) * v.size()));
}

Eigen::VectorXd read_field_file(const std::string& path, int expected_len,
                                const std::string& expected_checksum) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open: " + path);
  Eigen::VectorXd v(expected_len);
  f.read(reinterpret_cast<char*>(v.data()),
         (std::streamsize)(sizeof(double) * expected_len));
  if (f.gcount() != (std::streamsize)(sizeof(double) * expected_len))
    throw FormatVersionError("truncated field file: " + path);
  const std::string got = hex64(fnv1a64(
      reinterpret_cast<const unsigned char*>(v.data()), sizeof(double) * expected_len));
  if (got != expected_checksum)
    throw FormatVersionError("checksum mismatch: " + path);
  return v;
}

void save(const SnapshotSet& set, const std::string& dir) {
  if (set.fields.empty()) throw std::invalid_argument("save: empty snapshot set");
  for (const auto& f : set.fields)
    if (f.size() != set.fields.front().size())
      throw std::invalid_argument("save: inconsistent field lengths");
  if (set.parameters.size() != set.fields.size())
    throw std::invalid_argument("save: parameters/fields length mismatch");

  fs::create_directories(dir);
  json manifest;
  manifest["format_version"] = 1;
  manifest["kind"] = to_string(set.kind);
  manifest["components"] = set.components;
  manifest["m"] = (int)set.fields.size();
  manifest["field_length"] = (int)set.fields.front().size();
  manifest["extension_mode"] = to_string(set.extension_mode);
  manifest["transported"] = set.transported;
  manifest["transport_reference"] =
      std::vector<double>(set.transport_reference.begin(), set.transport_reference.end());
  json params = json::array();
  for (const auto& p : set.parameters)
    params.push_back(std::vector<double>(p.begin(), p.end()));
  manifest["parameters"] = params;

  json files = json::array();
  for (size_t i = 0; i < set.fields.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "snap_%04d.f64", (int)i);
    const std::string checksum =
        write_field_file((fs::path(dir) / name).string(), set.fields[i]);
    files.push_back({{"name", name}, {"checksum", checksum}});
  }
  manifest["files"] = files;

  std::ofstream mf(fs::path(dir) / "manifest.json", std::ios::binary);
  if (!mf) throw IoError("cannot write manifest in " + dir);
  mf << manifest.dump(2) << '\n';
}

SnapshotSet load(const std::string& dir) {
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

  SnapshotSet set;
  set.kind = kind_from_string(manifest.at("kind").get<std::string>());
  set.components = manifest.at("components").get<int>();
  set.extension_mode =
      extension_from_string(manifest.at("extension_mode").get<std::string>());
  set.transported = manifest.at("transported").get<bool>();
  const auto tref = manifest.at("transport_reference").get<std::vector<double>>();
  set.transport_reference =
      Eigen::Map<const Eigen::VectorXd>(tref.data(), (int)tref.size());
  for (const auto& p : manifest.at("parameters")) {
    const auto vals = p.get<std::vector<double>>();
    set.parameters.push_back(
        Eigen::Map<const Eigen::VectorXd>(vals.data(), (int)vals.size()));
  }

  const int m = manifest.at("m").get<int>();
  const int len = manifest.at("field_length").get<int>();
  const auto& files = manifest.at("files");
  if ((int)files.size() != m)
    throw FormatVersionError("file list does not match m in " + dir);
  for (const auto& fe : files) {
    set.fields.push_back(read_field_file(
        (fs::path(dir) / fe.at("name").get<std::string>()).string(), len,
        fe.at("checksum").get<std::string>()));
  }
  if ((int)set.parameters.size() != m)
    throw FormatVersionError("parameter list does not match m in " + dir);
  return set;
}

}  // namespace cutrom
