#pragma once
#include <Eigen/Dense>
#include <string>
#include <vector>

#include "cutrom/darcy.hpp"
#include "cutrom/geometry.hpp"

namespace cutrom {

enum class ExtensionMode { zero, natural, harmonic };
enum class FieldKind { scalar, velocity, pressure, supremizer, basis };

const char* to_string(ExtensionMode m);
const char* to_string(FieldKind k);
ExtensionMode extension_from_string(const std::string& s);

// M nodal fields on the full background mesh plus their parameters
struct SnapshotSet {
  FieldKind kind = FieldKind::scalar;
  int components = 1;  // 2 for velocity / supremizer
  std::vector<Eigen::VectorXd> fields;  // length components * n_vertices
  std::vector<Eigen::VectorXd> parameters;
  ExtensionMode extension_mode = ExtensionMode::natural;
  bool transported = false;
  Eigen::VectorXd transport_reference;

  int size() const { return (int)fields.size(); }
};

// active-DOF scalar field -> background field per the extension rule:
//   zero:     node keeps its value iff phi(node) <= 0
//   natural:  node keeps its value iff it is an active DOF
//   harmonic: phi <= 0 nodes keep the natural value, all others take the
//             complement Laplace solve of solve_harmonic_extension
Eigen::VectorXd extend(const Eigen::VectorXd& active_field, const ActiveMesh& active,
                       ExtensionMode mode, const LevelSetDomain& domain);

// value of the input field composed with the map: out(x) = in(tau(x;mu))
// (forward) or in(tau^-1(x;mu)) (inverse) via P1 interpolation; points mapped
// outside B are zero-filled. Vertex-parallel kernel + serial reference.
enum class TransportDirection { forward, inverse };
Eigen::VectorXd transport_compose(const Eigen::VectorXd& background_field,
                                  const BackgroundMesh& mesh, const TransportMap& map,
                                  const Eigen::VectorXd& mu, TransportDirection dir);
Eigen::VectorXd transport_compose_serial(const Eigen::VectorXd& background_field,
                                         const BackgroundMesh& mesh,
                                         const TransportMap& map,
                                         const Eigen::VectorXd& mu,
                                         TransportDirection dir);
// multi-component wrapper (components stacked in one vector)
Eigen::VectorXd transport_compose_components(const Eigen::VectorXd& field,
                                             int components,
                                             const BackgroundMesh& mesh,
                                             const TransportMap& map,
                                             const Eigen::VectorXd& mu,
                                             TransportDirection dir);

// directory persistence: manifest.json + snap_%04d.f64 (little-endian f64),
// FNV-1a 64 checksums; round-trip is bit-exact
void save(const SnapshotSet& set, const std::string& dir);
SnapshotSet load(const std::string& dir);

std::uint64_t fnv1a64(const unsigned char* data, size_t len);

// low-level field-file helpers shared with the basis persistence
std::string write_field_file(const std::string& path, const Eigen::VectorXd& v);
Eigen::VectorXd read_field_file(const std::string& path, int expected_len,
                                const std::string& expected_checksum);

}  // namespace cutrom
