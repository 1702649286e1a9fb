#pragma once
#include <stdexcept>
#include <string>

namespace cutrom {

// thrown when a parameter gives an active mesh with no cells
struct EmptyDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrixError : std::runtime_error {
  int index;  // offending row / pivot index when known, else -1
  explicit SingularMatrixError(const std::string& what, int idx = -1)
      : std::runtime_error(what), index(idx) {}
};

// interface rule requested on an uncut cell
struct NoInterfaceError : std::logic_error {
  using std::logic_error::logic_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// persisted data with wrong layout / failed checksum
struct FormatVersionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cutrom
