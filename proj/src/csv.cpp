#include "cutrom/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "cutrom/errors.hpp"

namespace cutrom {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("csv: empty header");
}

void CsvWriter::add_row(const std::vector<double>& values) {
  if (values.size() != header_.size())
    throw std::invalid_argument("csv: row arity does not match header");
  rows_.push_back(values);
}

std::string CsvWriter::str() const {
  std::string out;
  for (size_t i = 0; i < header_.size(); ++i) {
    if (i) out += ',';
    out += header_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary);  // binary: keep '\n' on all platforms
  if (!f) throw IoError("csv: cannot open " + path);
  f << str();
  if (!f) throw IoError("csv: write failed for " + path);
}

}  // namespace cutrom
