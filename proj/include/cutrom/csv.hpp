#pragma once
#include <string>
#include <vector>

namespace cutrom {

// CSV writer with fixed conventions: '.' decimal separator, '\n' line
// endings, header row, values printed with %.17g (round-trip exact)
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<double>& values);
  void write(const std::string& path) const;
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

std::string format_double(double v);  // %.17g

}  // namespace cutrom
