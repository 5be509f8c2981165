#pragma once

#include <string>
#include <vector>

namespace lgt {

/// Column-oriented CSV writer: optional '#' comment lines, one header row,
/// numeric cells at full double precision.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns,
            const std::string& comment = "");
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);

 private:
  struct Impl;
  Impl* impl_;
};

std::string format_double(double v);

/// In-memory CSV table with '#' comment passthrough.
struct CsvTable {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  static CsvTable read(const std::string& path);

  int column(const std::string& name) const;  // -1 when absent
  double number(std::size_t row, int col) const;
  std::vector<double> numeric_column(const std::string& name) const;
};

}  // namespace lgt
