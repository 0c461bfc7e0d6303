#pragma once

// Run reports and CSV output. Numbers are written with 17 significant
// digits and keys in insertion order, so equal inputs give equal bytes.

#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "frob/checks.hpp"
#include "frob/scenario.hpp"

namespace frob {

std::string format_number(double v);  // %.17g; nan/inf spelled out

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  const std::string& path() const { return path_; }
  std::size_t rows() const { return rows_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

// Column names prefix1..prefixN.
std::vector<std::string> numbered(const std::string& prefix, int count, int first = 1);

struct Report {
  std::string scenario;
  std::string command;
  Numerics numerics;
  std::vector<CheckRecord> checks;
  std::vector<std::pair<std::string, std::string>> outputs;  // product -> file
  std::vector<std::pair<std::string, double>> results;      // named scalars
  std::vector<std::string> notes;

  bool all_pass() const;
  std::string to_json() const;
  void write(const std::string& path) const;
};

}  // namespace frob
