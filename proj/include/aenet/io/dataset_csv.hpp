#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "aenet/dataset.hpp"
#include "aenet/io/format.hpp"
#include "aenet/types.hpp"

namespace aenet::io {

/// Dataset CSV: header row with the response column `y` first and one column
/// per predictor after it; one observation per row.
inline Dataset<double> read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_dataset_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_dataset_csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) header.push_back(f);
  }
  if (header.size() < 2 || header[0] != "y")
    throw std::runtime_error("read_dataset_csv: header must be 'y,<predictors...>'");
  const std::size_t p = header.size() - 1;

  std::vector<double> ys;
  std::vector<double> xs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f;
    std::size_t c = 0;
    while (std::getline(ss, f, ',')) {
      char* end = nullptr;
      const double v = std::strtod(f.c_str(), &end);
      if (end == f.c_str() || *end != '\0')
        throw std::runtime_error("read_dataset_csv: bad number '" + f + "' at line " +
                                 std::to_string(line_no));
      if (c == 0) ys.push_back(v);
      else xs.push_back(v);
      ++c;
    }
    if (c != p + 1)
      throw std::runtime_error("read_dataset_csv: line " + std::to_string(line_no) + " has " +
                               std::to_string(c) + " fields, expected " +
                               std::to_string(p + 1));
  }
  const Index n = static_cast<Index>(ys.size());
  if (n == 0) throw std::runtime_error("read_dataset_csv: no data rows in " + path);
  Mat<double> X(n, static_cast<Index>(p));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < static_cast<Index>(p); ++j)
      X(i, j) = xs[static_cast<std::size_t>(i) * p + j];
  Vec<double> y = Eigen::Map<Vec<double>>(ys.data(), n);
  return Dataset<double>(std::move(X), std::move(y),
                         std::vector<std::string>(header.begin() + 1, header.end()));
}

inline void write_dataset_csv(const Dataset<double>& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_dataset_csv: cannot open " + path);
  out << "y";
  for (Index j = 0; j < ds.p(); ++j) {
    out << ",";
    out << (ds.column_names().empty() ? "x" + std::to_string(j + 1)
                                      : ds.column_names()[static_cast<std::size_t>(j)]);
  }
  out << "\n";
  for (Index i = 0; i < ds.n(); ++i) {
    out << full(ds.y()[i]);
    for (Index j = 0; j < ds.p(); ++j) out << "," << full(ds.X()(i, j));
    out << "\n";
  }
}

}  // namespace aenet::io
