#pragma once

#include "nhk/datasets.hpp"
#include "nhk/eval.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace nhk {

/// Shortest round-trip decimal form; keeps re-runs byte-identical.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Writes a whole file in one shot so failed commands never leave
/// partial output behind.
inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw io_error("write failed: " + path);
}

/// Dataset CSV: x1,...,xn,label,true_class.
template <class Scalar>
std::string dataset_csv(const LabeledDataset<Scalar>& ds,
                        const std::vector<int>& true_class) {
  std::ostringstream out;
  for (Index j = 0; j < ds.dim(); ++j) out << "x" << (j + 1) << ",";
  out << "label,true_class\n";
  for (Index i = 0; i < ds.size(); ++i) {
    for (Index j = 0; j < ds.dim(); ++j) out << fmt(ds.points(i, j)) << ",";
    out << fmt(ds.labels[i]) << ","
        << (true_class.empty() ? 0 : true_class[static_cast<std::size_t>(i)]) << "\n";
  }
  return out.str();
}

template <class Scalar = double>
GeneratedDataset<Scalar> load_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw format_error("empty dataset file: " + path);
  Index dim = -1;
  {
    std::stringstream header(line);
    std::string col;
    Index cols = 0;
    while (std::getline(header, col, ',')) ++cols;
    if (cols < 3) throw format_error("dataset header needs x*,label,true_class: " + path);
    dim = cols - 2;
  }
  std::vector<std::vector<Scalar>> rows;
  std::vector<Scalar> labels;
  std::vector<int> classes;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<Scalar> row;
    while (std::getline(ss, cell, ',')) row.push_back(static_cast<Scalar>(std::stod(cell)));
    if (static_cast<Index>(row.size()) != dim + 2)
      throw format_error("ragged dataset row in " + path);
    labels.push_back(row[static_cast<std::size_t>(dim)]);
    classes.push_back(static_cast<int>(row[static_cast<std::size_t>(dim + 1)]));
    row.resize(static_cast<std::size_t>(dim));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw format_error("dataset has no rows: " + path);
  Matrix<Scalar> pts(static_cast<Index>(rows.size()), dim);
  Vector<Scalar> lab(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (Index j = 0; j < dim; ++j) pts(static_cast<Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    lab[static_cast<Index>(i)] = labels[i];
  }
  return {make_dataset(std::move(pts), std::move(lab)), std::move(classes)};
}

/// Propagation trace CSV: step,index,u — one block per recorded step.
template <class Scalar>
std::string trace_csv(const std::vector<Vector<Scalar>>& steps) {
  std::ostringstream out;
  out << "step,index,u\n";
  for (std::size_t s = 0; s < steps.size(); ++s)
    for (Index i = 0; i < steps[s].size(); ++i)
      out << s << "," << i << "," << fmt(steps[s][i]) << "\n";
  return out.str();
}

inline std::string sweep_csv(const SweepResult& result, bool with_timing) {
  std::ostringstream out;
  out << "model,count,trial,error,seconds\n";
  for (const auto& r : result.rows)
    out << r.model << "," << r.labeled_per_class << "," << r.trial << ","
        << fmt(r.error_rate) << "," << fmt(with_timing ? r.seconds : 0.0) << "\n";
  return out.str();
}

template <class Scalar>
std::string boundary_csv(const BoundaryGrid<Scalar>& grid) {
  std::ostringstream out;
  out << "x,y,sign\n";
  for (Index i = 0; i < grid.points.rows(); ++i)
    out << fmt(grid.points(i, 0)) << "," << fmt(grid.points(i, 1)) << ","
        << fmt(grid.signs[i]) << "\n";
  return out.str();
}

}  // namespace nhk
