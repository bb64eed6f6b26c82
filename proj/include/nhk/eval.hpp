#pragma once

#include "nhk/datasets.hpp"
#include "nhk/pipeline.hpp"
#include "nhk/solvers.hpp"

#include <chrono>
#include <random>
#include <string>
#include <vector>

namespace nhk {

/// One sweep cell: a model evaluated at one labeled-count and trial.
struct SweepRow {
  std::string model;
  Index labeled_per_class = 0;
  int trial = 0;
  double error_rate = 0.0;
  double seconds = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  double mean_error(const std::string& model, Index count) const {
    double sum = 0.0;
    int hits = 0;
    for (const auto& r : rows)
      if (r.model == model && r.labeled_per_class == count) {
        sum += r.error_rate;
        ++hits;
      }
    if (hits == 0) throw std::invalid_argument("mean_error: no matching rows");
    return sum / hits;
  }
};

/// Fraction of mismatched predictions.
template <class Scalar>
double error_rate(const Vector<Scalar>& predictions, const Vector<Scalar>& truths) {
  if (predictions.size() == 0 || predictions.size() != truths.size())
    throw std::invalid_argument("error_rate: empty or mismatched inputs");
  Index wrong = 0;
  for (Index i = 0; i < predictions.size(); ++i)
    if (predictions[i] != truths[i]) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(predictions.size());
}

/// A model entry for sweeps: a display name plus its parameters.
template <class Scalar>
struct ModelSpec {
  std::string name;
  ModelParams<Scalar> params;
};

namespace detail {
inline std::uint64_t mix_seed(std::uint64_t seed, Index count, int trial) {
  // fixed mixing so (seed, count, trial) fully determines the labeling
  return seed * 1000003ULL + static_cast<std::uint64_t>(count) * 1009ULL +
         static_cast<std::uint64_t>(trial);
}
}  // namespace detail

/// Labels k per class on the training pool, trains every model on the
/// identical labeled set, and scores sign predictions on the held-out
/// pool. One row per (model, count, trial); wall time covers fit +
/// predict.
template <class Scalar>
SweepResult sweep_labeled_counts(const Matrix<Scalar>& train_points,
                                 const std::vector<int>& train_classes,
                                 const Matrix<Scalar>& test_points,
                                 const std::vector<int>& test_classes,
                                 const std::vector<ModelSpec<Scalar>>& models,
                                 const std::vector<Index>& counts, int trials,
                                 std::uint64_t seed) {
  if (counts.empty()) throw std::invalid_argument("sweep: empty count list");
  if (trials < 1) throw std::invalid_argument("sweep: trials < 1");
  const LabeledDataset<Scalar> pool = make_unlabeled(train_points);
  const Vector<Scalar> truth = signs_from_classes<Scalar>(test_classes);

  SweepResult out;
  for (Index count : counts) {
    for (int trial = 0; trial < trials; ++trial) {
      const LabeledDataset<Scalar> labeled = label_k_per_class(
          pool, train_classes, count, detail::mix_seed(seed, count, trial));
      for (const auto& spec : models) {
        const auto start = std::chrono::steady_clock::now();
        const Classifier<Scalar> c = fit_model(spec.name, labeled, spec.params);
        Vector<Scalar> pred(test_points.rows());
        for (Index i = 0; i < test_points.rows(); ++i)
          pred[i] = predict_sign(c, test_points.row(i));
        const std::chrono::duration<double> elapsed =
            std::chrono::steady_clock::now() - start;
        out.rows.push_back({spec.name, count, trial, error_rate(pred, truth),
                            elapsed.count()});
      }
    }
  }
  return out;
}

/// Random sample points in a 2-D box, each carrying the classifier's
/// sign — the raw material of the decision-boundary plots.
template <class Scalar>
struct BoundaryGrid {
  Matrix<Scalar> points;
  Vector<Scalar> signs;
  Scalar x_min = 0, x_max = 0, y_min = 0, y_max = 0;
};

template <class Scalar>
BoundaryGrid<Scalar> boundary_grid(const Classifier<Scalar>& c, Scalar x_min,
                                   Scalar x_max, Scalar y_min, Scalar y_max,
                                   Index n_samples, std::uint64_t seed) {
  const Index dim = c.kind == Classifier<Scalar>::Kind::linear
                        ? c.alpha.size()
                        : c.support_points.cols();
  if (dim != 2) throw std::invalid_argument("boundary_grid: classifier is not 2-D");
  if (n_samples < 1) throw std::invalid_argument("boundary_grid: n_samples < 1");
  if (!(x_max > x_min) || !(y_max > y_min))
    throw std::invalid_argument("boundary_grid: empty bounds");

  BoundaryGrid<Scalar> grid;
  grid.x_min = x_min;
  grid.x_max = x_max;
  grid.y_min = y_min;
  grid.y_max = y_max;
  grid.points.resize(n_samples, 2);
  grid.signs.resize(n_samples);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(static_cast<double>(x_min),
                                            static_cast<double>(x_max));
  std::uniform_real_distribution<double> uy(static_cast<double>(y_min),
                                            static_cast<double>(y_max));
  for (Index i = 0; i < n_samples; ++i) {
    grid.points(i, 0) = static_cast<Scalar>(ux(rng));
    grid.points(i, 1) = static_cast<Scalar>(uy(rng));
    grid.signs[i] = predict_sign(c, grid.points.row(i));
  }
  return grid;
}

/// Counts uncolored entries strictly inside the colored span — zero for
/// a contiguous run in index order.
template <class Scalar>
Index contiguity_violations(const Vector<Scalar>& u, Scalar threshold = Scalar(0)) {
  Index first = -1, last = -1;
  for (Index i = 0; i < u.size(); ++i)
    if (std::abs(u[i]) > threshold) {
      if (first < 0) first = i;
      last = i;
    }
  if (first < 0) return 0;
  Index gaps = 0;
  for (Index i = first; i <= last; ++i)
    if (!(std::abs(u[i]) > threshold)) ++gaps;
  return gaps;
}

}  // namespace nhk
