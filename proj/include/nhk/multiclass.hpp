#pragma once

#include "nhk/datasets.hpp"
#include "nhk/solvers.hpp"

#include <functional>
#include <random>
#include <vector>

namespace nhk {

/// One-vs-rest ensemble: classifier i recognizes digit i.
template <class Scalar>
struct OvrModel {
  std::vector<Classifier<Scalar>> classifiers;
};

template <class Scalar>
using FitFn = std::function<Classifier<Scalar>(const LabeledDataset<Scalar>&)>;

/// Trains the ten binary classifiers, one per digit subset, in digit
/// order.
template <class Scalar>
OvrModel<Scalar> ovr_train(const std::vector<LabeledDataset<Scalar>>& subsets,
                           const FitFn<Scalar>& fit) {
  if (subsets.size() != 10)
    throw std::invalid_argument("ovr_train: expected 10 subsets");
  OvrModel<Scalar> model;
  model.classifiers.reserve(10);
  for (const auto& s : subsets) model.classifiers.push_back(fit(s));
  return model;
}

/// Argmax over the ten raw scores; ties resolve to the lowest digit.
template <class Scalar, class Derived>
int ovr_predict(const OvrModel<Scalar>& model, const Eigen::MatrixBase<Derived>& x) {
  int best = 0;
  Scalar best_score = predict(model.classifiers[0], x);
  for (int i = 1; i < 10; ++i) {
    const Scalar s = predict(model.classifiers[static_cast<std::size_t>(i)], x);
    if (s > best_score) {
      best_score = s;
      best = i;
    }
  }
  return best;
}

/// One digit's one-vs-rest pool: `positives` samples of the digit plus
/// floor(positives/9) of each other digit, remainder added to the
/// largest other digit so positives and negatives balance. Binary class
/// ids are 0 (the digit) and 1 (the rest); labels start at 0.
template <class Scalar>
GeneratedDataset<Scalar> make_ovr_subset(const Matrix<Scalar>& points,
                                         const std::vector<int>& classes, int digit,
                                         Index positives, std::uint64_t seed) {
  if (digit < 0 || digit > 9) throw std::invalid_argument("make_ovr_subset: bad digit");
  if (positives < 9) throw std::invalid_argument("make_ovr_subset: positives < 9");
  const Index base = positives / 9;
  const Index remainder = positives - 9 * base;

  std::mt19937_64 rng(seed);
  std::vector<Index> rows;
  std::vector<int> binary;
  auto take = [&](int cls, Index count, int binary_id) {
    std::vector<Index> members;
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (classes[i] == cls) members.push_back(static_cast<Index>(i));
    if (static_cast<Index>(members.size()) < count)
      throw std::invalid_argument("make_ovr_subset: class " + std::to_string(cls) +
                                  " smaller than requested count");
    std::vector<Index> chosen;
    std::sample(members.begin(), members.end(), std::back_inserter(chosen), count, rng);
    for (Index r : chosen) {
      rows.push_back(r);
      binary.push_back(binary_id);
    }
  };

  take(digit, positives, 0);
  int largest_other = digit == 9 ? 8 : 9;
  for (int c = 0; c <= 9; ++c) {
    if (c == digit) continue;
    take(c, c == largest_other ? base + remainder : base, 1);
  }

  Matrix<Scalar> pts(static_cast<Index>(rows.size()), points.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) pts.row(static_cast<Index>(i)) = points.row(rows[i]);
  return {make_unlabeled(std::move(pts)), std::move(binary)};
}

}  // namespace nhk
