#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nhk/datasets.hpp"
#include "nhk/multiclass.hpp"
#include "nhk/solvers.hpp"

#include <cmath>
#include <numbers>
#include <random>

using nhk::Index;
using Matrix = nhk::Matrix<double>;
using Vector = nhk::Vector<double>;

namespace {

// a classifier that outputs a constant score regardless of input
nhk::Classifier<double> constant_classifier(double score, Index dim = 2) {
  nhk::Classifier<double> c;
  c.kind = nhk::Classifier<double>::Kind::linear;
  c.alpha = Vector::Zero(dim);
  c.intercept = score;
  return c;
}

nhk::OvrModel<double> constant_model(const std::vector<double>& scores) {
  nhk::OvrModel<double> m;
  for (double s : scores) m.classifiers.push_back(constant_classifier(s));
  return m;
}

// ten tight blobs on a circle; each is linearly separable from the rest
std::pair<Matrix, std::vector<int>> blob_pool(Index per_class, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 0.15);
  Matrix pts(10 * per_class, 2);
  std::vector<int> cls(static_cast<std::size_t>(10 * per_class));
  for (int d = 0; d < 10; ++d) {
    const double angle = 2.0 * std::numbers::pi * d / 10.0;
    for (Index i = 0; i < per_class; ++i) {
      const Index row = d * per_class + i;
      pts(row, 0) = 5.0 * std::cos(angle) + noise(rng);
      pts(row, 1) = 5.0 * std::sin(angle) + noise(rng);
      cls[static_cast<std::size_t>(row)] = d;
    }
  }
  return {std::move(pts), std::move(cls)};
}

}  // namespace

TEST_CASE("ovr subsets: paper-scale counts and the remainder rule") {
  auto [pts, cls] = blob_pool(960, 1);
  const auto sub = nhk::make_ovr_subset(pts, cls, 1, 950, 5);
  CHECK(sub.data.size() == 1900);
  CHECK(std::count(sub.true_class.begin(), sub.true_class.end(), 0) == 950);
  CHECK(std::count(sub.true_class.begin(), sub.true_class.end(), 1) == 950);

  // 950 positives + 8*105 + 110 = 1900; digit 9's subset shifts the
  // remainder onto digit 8 and still balances
  const auto sub9 = nhk::make_ovr_subset(pts, cls, 9, 950, 5);
  CHECK(sub9.data.size() == 1900);
  CHECK(std::count(sub9.true_class.begin(), sub9.true_class.end(), 0) == 950);
}

TEST_CASE("ovr subsets: desk scale and errors") {
  auto [pts, cls] = blob_pool(30, 2);
  const auto sub = nhk::make_ovr_subset(pts, cls, 3, 27, 7);
  CHECK(sub.data.size() == 54);  // 27 positives + 9*3 negatives
  CHECK_THROWS_AS(nhk::make_ovr_subset(pts, cls, 12, 27, 7), std::invalid_argument);
  CHECK_THROWS_AS(nhk::make_ovr_subset(pts, cls, 3, 8, 7), std::invalid_argument);
  CHECK_THROWS_AS(nhk::make_ovr_subset(pts, cls, 3, 40, 7), std::invalid_argument);
}

TEST_CASE("ovr_train: LS on separable subsets reaches 99% labeled accuracy") {
  // per-digit trivially separable binary subsets: positives and
  // negatives form two tight, well-separated blobs
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 0.2);
  std::vector<nhk::LabeledDataset<double>> subsets;
  for (int d = 0; d < 10; ++d) {
    const Index per = 18;
    Matrix pts(2 * per, 2);
    Vector labels(2 * per);
    for (Index i = 0; i < per; ++i) {
      pts(i, 0) = d - 3.0 + noise(rng);
      pts(i, 1) = 2.0 + noise(rng);
      labels[i] = 1.0;
      pts(per + i, 0) = d + 3.0 + noise(rng);
      pts(per + i, 1) = -2.0 + noise(rng);
      labels[per + i] = -1.0;
    }
    subsets.push_back(nhk::make_dataset(pts, labels));
  }
  const auto model = nhk::ovr_train<double>(
      subsets, [](const nhk::LabeledDataset<double>& ds) { return nhk::ls_fit(ds); });

  for (int d = 0; d < 10; ++d) {
    const auto& sub = subsets[static_cast<std::size_t>(d)];
    Index correct = 0;
    for (Index i = 0; i < sub.size(); ++i)
      if (nhk::predict_sign(model.classifiers[static_cast<std::size_t>(d)],
                            sub.points.row(i)) == sub.labels[i])
        ++correct;
    CHECK(static_cast<double>(correct) / static_cast<double>(sub.size()) >= 0.99);
  }

  // determinism: identical inputs give identical coefficient vectors
  const auto model2 = nhk::ovr_train<double>(
      subsets, [](const nhk::LabeledDataset<double>& ds) { return nhk::ls_fit(ds); });
  for (int d = 0; d < 10; ++d)
    CHECK(model.classifiers[static_cast<std::size_t>(d)].alpha ==
          model2.classifiers[static_cast<std::size_t>(d)].alpha);

  subsets.pop_back();
  CHECK_THROWS_AS(nhk::ovr_train<double>(subsets,
                                         [](const nhk::LabeledDataset<double>& ds) {
                                           return nhk::ls_fit(ds);
                                         }),
                  std::invalid_argument);
}

TEST_CASE("ovr_predict: argmax, ties, shift and scale invariance") {
  std::vector<double> scores{0.1, 0.9, 0.3, 0.0, -0.2, 0.5, 0.0, 0.1, 0.2, 0.3};
  const auto m = constant_model(scores);
  Vector x(2);
  x << 0.0, 0.0;
  CHECK(nhk::ovr_predict(m, x) == 1);

  const auto equal = constant_model(std::vector<double>(10, 0.7));
  CHECK(nhk::ovr_predict(equal, x) == 0);  // ties go to the lowest digit

  std::vector<double> scaled;
  for (double s : scores) scaled.push_back(3.5 * s);
  CHECK(nhk::ovr_predict(constant_model(scaled), x) == 1);

  std::vector<double> shifted;
  for (double s : scores) shifted.push_back(s + 11.0);
  CHECK(nhk::ovr_predict(constant_model(shifted), x) == 1);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> s(10);
    for (auto& v : s) v = u(rng);
    const int pred = nhk::ovr_predict(constant_model(s), x);
    CHECK(pred >= 0);
    CHECK(pred <= 9);
  }

  // dimension mismatch propagates from predict
  nhk::OvrModel<double> strict;
  for (int d = 0; d < 10; ++d) {
    nhk::Classifier<double> c;
    c.kind = nhk::Classifier<double>::Kind::linear;
    c.alpha = Vector::Ones(2);
    strict.classifiers.push_back(c);
  }
  Vector bad(3);
  bad.setZero();
  CHECK_THROWS_AS(nhk::ovr_predict(strict, bad), std::invalid_argument);
}
