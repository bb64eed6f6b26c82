#pragma once

#include "nhk/datasets.hpp"
#include "nhk/metric.hpp"
#include "nhk/types.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace nhk {

/// Gaussian similarity matrix K(i,j) = exp(-d(i,j)^2 / epsilon); entries
/// are exactly 0 for +inf distances and the diagonal is exactly 1.
template <class Scalar>
struct KernelMatrix {
  Matrix<Scalar> k;
  Scalar epsilon = Scalar(0);
  Metric source = Metric::euclidean;

  Index size() const { return k.rows(); }
};

/// Row-stochastic diffusion matrix P(i,j) = K(i,j) / sum_j K(i,j).
/// steps_per_unit is the integer realization of the 1/epsilon exponent:
/// one diffusion step applies P that many times.
template <class Scalar>
struct TransitionMatrix {
  Matrix<Scalar> p;
  int steps_per_unit = 1;

  Index size() const { return p.rows(); }
};

/// Label propagation state: u(.,t) plus the clamped (labeled) indices
/// whose values are re-imposed after every step.
template <class Scalar>
struct PropagationState {
  Vector<Scalar> u;
  std::vector<Index> clamp_idx;
  Vector<Scalar> clamp_values;
  long t = 0;
};

template <class Scalar>
KernelMatrix<Scalar> gaussian_kernel_matrix(const DistanceMatrix<Scalar>& D,
                                            Scalar epsilon) {
  if (!(epsilon > Scalar(0)))
    throw std::invalid_argument("gaussian_kernel_matrix: epsilon <= 0");
  KernelMatrix<Scalar> out;
  out.epsilon = epsilon;
  out.source = D.metric;
  // scalar std::exp, not Eigen's vectorized exp: the SIMD path clamps
  // large negative arguments to the smallest normal instead of
  // underflowing, which would leave disconnected pairs with nonzero
  // similarity
  out.k = D.d.unaryExpr([epsilon](Scalar d) -> Scalar {
    if (std::isinf(d)) return Scalar(0);
    return std::exp(-d * d / epsilon);
  });
  out.k.diagonal().setOnes();
  return out;
}

/// Median of the finite off-diagonal squared distances — the default
/// kernel bandwidth when none is given.
template <class Scalar>
Scalar median_epsilon(const DistanceMatrix<Scalar>& D) {
  const Index n = D.size();
  if (n < 2) throw std::invalid_argument("median_epsilon: need at least 2 points");
  std::vector<Scalar> sq;
  sq.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::isfinite(D.d(i, j))) sq.push_back(D.d(i, j) * D.d(i, j));
  if (sq.empty()) throw degenerate_input("median_epsilon: no finite distances");
  std::sort(sq.begin(), sq.end());
  const std::size_t m = sq.size();
  const Scalar med = (m % 2 == 1) ? sq[m / 2] : (sq[m / 2 - 1] + sq[m / 2]) / Scalar(2);
  if (!(med > Scalar(0)))
    throw degenerate_input("median_epsilon: points coincide (median distance 0)");
  return med;
}

inline int steps_per_unit_for(double epsilon) {
  return std::max(1, static_cast<int>(std::llround(1.0 / epsilon)));
}

/// Row-normalizes a kernel matrix. steps_per_unit_override = 0 derives
/// max(1, round(1/epsilon)) from the kernel bandwidth.
template <class Scalar>
TransitionMatrix<Scalar> transition_matrix(const KernelMatrix<Scalar>& K,
                                           int steps_per_unit_override = 0) {
  TransitionMatrix<Scalar> out;
  const Vector<Scalar> degree = K.k.rowwise().sum();
  if ((degree.array() <= Scalar(0)).any())
    throw degenerate_input("transition_matrix: zero cumulative similarity row");
  out.p = (K.k.array().colwise() / degree.array()).matrix();
  out.steps_per_unit = steps_per_unit_override > 0
                           ? steps_per_unit_override
                           : steps_per_unit_for(static_cast<double>(K.epsilon));
  return out;
}

/// Initial propagation state of a dataset: u = labels, clamps at the
/// labeled indices.
template <class Scalar>
PropagationState<Scalar> initial_state(const LabeledDataset<Scalar>& ds) {
  PropagationState<Scalar> s;
  s.u = ds.labels;
  s.clamp_idx = ds.labeled_idx;
  s.clamp_values.resize(static_cast<Index>(ds.labeled_idx.size()));
  for (std::size_t i = 0; i < ds.labeled_idx.size(); ++i)
    s.clamp_values[static_cast<Index>(i)] = ds.labels[ds.labeled_idx[i]];
  return s;
}

/// One diffusion step is steps_per_unit matrix-vector applications of P
/// followed by re-imposing the clamped values; `steps` of those are run.
template <class Scalar>
PropagationState<Scalar> propagate(const TransitionMatrix<Scalar>& P,
                                   const PropagationState<Scalar>& state,
                                   long steps) {
  const Index n = P.size();
  if (state.u.size() != n)
    throw std::invalid_argument("propagate: state/transition size mismatch");
  if (steps < 0) throw std::invalid_argument("propagate: negative step count");
  for (Index i : state.clamp_idx)
    if (i < 0 || i >= n) throw std::invalid_argument("propagate: clamp index out of range");
  PropagationState<Scalar> s = state;
  Vector<Scalar> next(n);
  for (long step = 0; step < steps; ++step) {
    for (int a = 0; a < P.steps_per_unit; ++a) {
      next.noalias() = P.p * s.u;
      s.u.swap(next);
    }
    for (std::size_t c = 0; c < s.clamp_idx.size(); ++c)
      s.u[s.clamp_idx[c]] = s.clamp_values[static_cast<Index>(c)];
  }
  s.t = state.t + steps;
  return s;
}

/// Promotes every index with |u| >= tau to a labeled point carrying
/// sign(u); originally clamped indices keep their labels, the rest stay
/// unlabeled.
template <class Scalar>
LabeledDataset<Scalar> relabel_from_propagation(const LabeledDataset<Scalar>& ds,
                                                const PropagationState<Scalar>& state,
                                                Scalar tau) {
  if (!(tau > Scalar(0) && tau < Scalar(1)))
    throw std::invalid_argument("relabel_from_propagation: tau outside (0,1)");
  if (state.u.size() != ds.size())
    throw std::invalid_argument("relabel_from_propagation: state size mismatch");
  Vector<Scalar> labels = Vector<Scalar>::Zero(ds.size());
  for (std::size_t c = 0; c < state.clamp_idx.size(); ++c)
    labels[state.clamp_idx[c]] = state.clamp_values[static_cast<Index>(c)];
  for (Index i = 0; i < ds.size(); ++i) {
    if (labels[i] != Scalar(0)) continue;
    const Scalar v = state.u[i];
    if (std::abs(v) >= tau) labels[i] = v > Scalar(0) ? Scalar(1) : Scalar(-1);
  }
  return make_dataset(ds.points, std::move(labels));
}

}  // namespace nhk
