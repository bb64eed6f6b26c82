#pragma once

#include "nhk/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nhk {

/// Symmetric pairwise distances with zero diagonal; geodesic matrices may
/// hold +inf for disconnected pairs.
template <class Scalar>
struct DistanceMatrix {
  Matrix<Scalar> d;
  Metric metric = Metric::euclidean;

  Index size() const { return d.rows(); }
};

/// k-NN adjacency: w(i,j) = d(i,j) when either endpoint picked the edge,
/// +inf otherwise; zero diagonal.
template <class Scalar>
struct KnnGraph {
  Matrix<Scalar> adjacency;
  Index k = 0;

  Index size() const { return adjacency.rows(); }
};

/// Euclidean distances between rows of a point matrix. Frobenius distance
/// on images equals the Euclidean distance of the flattened rows, so one
/// routine serves both; pass `metric` to tag the result.
template <class Derived>
DistanceMatrix<typename Derived::Scalar> pairwise_distances(
    const Eigen::MatrixBase<Derived>& points, Metric metric = Metric::euclidean) {
  using Scalar = typename Derived::Scalar;
  const Index n = points.rows();
  if (n == 0) throw std::invalid_argument("pairwise_distances: empty point set");
  DistanceMatrix<Scalar> out;
  out.metric = metric;
  out.d.setZero(n, n);
  const Matrix<Scalar> pts = points;  // materialize once
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const Scalar dij = (pts.row(i) - pts.row(j)).norm();
      out.d(i, j) = dij;
      out.d(j, i) = dij;
    }
  return out;
}

/// Keeps the k smallest off-diagonal distances per row (ties broken by
/// lower index) and symmetrizes by union.
template <class Scalar>
KnnGraph<Scalar> knn_graph(const DistanceMatrix<Scalar>& D, Index k) {
  const Index n = D.size();
  if (k < 1 || k > n - 1) throw std::invalid_argument("knn_graph: k out of range");
  const Scalar inf = infinity<Scalar>();
  KnnGraph<Scalar> g;
  g.k = k;
  g.adjacency = Matrix<Scalar>::Constant(n, n, inf);
  g.adjacency.diagonal().setZero();

  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    order.clear();
    for (Index j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](Index a, Index b) {
                        if (D.d(i, a) != D.d(i, b)) return D.d(i, a) < D.d(i, b);
                        return a < b;
                      });
    for (Index t = 0; t < k; ++t) {
      const Index j = order[static_cast<std::size_t>(t)];
      g.adjacency(i, j) = D.d(i, j);
      g.adjacency(j, i) = D.d(i, j);
    }
  }
  return g;
}

/// Classic all-pairs shortest paths: full relaxation over every
/// intermediate vertex. Disconnected pairs stay +inf.
template <class Scalar>
DistanceMatrix<Scalar> floyd_warshall(const KnnGraph<Scalar>& G) {
  const Index n = G.size();
  DistanceMatrix<Scalar> out;
  out.metric = Metric::geodesic;
  out.d = G.adjacency;
  auto& dist = out.d;
  for (Index k = 0; k < n; ++k)
    for (Index i = 0; i < n; ++i) {
      const Scalar dik = dist(i, k);
      if (std::isinf(dik)) continue;
      for (Index j = 0; j < n; ++j) {
        const Scalar through = dik + dist(k, j);
        if (through < dist(i, j)) dist(i, j) = through;
      }
    }
  return out;
}

/// Whole-matrix form of the relaxation: one pass per intermediate vertex,
/// Dist = min(Dist, col_i + row_i). With passes = n this equals
/// floyd_warshall exactly; fewer passes reproduce the truncated variant
/// that only relaxes paths through the first `passes` vertices.
template <class Scalar>
DistanceMatrix<Scalar> floyd_warshall_matrix_form(const KnnGraph<Scalar>& G,
                                                  Index passes) {
  const Index n = G.size();
  if (passes < 1 || passes > n)
    throw std::invalid_argument("floyd_warshall_matrix_form: passes out of range");
  DistanceMatrix<Scalar> out;
  out.metric = Metric::geodesic;
  out.d = G.adjacency;
  auto& dist = out.d;
  Matrix<Scalar> through(n, n);
  for (Index i = 0; i < passes; ++i) {
    // row/column i are fixed points of pass i (zero diagonal, no negative
    // edges), so computing `through` from the current matrix matches the
    // in-place triple loop bit for bit.
    through = dist.col(i).replicate(1, n) + dist.row(i).replicate(n, 1);
    dist = dist.cwiseMin(through);
  }
  return out;
}

}  // namespace nhk
