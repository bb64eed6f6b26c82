#pragma once

#include "nhk/datasets.hpp"
#include "nhk/diffusion.hpp"
#include "nhk/metric.hpp"
#include "nhk/solvers.hpp"

#include <string>

namespace nhk {

/// Transition matrix of a point set under the requested metric:
/// geodesic runs k-NN + all-pairs shortest paths first, euclidean
/// kernels the raw distances. epsilon = 0 picks the median heuristic on
/// the distance matrix actually used.
template <class Scalar>
TransitionMatrix<Scalar> build_transition(const Matrix<Scalar>& points,
                                          const ModelParams<Scalar>& params) {
  DistanceMatrix<Scalar> dist = pairwise_distances(points);
  if (params.transition_metric == Metric::geodesic) {
    const KnnGraph<Scalar> graph = knn_graph(dist, params.knn_k);
    dist = floyd_warshall(graph);
  }
  const Scalar eps = params.epsilon > Scalar(0) ? params.epsilon : median_epsilon(dist);
  return transition_matrix(gaussian_kernel_matrix(dist, eps), params.steps_per_unit);
}

/// End-to-end training for one model name. "nhkrls" runs the full
/// sequence: transition matrix, t clamped diffusion steps, relabeling at
/// tau, then the closed-form solve with the diffusion penalty. "laprls"
/// solves with the k-NN graph Laplacian on the original labels; "ls" is
/// the linear baseline.
template <class Scalar>
Classifier<Scalar> fit_model(const std::string& name, const LabeledDataset<Scalar>& ds,
                             const ModelParams<Scalar>& params) {
  params.validate();
  if (name == "ls") return ls_fit(ds);

  const DistanceMatrix<Scalar> euclid = pairwise_distances(ds.points);
  const Scalar eps_k =
      params.epsilon > Scalar(0) ? params.epsilon : median_epsilon(euclid);
  const KernelMatrix<Scalar> K = gaussian_kernel_matrix(euclid, eps_k);

  if (name == "laprls") {
    const KnnGraph<Scalar> graph = knn_graph(euclid, params.knn_k);
    return laprls_fit(ds, K, knn_kernel_weights(K, graph), params);
  }
  if (name == "nhkrls") {
    const TransitionMatrix<Scalar> P = build_transition(ds.points, params);
    PropagationState<Scalar> state = initial_state(ds);
    state = propagate(P, state, params.diffusion_steps);
    const LabeledDataset<Scalar> grown = relabel_from_propagation(ds, state, params.tau);
    const PenaltyMatrix<Scalar> M = nhk_penalty_matrix(P, params.diffusion_steps);
    return nhkrls_fit(grown, K, M, params);
  }
  throw std::invalid_argument("fit_model: unknown model '" + name + "'");
}

}  // namespace nhk
