#pragma once

#include "nhk/datasets.hpp"
#include "nhk/diffusion.hpp"
#include "nhk/types.hpp"

#include <cmath>
#include <iostream>
#include <utility>

namespace nhk {

/// Model hyperparameters shared by the regularized least-squares fits.
/// epsilon = 0 picks the median heuristic per distance matrix;
/// steps_per_unit = 0 derives max(1, round(1/epsilon)).
template <class Scalar = double>
struct ModelParams {
  Scalar gamma_a = Scalar(0.00025);
  Scalar gamma_i = Scalar(0.925);
  Scalar epsilon = Scalar(0);
  long diffusion_steps = 1;
  Index knn_k = 5;
  Scalar tau = Scalar(0.5);
  Scalar ridge_jitter = Scalar(0);
  Metric transition_metric = Metric::geodesic;
  int steps_per_unit = 0;

  void validate() const {
    if (!(gamma_a >= Scalar(0))) throw std::invalid_argument("gamma_a < 0");
    if (!(gamma_i >= Scalar(0))) throw std::invalid_argument("gamma_i < 0");
    if (!(epsilon >= Scalar(0))) throw std::invalid_argument("epsilon < 0");
    if (diffusion_steps < 0) throw std::invalid_argument("diffusion steps < 0");
    if (knn_k < 1) throw std::invalid_argument("knn_k < 1");
    if (!(tau > Scalar(0) && tau < Scalar(1))) throw std::invalid_argument("tau outside (0,1)");
    if (!(ridge_jitter >= Scalar(0))) throw std::invalid_argument("ridge_jitter < 0");
    if (steps_per_unit < 0) throw std::invalid_argument("steps_per_unit < 0");
  }
};

/// Penalty (I - P^s)^T (I - P^s) of the diffusion-stability term;
/// symmetric positive semidefinite by construction.
template <class Scalar>
struct PenaltyMatrix {
  Matrix<Scalar> m;
  long s = 0;

  Index size() const { return m.rows(); }
};

/// Trained classifier. Kernel models evaluate the expansion
/// f(x) = sum_i alpha_i exp(-|x_i - x|^2 / epsilon); the linear model
/// evaluates w.x + b with w stored in alpha.
template <class Scalar>
struct Classifier {
  enum class Kind { kernel_expansion, linear };
  Kind kind = Kind::kernel_expansion;
  Vector<Scalar> alpha;
  Matrix<Scalar> support_points;
  Scalar epsilon = Scalar(1);
  Scalar intercept = Scalar(0);
};

namespace detail {

template <class Scalar>
Matrix<Scalar> matrix_power(const Matrix<Scalar>& base, long exponent) {
  const Index n = base.rows();
  Matrix<Scalar> result = Matrix<Scalar>::Identity(n, n);
  Matrix<Scalar> sq = base;
  long e = exponent;
  while (e > 0) {
    if (e & 1) result = result * sq;
    e >>= 1;
    if (e > 0) sq = sq * sq;
  }
  return result;
}

// Solves A x = y by LU with a reciprocal-condition check; adds
// jitter * I once if the first factorization reports ill-conditioning.
template <class Scalar>
Vector<Scalar> solve_checked(Matrix<Scalar> A, const Vector<Scalar>& y, Scalar jitter) {
  constexpr Scalar kRcondFloor = Scalar(1e-14);
  Eigen::PartialPivLU<Matrix<Scalar>> lu(A);
  Scalar rcond = lu.rcond();
  if (!(rcond > kRcondFloor)) {
    if (jitter > Scalar(0)) {
      std::cerr << "nhk: ill-conditioned normal matrix (rcond=" << rcond
                << "), retrying with ridge jitter " << jitter << "\n";
      A.diagonal().array() += jitter;
      lu.compute(A);
      rcond = lu.rcond();
    }
    if (!(rcond > kRcondFloor))
      throw numerical_error("singular or ill-conditioned system (rcond estimate " +
                            std::to_string(static_cast<double>(rcond)) + ")");
  }
  return lu.solve(y);
}

}  // namespace detail

/// (I - P^(t*m))^T (I - P^(t*m)) with m = steps_per_unit, computed by
/// repeated squaring. The rank update keeps the result exactly symmetric.
template <class Scalar>
PenaltyMatrix<Scalar> nhk_penalty_matrix(const TransitionMatrix<Scalar>& P, long t) {
  if (t < 1) throw std::invalid_argument("nhk_penalty_matrix: t < 1");
  const Index n = P.size();
  const long s = t * P.steps_per_unit;
  Matrix<Scalar> residual = Matrix<Scalar>::Identity(n, n) - detail::matrix_power(P.p, s);
  PenaltyMatrix<Scalar> out;
  out.s = s;
  out.m.setZero(n, n);
  out.m.template selfadjointView<Eigen::Lower>().rankUpdate(residual.transpose());
  out.m = Matrix<Scalar>(out.m.template selfadjointView<Eigen::Lower>());
  return out;
}

/// Closed-form coefficients of the diffusion-penalized least squares:
/// (J K + gamma_a l I + gamma_i l / (l+u)^2 M K) alpha = Y.
template <class Scalar>
Classifier<Scalar> nhkrls_fit(const LabeledDataset<Scalar>& ds,
                              const KernelMatrix<Scalar>& K,
                              const PenaltyMatrix<Scalar>& M,
                              const ModelParams<Scalar>& params) {
  const Index n = ds.size();
  const Index l = static_cast<Index>(ds.labeled_idx.size());
  if (l < 1) throw std::invalid_argument("nhkrls_fit: no labeled points");
  if (K.size() != n || M.size() != n)
    throw std::invalid_argument("nhkrls_fit: matrix dimensions disagree");

  Vector<Scalar> mask = Vector<Scalar>::Zero(n);
  for (Index i : ds.labeled_idx) mask[i] = Scalar(1);

  const Scalar weight = params.gamma_i * Scalar(l) / (Scalar(n) * Scalar(n));
  Matrix<Scalar> A = mask.asDiagonal() * K.k;
  A.diagonal().array() += params.gamma_a * Scalar(l);
  if (weight != Scalar(0)) A.noalias() += weight * (M.m * K.k);

  Classifier<Scalar> c;
  c.kind = Classifier<Scalar>::Kind::kernel_expansion;
  c.alpha = detail::solve_checked(std::move(A), ds.labels, params.ridge_jitter);
  c.support_points = ds.points;
  c.epsilon = K.epsilon;
  return c;
}

/// Graph Laplacian L = D - W of a weight matrix (rows sum to ~0).
template <class Scalar>
Matrix<Scalar> graph_laplacian(const Matrix<Scalar>& W) {
  Matrix<Scalar> L = -W;
  L.diagonal() += W.rowwise().sum();
  return L;
}

/// Baseline with the graph-Laplacian manifold term: L = D - W replaces
/// the diffusion penalty, everything else matches nhkrls_fit.
template <class Scalar>
Classifier<Scalar> laprls_fit(const LabeledDataset<Scalar>& ds,
                              const KernelMatrix<Scalar>& K,
                              const Matrix<Scalar>& W,
                              const ModelParams<Scalar>& params) {
  const Index n = ds.size();
  const Index l = static_cast<Index>(ds.labeled_idx.size());
  if (l < 1) throw std::invalid_argument("laprls_fit: no labeled points");
  if (K.size() != n || W.rows() != n || W.cols() != n)
    throw std::invalid_argument("laprls_fit: matrix dimensions disagree");

  Vector<Scalar> mask = Vector<Scalar>::Zero(n);
  for (Index i : ds.labeled_idx) mask[i] = Scalar(1);

  const Scalar weight = params.gamma_i * Scalar(l) / (Scalar(n) * Scalar(n));
  Matrix<Scalar> A = mask.asDiagonal() * K.k;
  A.diagonal().array() += params.gamma_a * Scalar(l);
  if (weight != Scalar(0)) A.noalias() += weight * (graph_laplacian(W) * K.k);

  Classifier<Scalar> c;
  c.kind = Classifier<Scalar>::Kind::kernel_expansion;
  c.alpha = detail::solve_checked(std::move(A), ds.labels, params.ridge_jitter);
  c.support_points = ds.points;
  c.epsilon = K.epsilon;
  return c;
}

/// Gaussian kernel weights restricted to the k-NN graph (zero off the
/// graph and on the diagonal) — the LapRLS adjacency.
template <class Scalar>
Matrix<Scalar> knn_kernel_weights(const KernelMatrix<Scalar>& K,
                                  const KnnGraph<Scalar>& G) {
  if (K.size() != G.size())
    throw std::invalid_argument("knn_kernel_weights: size mismatch");
  Matrix<Scalar> W(K.size(), K.size());
  W.array() = G.adjacency.array().isInf().select(Scalar(0), K.k.array());
  W.diagonal().setZero();
  return W;
}

/// Ordinary least squares on the labeled points only: minimum-norm
/// weights with an unpenalized intercept (data centered before the
/// solve). Underdetermined systems get the pseudoinverse solution.
template <class Scalar>
Classifier<Scalar> ls_fit(const LabeledDataset<Scalar>& ds) {
  const Index l = static_cast<Index>(ds.labeled_idx.size());
  if (l < 1) throw std::invalid_argument("ls_fit: no labeled points");
  const Index d = ds.dim();
  Matrix<Scalar> X(l, d);
  Vector<Scalar> y(l);
  for (Index r = 0; r < l; ++r) {
    X.row(r) = ds.points.row(ds.labeled_idx[static_cast<std::size_t>(r)]);
    y[r] = ds.labels[ds.labeled_idx[static_cast<std::size_t>(r)]];
  }
  const Vector<Scalar> x_mean = X.colwise().mean().transpose();
  const Scalar y_mean = y.mean();
  X.rowwise() -= x_mean.transpose();
  y.array() -= y_mean;

  Eigen::BDCSVD<Matrix<Scalar>> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Classifier<Scalar> c;
  c.kind = Classifier<Scalar>::Kind::linear;
  c.alpha = svd.solve(y);
  c.intercept = y_mean - x_mean.dot(c.alpha);
  return c;
}

/// Raw decision value at a point.
template <class Scalar, class Derived>
Scalar predict(const Classifier<Scalar>& c, const Eigen::MatrixBase<Derived>& x) {
  const Matrix<Scalar> xm = x;  // accept row or column vectors
  const Eigen::Map<const Vector<Scalar>> xv(xm.data(), xm.size());
  if (c.kind == Classifier<Scalar>::Kind::linear) {
    if (xv.size() != c.alpha.size())
      throw std::invalid_argument("predict: dimension mismatch");
    return c.alpha.dot(xv) + c.intercept;
  }
  if (xv.size() != c.support_points.cols())
    throw std::invalid_argument("predict: dimension mismatch");
  const Vector<Scalar> sq =
      (c.support_points.rowwise() - xv.transpose()).rowwise().squaredNorm();
  return c.alpha.dot(Vector<Scalar>((-sq.array() / c.epsilon).exp()));
}

/// Sign prediction; zero maps to +1.
template <class Scalar, class Derived>
Scalar predict_sign(const Classifier<Scalar>& c, const Eigen::MatrixBase<Derived>& x) {
  return predict(c, x) < Scalar(0) ? Scalar(-1) : Scalar(1);
}

/// Decision values for every row of X.
template <class Scalar>
Vector<Scalar> predict_batch(const Classifier<Scalar>& c, const Matrix<Scalar>& X) {
  Vector<Scalar> out(X.rows());
  for (Index i = 0; i < X.rows(); ++i) out[i] = predict(c, X.row(i));
  return out;
}

}  // namespace nhk
