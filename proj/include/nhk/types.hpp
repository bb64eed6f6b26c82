#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nhk {

using Index = Eigen::Index;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
constexpr Scalar infinity() {
  return std::numeric_limits<Scalar>::infinity();
}

/// Which distance produced a matrix or kernel.
enum class Metric { euclidean, frobenius, geodesic };

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::euclidean: return "euclidean";
    case Metric::frobenius: return "frobenius";
    case Metric::geodesic: return "geodesic";
  }
  return "?";
}

// Error taxonomy. std::invalid_argument covers precondition violations;
// the types below distinguish data-dependent failures.
struct io_error : std::runtime_error {
  explicit io_error(const std::string& what) : std::runtime_error(what) {}
};
struct format_error : std::runtime_error {
  explicit format_error(const std::string& what) : std::runtime_error(what) {}
};
struct consistency_error : std::runtime_error {
  explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};
struct degenerate_input : std::runtime_error {
  explicit degenerate_input(const std::string& what) : std::runtime_error(what) {}
};
struct numerical_error : std::runtime_error {
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nhk
