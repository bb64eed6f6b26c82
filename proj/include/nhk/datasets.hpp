#pragma once

#include "nhk/types.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <random>
#include <utility>

namespace nhk {

/// Points (one per row), labels in {-1, 0, +1}, and the labeled/unlabeled
/// index partition. labels[i] != 0 exactly for i in labeled_idx.
template <class Scalar>
struct LabeledDataset {
  Matrix<Scalar> points;
  Vector<Scalar> labels;
  std::vector<Index> labeled_idx;
  std::vector<Index> unlabeled_idx;

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }
};

/// Rebuilds the partition from a label vector. Throws if a label is not
/// -1, 0 or +1.
template <class Scalar>
LabeledDataset<Scalar> make_dataset(Matrix<Scalar> points, Vector<Scalar> labels) {
  if (points.rows() != labels.size())
    throw std::invalid_argument("make_dataset: points/labels size mismatch");
  LabeledDataset<Scalar> ds;
  ds.points = std::move(points);
  ds.labels = std::move(labels);
  for (Index i = 0; i < ds.labels.size(); ++i) {
    const Scalar y = ds.labels[i];
    if (y == Scalar(0))
      ds.unlabeled_idx.push_back(i);
    else if (y == Scalar(1) || y == Scalar(-1))
      ds.labeled_idx.push_back(i);
    else
      throw std::invalid_argument("make_dataset: label not in {-1,0,+1}");
  }
  return ds;
}

template <class Scalar>
LabeledDataset<Scalar> make_unlabeled(Matrix<Scalar> points) {
  Vector<Scalar> zero = Vector<Scalar>::Zero(points.rows());
  return make_dataset<Scalar>(std::move(points), std::move(zero));
}

/// A generated dataset together with its ground-truth class per point
/// (class ids are generator-specific; binary tasks map the smaller id
/// to +1, the larger to -1).
template <class Scalar>
struct GeneratedDataset {
  LabeledDataset<Scalar> data;
  std::vector<int> true_class;
};

namespace detail {

template <class Scalar>
void add_gaussian_noise(Matrix<Scalar>& pts, Scalar stdev, std::mt19937_64& rng) {
  if (stdev <= Scalar(0)) return;
  std::normal_distribution<double> dist(0.0, static_cast<double>(stdev));
  for (Index i = 0; i < pts.rows(); ++i)
    for (Index j = 0; j < pts.cols(); ++j)
      pts(i, j) += static_cast<Scalar>(dist(rng));
}

inline void require_even_pair_count(Index n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("generator: n must be even and >= 2");
}

}  // namespace detail

/// Two interleaving half-circles of unit radius, n/2 points each; the
/// lower moon is the reflected arc shifted by (+0.5, -0.25). Class 0 is
/// the upper moon. All labels start at 0.
template <class Scalar = double>
GeneratedDataset<Scalar> generate_two_moons(Index n, Scalar noise, std::uint64_t seed) {
  detail::require_even_pair_count(n);
  if (noise < Scalar(0)) throw std::invalid_argument("generate_two_moons: noise < 0");
  const Index m = n / 2;
  Matrix<Scalar> pts(n, 2);
  std::vector<int> cls(static_cast<std::size_t>(n));
  for (Index i = 0; i < m; ++i) {
    const double theta = (m == 1) ? 0.0 : std::numbers::pi * double(i) / double(m - 1);
    pts(i, 0) = static_cast<Scalar>(std::cos(theta));
    pts(i, 1) = static_cast<Scalar>(std::sin(theta));
    cls[static_cast<std::size_t>(i)] = 0;
    pts(m + i, 0) = static_cast<Scalar>(std::cos(theta) + 0.5);
    pts(m + i, 1) = static_cast<Scalar>(-std::sin(theta) - 0.25);
    cls[static_cast<std::size_t>(m + i)] = 1;
  }
  std::mt19937_64 rng(seed);
  detail::add_gaussian_noise(pts, noise, rng);
  return {make_unlabeled(std::move(pts)), std::move(cls)};
}

/// Concentric circles: n/2 points at radius 1 (class 0) and n/2 at
/// radius 2 (class 1), evenly spaced in angle, Gaussian noise per
/// coordinate.
template <class Scalar = double>
GeneratedDataset<Scalar> generate_ring(Index n, Scalar noise, std::uint64_t seed) {
  detail::require_even_pair_count(n);
  if (noise < Scalar(0)) throw std::invalid_argument("generate_ring: noise < 0");
  const Index m = n / 2;
  Matrix<Scalar> pts(n, 2);
  std::vector<int> cls(static_cast<std::size_t>(n));
  for (Index i = 0; i < m; ++i) {
    const double phi = 2.0 * std::numbers::pi * double(i) / double(m);
    pts(i, 0) = static_cast<Scalar>(std::cos(phi));
    pts(i, 1) = static_cast<Scalar>(std::sin(phi));
    cls[static_cast<std::size_t>(i)] = 0;
    pts(m + i, 0) = static_cast<Scalar>(2.0 * std::cos(phi));
    pts(m + i, 1) = static_cast<Scalar>(2.0 * std::sin(phi));
    cls[static_cast<std::size_t>(m + i)] = 1;
  }
  std::mt19937_64 rng(seed);
  detail::add_gaussian_noise(pts, noise, rng);
  return {make_unlabeled(std::move(pts)), std::move(cls)};
}

/// Two isotropic Gaussian blobs centered at (-2, 0) (class 0) and
/// (+2, 0) (class 1); `noise` is the blob standard deviation.
template <class Scalar = double>
GeneratedDataset<Scalar> generate_two_clusters(Index n, Scalar noise, std::uint64_t seed) {
  detail::require_even_pair_count(n);
  if (noise < Scalar(0)) throw std::invalid_argument("generate_two_clusters: noise < 0");
  const Index m = n / 2;
  Matrix<Scalar> pts(n, 2);
  std::vector<int> cls(static_cast<std::size_t>(n));
  for (Index i = 0; i < m; ++i) {
    pts(i, 0) = Scalar(-2);
    pts(i, 1) = Scalar(0);
    cls[static_cast<std::size_t>(i)] = 0;
    pts(m + i, 0) = Scalar(2);
    pts(m + i, 1) = Scalar(0);
    cls[static_cast<std::size_t>(m + i)] = 1;
  }
  std::mt19937_64 rng(seed);
  detail::add_gaussian_noise(pts, noise, rng);
  return {make_unlabeled(std::move(pts)), std::move(cls)};
}

/// Archimedean spiral r = theta/(2*pi) sampled at n evenly spaced
/// parameter values over [0, 2*pi*turns]. Row order is the curve order,
/// which downstream contiguity checks rely on. All points are class 0.
template <class Scalar = double>
GeneratedDataset<Scalar> generate_spiral(Index n, Scalar turns, std::uint64_t seed) {
  (void)seed;  // noiseless curve; kept for signature uniformity
  if (n < 2) throw std::invalid_argument("generate_spiral: n < 2");
  if (!(turns > Scalar(0))) throw std::invalid_argument("generate_spiral: turns <= 0");
  const double theta_max = 2.0 * std::numbers::pi * static_cast<double>(turns);
  Matrix<Scalar> pts(n, 2);
  std::vector<int> cls(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < n; ++i) {
    const double theta = theta_max * double(i) / double(n - 1);
    const double r = theta / (2.0 * std::numbers::pi);
    pts(i, 0) = static_cast<Scalar>(r * std::cos(theta));
    pts(i, 1) = static_cast<Scalar>(r * std::sin(theta));
  }
  return {make_unlabeled(std::move(pts)), std::move(cls)};
}

/// Marks k points per class as labeled (sampled uniformly without
/// replacement), mapping the smaller class id to +1 and the larger to
/// -1. Everything else becomes unlabeled.
template <class Scalar>
LabeledDataset<Scalar> label_k_per_class(const LabeledDataset<Scalar>& ds,
                                         const std::vector<int>& true_classes,
                                         Index k_per_class, std::uint64_t seed) {
  if (static_cast<Index>(true_classes.size()) != ds.size())
    throw std::invalid_argument("label_k_per_class: class vector size mismatch");
  if (k_per_class < 1) throw std::invalid_argument("label_k_per_class: k < 1");

  std::vector<int> ids(true_classes);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() != 2)
    throw std::invalid_argument("label_k_per_class: expected exactly 2 classes");

  Vector<Scalar> labels = Vector<Scalar>::Zero(ds.size());
  std::mt19937_64 rng(seed);
  for (std::size_t c = 0; c < ids.size(); ++c) {
    std::vector<Index> members;
    for (Index i = 0; i < ds.size(); ++i)
      if (true_classes[static_cast<std::size_t>(i)] == ids[c]) members.push_back(i);
    if (static_cast<Index>(members.size()) < k_per_class)
      throw std::invalid_argument("label_k_per_class: class smaller than k");
    std::vector<Index> chosen;
    std::sample(members.begin(), members.end(), std::back_inserter(chosen),
                k_per_class, rng);
    const Scalar sign = (c == 0) ? Scalar(1) : Scalar(-1);
    for (Index i : chosen) labels[i] = sign;
  }
  return make_dataset(ds.points, std::move(labels));
}

/// Maps ground-truth class ids of a binary task onto the +1/-1 coding
/// used by label_k_per_class (smaller id -> +1).
template <class Scalar = double>
Vector<Scalar> signs_from_classes(const std::vector<int>& classes) {
  std::vector<int> ids(classes);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.size() != 2)
    throw std::invalid_argument("signs_from_classes: expected exactly 2 classes");
  Vector<Scalar> out(static_cast<Index>(classes.size()));
  for (std::size_t i = 0; i < classes.size(); ++i)
    out[static_cast<Index>(i)] = classes[i] == ids[0] ? Scalar(1) : Scalar(-1);
  return out;
}

// ---------------------------------------------------------------------------
// IDX files (big-endian, magic 0x00000803 for images, 0x00000801 for labels)

namespace detail {

inline std::uint32_t read_be32(std::istream& in, const std::string& path) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw io_error("truncated IDX file: " + path);
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
         (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

inline void write_be32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v >> 24),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<char*>(b), 4);
}

}  // namespace detail

constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

/// IDX3 images + IDX1 labels, pixels scaled to [0,1], one flattened
/// image per row. Image and label counts must agree.
template <class Scalar = double>
std::pair<Matrix<Scalar>, std::vector<int>> load_idx(const std::string& images_path,
                                                     const std::string& labels_path) {
  std::ifstream img(images_path, std::ios::binary);
  if (!img) throw io_error("cannot open " + images_path);
  if (detail::read_be32(img, images_path) != kIdxImagesMagic)
    throw format_error("bad IDX image magic in " + images_path);
  const std::uint32_t n = detail::read_be32(img, images_path);
  const std::uint32_t rows = detail::read_be32(img, images_path);
  const std::uint32_t cols = detail::read_be32(img, images_path);
  const std::size_t dim = std::size_t(rows) * cols;
  std::vector<unsigned char> buf(dim);
  Matrix<Scalar> pts(static_cast<Index>(n), static_cast<Index>(dim));
  for (std::uint32_t i = 0; i < n; ++i) {
    img.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(dim));
    if (!img) throw io_error("truncated IDX file: " + images_path);
    for (std::size_t j = 0; j < dim; ++j)
      pts(static_cast<Index>(i), static_cast<Index>(j)) = Scalar(buf[j]) / Scalar(255);
  }

  std::ifstream lab(labels_path, std::ios::binary);
  if (!lab) throw io_error("cannot open " + labels_path);
  if (detail::read_be32(lab, labels_path) != kIdxLabelsMagic)
    throw format_error("bad IDX label magic in " + labels_path);
  const std::uint32_t nl = detail::read_be32(lab, labels_path);
  if (nl != n)
    throw consistency_error("image/label count mismatch: " + std::to_string(n) +
                            " vs " + std::to_string(nl));
  std::vector<int> classes(nl);
  for (std::uint32_t i = 0; i < nl; ++i) {
    char c;
    lab.read(&c, 1);
    if (!lab) throw io_error("truncated IDX file: " + labels_path);
    classes[i] = static_cast<unsigned char>(c);
  }
  return {std::move(pts), std::move(classes)};
}

/// Writes raw byte images (row-major, one image per `rows*cols` chunk).
inline void write_idx_images(const std::string& path,
                             const std::vector<unsigned char>& pixels,
                             std::uint32_t count, std::uint32_t rows,
                             std::uint32_t cols) {
  if (pixels.size() != std::size_t(count) * rows * cols)
    throw std::invalid_argument("write_idx_images: pixel buffer size mismatch");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  detail::write_be32(out, kIdxImagesMagic);
  detail::write_be32(out, count);
  detail::write_be32(out, rows);
  detail::write_be32(out, cols);
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) throw io_error("write failed: " + path);
}

inline void write_idx_labels(const std::string& path,
                             const std::vector<unsigned char>& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot open " + path + " for writing");
  detail::write_be32(out, kIdxLabelsMagic);
  detail::write_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
  if (!out) throw io_error("write failed: " + path);
}

}  // namespace nhk
