#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace manitomo {

/// Pixels x channels, one row per pixel in row-major (i, j) order.
template <typename Scalar>
using FieldMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

/**
 * Square pixel grid covering [-extent, extent]^2.
 *
 * Pixel (i, j) has its center at x = -extent + (j + 0.5) h and
 * y = extent - (i + 0.5) h: the origin is the top-left pixel and the
 * physical y axis points up.
 */
template <typename Scalar>
class BasicGrid {
public:
  BasicGrid() = default;

  BasicGrid(int size, Scalar extent) : size_(size), extent_(extent) {
    if (size < 2) {
      throw std::invalid_argument("grid size must be at least 2, got " + std::to_string(size));
    }
    if (!(extent > Scalar(0)) || !std::isfinite(static_cast<double>(extent))) {
      throw std::invalid_argument("grid extent must be positive and finite");
    }
  }

  int height() const { return size_; }
  int width() const { return size_; }
  int pixels() const { return size_ * size_; }
  Scalar extent() const { return extent_; }
  Scalar spacing() const { return Scalar(2) * extent_ / Scalar(size_); }
  Scalar pixel_area() const { return spacing() * spacing(); }
  Scalar area() const { return Scalar(4) * extent_ * extent_; }

  /// Radius of the smallest centered disk containing the domain.
  Scalar radius() const { return extent_ * std::numbers::sqrt2_v<Scalar>; }

  int index(int i, int j) const { return i * size_ + j; }

  Vector2<Scalar> center(int i, int j) const {
    const Scalar h = spacing();
    return {-extent_ + (Scalar(j) + Scalar(0.5)) * h, extent_ - (Scalar(i) + Scalar(0.5)) * h};
  }

  bool operator==(const BasicGrid&) const = default;

private:
  int size_ = 2;
  Scalar extent_ = Scalar(1);
};

template <typename Scalar = double>
BasicGrid<Scalar> make_grid(int size, Scalar extent = Scalar(1)) {
  return BasicGrid<Scalar>(size, extent);
}

template <typename Scalar>
class BasicVectorField {
public:
  BasicVectorField() = default;

  BasicVectorField(const BasicGrid<Scalar>& grid, int channels)
      : grid_(grid), data_(FieldMatrix<Scalar>::Zero(grid.pixels(), channels)) {
    if (channels < 1) throw std::invalid_argument("field needs at least one channel");
  }

  BasicVectorField(const BasicGrid<Scalar>& grid, FieldMatrix<Scalar> data)
      : grid_(grid), data_(std::move(data)) {
    if (data_.rows() != grid.pixels() || data_.cols() < 1) {
      throw std::invalid_argument("field data shape does not match grid");
    }
  }

  const BasicGrid<Scalar>& grid() const { return grid_; }
  int channels() const { return static_cast<int>(data_.cols()); }

  const FieldMatrix<Scalar>& data() const { return data_; }
  FieldMatrix<Scalar>& data() { return data_; }

  Scalar& operator()(int i, int j, int c) { return data_(grid_.index(i, j), c); }
  Scalar operator()(int i, int j, int c) const { return data_(grid_.index(i, j), c); }

  auto pixel(int k) const { return data_.row(k); }
  auto pixel(int k) { return data_.row(k); }

private:
  BasicGrid<Scalar> grid_;
  FieldMatrix<Scalar> data_;
};

/**
 * Lifted angle image u. When `normalized` is set, values are fractions of
 * a full turn (w = exp(2 pi i u)), otherwise radians (w = exp(i u)).
 */
template <typename Scalar>
class BasicAngleField {
public:
  using Values = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BasicAngleField() = default;
  BasicAngleField(const BasicGrid<Scalar>& grid, bool normalized = false)
      : grid_(grid), data_(Values::Zero(grid.pixels())), normalized_(normalized) {}
  BasicAngleField(const BasicGrid<Scalar>& grid, Values data, bool normalized = false)
      : grid_(grid), data_(std::move(data)), normalized_(normalized) {
    if (data_.size() != grid.pixels()) throw std::invalid_argument("angle data size does not match grid");
  }

  const BasicGrid<Scalar>& grid() const { return grid_; }
  const Values& data() const { return data_; }
  Values& data() { return data_; }
  bool normalized() const { return normalized_; }

  Scalar& operator()(int i, int j) { return data_(grid_.index(i, j)); }
  Scalar operator()(int i, int j) const { return data_(grid_.index(i, j)); }

  Values radians() const {
    return normalized_ ? Values(data_ * Scalar(2) * std::numbers::pi_v<Scalar>) : data_;
  }

  /// The unit vector field (cos u, sin u).
  BasicVectorField<Scalar> to_vectors() const {
    const Values u = radians();
    FieldMatrix<Scalar> w(u.size(), 2);
    w.col(0) = u.array().cos();
    w.col(1) = u.array().sin();
    return {grid_, std::move(w)};
  }

private:
  BasicGrid<Scalar> grid_;
  Values data_;
  bool normalized_ = false;
};

/**
 * Parallel-beam data on signed offsets r in [-R, R] (R = extent * sqrt 2,
 * endpoints included) and angles phi_j = j pi / n_phi in [0, pi).
 * Rows are offset-major: row = i_r * n_phi + j_phi.
 */
template <typename Scalar>
class BasicSinogram {
public:
  BasicSinogram() = default;

  BasicSinogram(int n_offsets, int n_angles, int channels, Scalar extent)
      : n_offsets_(n_offsets), n_angles_(n_angles), extent_(extent),
        data_(FieldMatrix<Scalar>::Zero(Eigen::Index(n_offsets) * n_angles, channels)) {
    validate();
  }

  BasicSinogram(int n_offsets, int n_angles, Scalar extent, FieldMatrix<Scalar> data)
      : n_offsets_(n_offsets), n_angles_(n_angles), extent_(extent), data_(std::move(data)) {
    validate();
  }

  int offsets_count() const { return n_offsets_; }
  int angles_count() const { return n_angles_; }
  int channels() const { return static_cast<int>(data_.cols()); }
  Scalar extent() const { return extent_; }

  Scalar offset(int i) const { return offset_value(i, n_offsets_, extent_); }
  Scalar angle(int j) const { return angle_value(j, n_angles_); }
  Scalar offset_step() const { return Scalar(2) * extent_ * std::numbers::sqrt2_v<Scalar> / Scalar(n_offsets_ - 1); }
  Scalar angle_step() const { return std::numbers::pi_v<Scalar> / Scalar(n_angles_); }

  int index(int i, int j) const { return i * n_angles_ + j; }

  const FieldMatrix<Scalar>& data() const { return data_; }
  FieldMatrix<Scalar>& data() { return data_; }

  Scalar& operator()(int i, int j, int c) { return data_(index(i, j), c); }
  Scalar operator()(int i, int j, int c) const { return data_(index(i, j), c); }

  static Scalar offset_value(int i, int n, Scalar extent) {
    const Scalar radius = extent * std::numbers::sqrt2_v<Scalar>;
    return -radius + Scalar(2) * radius * Scalar(i) / Scalar(n - 1);
  }
  static Scalar angle_value(int j, int n) { return std::numbers::pi_v<Scalar> * Scalar(j) / Scalar(n); }

private:
  void validate() const {
    if (n_offsets_ < 2 || n_angles_ < 1) throw std::invalid_argument("sinogram needs >= 2 offsets and >= 1 angle");
    if (!(extent_ > Scalar(0))) throw std::invalid_argument("sinogram extent must be positive");
    if (data_.rows() != Eigen::Index(n_offsets_) * n_angles_ || data_.cols() < 1) {
      throw std::invalid_argument("sinogram data shape does not match dimensions");
    }
  }

  int n_offsets_ = 2;
  int n_angles_ = 1;
  Scalar extent_ = Scalar(1);
  FieldMatrix<Scalar> data_;
};

using Grid = BasicGrid<double>;
using VectorField = BasicVectorField<double>;
using AngleField = BasicAngleField<double>;
using Sinogram = BasicSinogram<double>;

}  // namespace manitomo
