#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "manitomo/grid.hpp"

namespace manitomo {

enum class OperatorKind { radon, ray };

/**
 * Parallel-beam acquisition: offsets and angles as in BasicSinogram, plus
 * the quadrature step used when sampling along each line.
 */
template <typename Scalar>
class BasicGeometry {
public:
  BasicGeometry() = default;

  explicit BasicGeometry(const BasicGrid<Scalar>& grid)
      : BasicGeometry(grid, default_offsets(grid), 180, grid.spacing() / Scalar(2)) {}

  BasicGeometry(const BasicGrid<Scalar>& grid, int n_offsets, int n_angles, Scalar step)
      : grid_(grid), n_offsets_(n_offsets), n_angles_(n_angles), step_(step) {
    if (n_offsets < 2 || n_angles < 1) throw std::invalid_argument("geometry needs >= 2 offsets and >= 1 angle");
    if (!(step > Scalar(0)) || step > grid.spacing()) {
      throw std::invalid_argument("quadrature step must lie in (0, h]");
    }
  }

  static int default_offsets(const BasicGrid<Scalar>& grid) {
    return static_cast<int>(std::ceil(Scalar(grid.height()) * std::numbers::sqrt2_v<Scalar>)) + 2;
  }

  const BasicGrid<Scalar>& grid() const { return grid_; }
  int offsets_count() const { return n_offsets_; }
  int angles_count() const { return n_angles_; }
  int rays() const { return n_offsets_ * n_angles_; }
  Scalar step() const { return step_; }

  Scalar offset(int i) const { return BasicSinogram<Scalar>::offset_value(i, n_offsets_, grid_.extent()); }
  Scalar angle(int j) const { return BasicSinogram<Scalar>::angle_value(j, n_angles_); }
  Scalar offset_step() const { return Scalar(2) * grid_.radius() / Scalar(n_offsets_ - 1); }
  Scalar angle_step() const { return std::numbers::pi_v<Scalar> / Scalar(n_angles_); }

  Vector2<Scalar> direction(int j) const { return {std::cos(angle(j)), std::sin(angle(j))}; }
  Vector2<Scalar> normal(int j) const { return {-std::sin(angle(j)), std::cos(angle(j))}; }

  BasicSinogram<Scalar> make_sinogram(int channels) const {
    return BasicSinogram<Scalar>(n_offsets_, n_angles_, channels, grid_.extent());
  }

  bool matches(const BasicSinogram<Scalar>& sino) const {
    return sino.offsets_count() == n_offsets_ && sino.angles_count() == n_angles_ && sino.extent() == grid_.extent();
  }

private:
  BasicGrid<Scalar> grid_;
  int n_offsets_ = 2;
  int n_angles_ = 1;
  Scalar step_ = Scalar(1);
};

using Geometry = BasicGeometry<double>;

/**
 * Ray-driven projector with bilinear interpolation, assembled once as a
 * sparse (rays x pixels) matrix A. Line (r, phi) is sampled at
 * r theta + k step theta_perp for |k step| <= R, so
 *
 *   R[w]_c(r, phi) = step * sum_k w_c(r theta + k step theta_perp).
 *
 * Radon and ray adjoints apply A^T, so they are exact transposes of the
 * forward maps. Values outside the pixel lattice are zero.
 */
template <typename Scalar>
class BasicProjector {
public:
  using Matrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor, int>;

  explicit BasicProjector(const BasicGeometry<Scalar>& geometry) : geometry_(geometry) { assemble(); }

  const BasicGeometry<Scalar>& geometry() const { return geometry_; }
  const Matrix& matrix() const { return matrix_; }

  BasicSinogram<Scalar> radon(const BasicVectorField<Scalar>& field) const {
    check_grid(field);
    return {geometry_.offsets_count(), geometry_.angles_count(), geometry_.grid().extent(),
            FieldMatrix<Scalar>(matrix_ * field.data())};
  }

  BasicVectorField<Scalar> radon_adjoint(const BasicSinogram<Scalar>& sino) const {
    check_sinogram(sino);
    return {geometry_.grid(), FieldMatrix<Scalar>(matrix_.transpose() * sino.data())};
  }

  BasicSinogram<Scalar> ray(const BasicVectorField<Scalar>& field) const {
    check_grid(field);
    if (field.channels() != 2) throw std::invalid_argument("ray transform needs a 2-channel field");
    const FieldMatrix<Scalar> lines = matrix_ * field.data();
    auto out = geometry_.make_sinogram(1);
    for (int i = 0; i < geometry_.offsets_count(); ++i) {
      for (int j = 0; j < geometry_.angles_count(); ++j) {
        const int row = i * geometry_.angles_count() + j;
        out.data()(row, 0) = lines(row, 0) * normals_(j, 0) + lines(row, 1) * normals_(j, 1);
      }
    }
    return out;
  }

  BasicVectorField<Scalar> ray_adjoint(const BasicSinogram<Scalar>& sino) const {
    check_sinogram(sino);
    if (sino.channels() != 1) throw std::invalid_argument("ray adjoint needs a single-channel sinogram");
    return radon_adjoint(spread_along_normals(sino));
  }

  /// v -> v (x) theta_perp: the 2-channel sinogram whose Radon adjoint is the ray adjoint.
  BasicSinogram<Scalar> spread_along_normals(const BasicSinogram<Scalar>& sino) const {
    auto out = geometry_.make_sinogram(2);
    for (int i = 0; i < geometry_.offsets_count(); ++i) {
      for (int j = 0; j < geometry_.angles_count(); ++j) {
        const int row = i * geometry_.angles_count() + j;
        out.data()(row, 0) = sino.data()(row, 0) * normals_(j, 0);
        out.data()(row, 1) = sino.data()(row, 0) * normals_(j, 1);
      }
    }
    return out;
  }

  BasicSinogram<Scalar> forward(OperatorKind kind, const BasicVectorField<Scalar>& field) const {
    return kind == OperatorKind::radon ? radon(field) : ray(field);
  }

  BasicVectorField<Scalar> adjoint(OperatorKind kind, const BasicSinogram<Scalar>& sino) const {
    return kind == OperatorKind::radon ? radon_adjoint(sino) : ray_adjoint(sino);
  }

private:
  void check_grid(const BasicVectorField<Scalar>& field) const {
    if (!(field.grid() == geometry_.grid())) throw std::invalid_argument("field grid does not match geometry");
  }

  void check_sinogram(const BasicSinogram<Scalar>& sino) const {
    if (!geometry_.matches(sino)) throw std::invalid_argument("sinogram dimensions do not match geometry");
  }

  void assemble() {
    const auto& grid = geometry_.grid();
    const int n = grid.height();
    const Scalar h = grid.spacing();
    const Scalar e = grid.extent();
    const Scalar step = geometry_.step();
    const int half = static_cast<int>(std::ceil(grid.radius() / step));

    normals_.resize(geometry_.angles_count(), 2);
    for (int j = 0; j < geometry_.angles_count(); ++j) normals_.row(j) = geometry_.normal(j).transpose();

    std::vector<Eigen::Triplet<Scalar, int>> triplets;
    std::vector<std::pair<int, Scalar>> hits;
    for (int i = 0; i < geometry_.offsets_count(); ++i) {
      const Scalar r = geometry_.offset(i);
      for (int j = 0; j < geometry_.angles_count(); ++j) {
        const int row = i * geometry_.angles_count() + j;
        const Vector2<Scalar> theta = geometry_.direction(j);
        const Vector2<Scalar> perp = normals_.row(j).transpose();
        hits.clear();
        for (int k = -half; k <= half; ++k) {
          const Vector2<Scalar> x = r * theta + (Scalar(k) * step) * perp;
          const Scalar col = (x.x() + e) / h - Scalar(0.5);
          const Scalar lin = (e - x.y()) / h - Scalar(0.5);
          const Scalar j0f = std::floor(col);
          const Scalar i0f = std::floor(lin);
          if (j0f < Scalar(-1) || j0f > Scalar(n - 1) || i0f < Scalar(-1) || i0f > Scalar(n - 1)) continue;
          const int j0 = static_cast<int>(j0f);
          const int i0 = static_cast<int>(i0f);
          const Scalar fx = col - j0f;
          const Scalar fy = lin - i0f;
          const Scalar wts[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
          const int di[4] = {0, 0, 1, 1};
          const int dj[4] = {0, 1, 0, 1};
          for (int q = 0; q < 4; ++q) {
            const int pi = i0 + di[q];
            const int pj = j0 + dj[q];
            if (pi < 0 || pi >= n || pj < 0 || pj >= n || wts[q] == Scalar(0)) continue;
            hits.emplace_back(pi * n + pj, step * wts[q]);
          }
        }
        std::stable_sort(hits.begin(), hits.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t q = 0; q < hits.size();) {
          Scalar sum = 0;
          const int pixel = hits[q].first;
          for (; q < hits.size() && hits[q].first == pixel; ++q) sum += hits[q].second;
          triplets.emplace_back(row, pixel, sum);
        }
      }
    }
    matrix_.resize(geometry_.rays(), grid.pixels());
    matrix_.setFromTriplets(triplets.begin(), triplets.end());
  }

  BasicGeometry<Scalar> geometry_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 2> normals_;
  Matrix matrix_;
};

using Projector = BasicProjector<double>;

template <typename Scalar>
BasicSinogram<Scalar> radon_forward(const BasicVectorField<Scalar>& field, const BasicGeometry<Scalar>& geometry) {
  return BasicProjector<Scalar>(geometry).radon(field);
}

template <typename Scalar>
BasicVectorField<Scalar> radon_adjoint(const BasicSinogram<Scalar>& sino, const BasicGeometry<Scalar>& geometry) {
  return BasicProjector<Scalar>(geometry).radon_adjoint(sino);
}

template <typename Scalar>
BasicSinogram<Scalar> ray_forward(const BasicVectorField<Scalar>& field, const BasicGeometry<Scalar>& geometry) {
  if (field.channels() != 2) throw std::invalid_argument("ray transform needs a 2-channel field");
  return BasicProjector<Scalar>(geometry).ray(field);
}

template <typename Scalar>
BasicVectorField<Scalar> ray_adjoint(const BasicSinogram<Scalar>& sino, const BasicGeometry<Scalar>& geometry) {
  return BasicProjector<Scalar>(geometry).ray_adjoint(sino);
}

}  // namespace manitomo
