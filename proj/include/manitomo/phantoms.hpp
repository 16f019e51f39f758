#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

#include "manitomo/grid.hpp"

namespace manitomo {

enum class AnglePhantom { two_region, four_region };
enum class VectorPhantomKind { length_jump, direction_jump, curl };

AnglePhantom parse_angle_phantom(std::string_view name);
VectorPhantomKind parse_vector_phantom(std::string_view name);

/**
 * Piecewise-constant 1-normalized angle images.
 *
 * two-region:  0.3 on the centered square rows/cols [H/4, 3H/4), 0.9 elsewhere.
 * four-region: split at row 3H/8 and column H/2. Values 0.9 (top left),
 *              0.1 (top right), 0.35 (bottom left), 0.6 (bottom right);
 *              the top boundary crosses the 0/1 identification.
 */
template <typename Scalar>
BasicAngleField<Scalar> angle_phantom(AnglePhantom kind, const BasicGrid<Scalar>& grid) {
  const int n = grid.height();
  if (n < 8) throw std::invalid_argument("angle phantoms need H >= 8");
  BasicAngleField<Scalar> u(grid, true);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Scalar v = 0;
      if (kind == AnglePhantom::two_region) {
        const bool inside = i >= n / 4 && i < 3 * n / 4 && j >= n / 4 && j < 3 * n / 4;
        v = inside ? Scalar(0.3) : Scalar(0.9);
      } else {
        const bool top = i < 3 * n / 8;
        const bool left = j < n / 2;
        v = top ? (left ? Scalar(0.9) : Scalar(0.1)) : (left ? Scalar(0.35) : Scalar(0.6));
      }
      u(i, j) = v;
    }
  }
  return u;
}

template <typename Scalar>
struct BasicVectorPhantom {
  BasicVectorField<Scalar> field;
  Scalar r_max;
};

/**
 * length-jump:    orientation 1/8 turn in the left half, 3/5 turn in the right
 *                 half; length grows linearly from 0.01 (top row) to 0.1
 *                 (bottom row). r_max = 0.1.
 * direction-jump: unit vectors, orientation 1/8 turn left of the center
 *                 column and 3/8 turn right of it. r_max = 1.
 * curl:           unit vectors (-y, x)/|x| about the grid center; the exact
 *                 center pixel of an odd grid gets (1, 0). r_max = 1.
 */
template <typename Scalar>
BasicVectorPhantom<Scalar> vector_phantom(VectorPhantomKind kind, const BasicGrid<Scalar>& grid) {
  const int n = grid.height();
  if (n < 8) throw std::invalid_argument("vector phantoms need H >= 8");
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  BasicVectorPhantom<Scalar> out{BasicVectorField<Scalar>(grid, 2),
                                 kind == VectorPhantomKind::length_jump ? Scalar(0.1) : Scalar(1)};
  auto& w = out.field;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Scalar theta = 0;
      Scalar length = 1;
      switch (kind) {
        case VectorPhantomKind::length_jump:
          theta = j < n / 2 ? Scalar(0.125) : Scalar(0.6);
          length = Scalar(0.01) + Scalar(0.09) * Scalar(i) / Scalar(n - 1);
          break;
        case VectorPhantomKind::direction_jump:
          theta = j < n / 2 ? Scalar(0.125) : Scalar(0.375);
          break;
        case VectorPhantomKind::curl: {
          const Vector2<Scalar> x = grid.center(i, j);
          const Scalar r = x.norm();
          if (r == Scalar(0)) {
            w(i, j, 0) = 1;
            w(i, j, 1) = 0;
          } else {
            w(i, j, 0) = -x.y() / r;
            w(i, j, 1) = x.x() / r;
          }
          continue;
        }
      }
      w(i, j, 0) = length * std::cos(two_pi * theta);
      w(i, j, 1) = length * std::sin(two_pi * theta);
    }
  }
  return out;
}

/**
 * Portable standard normal source: std::mt19937_64 words mapped to doubles
 * in (0, 1] by 53-bit truncation, then the Box-Muller transform (both
 * outputs used). Output is identical across standard libraries.
 */
class GaussianSource {
public:
  explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = (double((engine_() >> 11) + 1)) * 0x1.0p-53;
    const double u2 = double(engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

struct NoiseSpec {
  double variance = 0.0;
  std::uint64_t seed = 0;
};

/// Adds independent N(0, variance) draws to every entry, in storage order.
template <typename Scalar>
BasicSinogram<Scalar> add_noise(BasicSinogram<Scalar> sino, const NoiseSpec& spec) {
  if (!(spec.variance >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");
  if (spec.variance == 0.0) return sino;
  GaussianSource source(spec.seed);
  const double sigma = std::sqrt(spec.variance);
  auto& d = sino.data();
  for (Eigen::Index r = 0; r < d.rows(); ++r) {
    for (Eigen::Index c = 0; c < d.cols(); ++c) d(r, c) += Scalar(sigma * source.next());
  }
  return sino;
}

/// Adds N(0, variance) draws to a parameter matrix (the perturbed-truth start).
template <typename Scalar>
void perturb(FieldMatrix<Scalar>& values, const NoiseSpec& spec) {
  if (!(spec.variance >= 0.0)) throw std::invalid_argument("noise variance must be >= 0");
  GaussianSource source(spec.seed);
  const double sigma = std::sqrt(spec.variance);
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) values(r, c) += Scalar(sigma * source.next());
  }
}

/// 20 log10(||truth|| / ||truth - rec||) in dB; +infinity when rec == truth.
template <typename DerivedA, typename DerivedB>
double snr(const Eigen::MatrixBase<DerivedA>& truth, const Eigen::MatrixBase<DerivedB>& rec) {
  if (truth.rows() != rec.rows() || truth.cols() != rec.cols()) throw std::invalid_argument("snr: shape mismatch");
  const double signal = static_cast<double>(truth.norm());
  if (!(signal > 0.0)) throw std::invalid_argument("snr: zero ground truth");
  const double error = static_cast<double>((truth - rec).norm());
  if (error == 0.0) return std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(signal / error);
}

template <typename Scalar>
double snr(const BasicVectorField<Scalar>& truth, const BasicVectorField<Scalar>& rec) {
  return snr(truth.data(), rec.data());
}

}  // namespace manitomo
