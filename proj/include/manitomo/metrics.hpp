#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "manitomo/grid.hpp"

namespace manitomo {

enum class MetricKind { euclidean, sphere, product };

/// Parameters of the distance on K. gamma, epsilon and r_max only matter for `product`.
template <typename Scalar>
struct BasicMetricSpec {
  MetricKind kind = MetricKind::euclidean;
  Scalar gamma = Scalar(1);
  Scalar p = Scalar(2);
  Scalar epsilon = Scalar(1e-6);
  Scalar r_max = Scalar(1);

  void validate() const {
    if (!(gamma >= Scalar(0))) throw std::invalid_argument("metric gamma must be >= 0");
    if (!(p > Scalar(1))) throw std::invalid_argument("metric exponent p must be > 1");
    if (kind == MetricKind::product && !(epsilon > Scalar(0) && epsilon < r_max)) {
      throw std::invalid_argument("annulus bounds need 0 < epsilon < r_max");
    }
  }
};

using MetricSpec = BasicMetricSpec<double>;

/// Maps an angle difference to (-pi, pi]; -pi itself goes to +pi.
template <typename Scalar>
Scalar wrap_angle(Scalar delta) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar r = std::fmod(delta + pi, Scalar(2) * pi);
  if (r < Scalar(0)) r += Scalar(2) * pi;
  r -= pi;
  return r == -pi ? pi : r;
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar d_euclidean(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("d_euclidean: dimension mismatch");
  return (a - b).norm();
}

/**
 * Geodesic distance on the unit circle, arccos of the normalized dot
 * product. Evaluated as atan2(|a x b|, a . b): the same angle, but exact
 * at a = b and free of the arccos precision loss near 0 and pi.
 */
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar d_sphere(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  if (a.size() != 2 || b.size() != 2) throw std::invalid_argument("d_sphere: points must be 2-vectors");
  if (!(a.norm() > Scalar(0)) || !(b.norm() > Scalar(0))) throw std::invalid_argument("d_sphere: zero vector");
  return std::atan2(std::abs(a(0) * b(1) - a(1) * b(0)), a(0) * b(0) + a(1) * b(1));
}

/// d_sphere(e^{i u1}, e^{i u2}) evaluated directly on the lifted angles.
template <typename Scalar>
Scalar d_angle(Scalar u1, Scalar u2) {
  return std::abs(wrap_angle(u1 - u2));
}

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar d_product(const Eigen::MatrixBase<DerivedA>& x1, const Eigen::MatrixBase<DerivedB>& x2,
                                    const BasicMetricSpec<typename DerivedA::Scalar>& spec) {
  using Scalar = typename DerivedA::Scalar;
  if (x1.size() != 2 || x2.size() != 2) throw std::invalid_argument("d_product: points must be 2-vectors");
  const Scalar l1 = x1.norm();
  const Scalar l2 = x2.norm();
  for (Scalar l : {l1, l2}) {
    if (l < spec.epsilon || l > spec.r_max) {
      throw std::invalid_argument("d_product: |x| = " + std::to_string(static_cast<double>(l)) +
                                  " outside annulus [epsilon, r_max]");
    }
  }
  const Scalar angular = d_sphere(x1, x2);
  return std::pow(std::pow(angular, spec.p) + spec.gamma * std::pow(std::abs(l1 - l2), spec.p), Scalar(1) / spec.p);
}

/**
 * Truncated Gaussian stencil on the integer offsets ||z||_inf <= radius.
 * weight(z) depends only on |z| and sum_z weight(z) h^2 = 1, the center
 * included. The regularizer skips z = 0.
 */
template <typename Scalar>
class BasicMollifier {
public:
  BasicMollifier(int radius, Scalar spacing, Scalar sigma) : radius_(radius), spacing_(spacing), sigma_(sigma) {
    if (radius < 1 || radius > 3) throw std::invalid_argument("mollifier radius n_rho must be 1, 2 or 3");
    if (!(sigma > Scalar(0))) throw std::invalid_argument("mollifier sigma must be positive");
    if (!(spacing > Scalar(0))) throw std::invalid_argument("mollifier spacing must be positive");
    const int side = 2 * radius + 1;
    weights_.resize(std::size_t(side) * side);
    Scalar mass = 0;
    for (int dy = -radius; dy <= radius; ++dy) {
      for (int dx = -radius; dx <= radius; ++dx) {
        const Scalar w = std::exp(-Scalar(dx * dx + dy * dy) / (Scalar(2) * sigma * sigma));
        weights_[slot(dy, dx)] = w;
        mass += w;
      }
    }
    const Scalar scale = Scalar(1) / (mass * spacing * spacing);
    for (auto& w : weights_) w *= scale;
  }

  int radius() const { return radius_; }
  Scalar spacing() const { return spacing_; }
  Scalar sigma() const { return sigma_; }

  Scalar weight(int dy, int dx) const {
    if (std::abs(dy) > radius_ || std::abs(dx) > radius_) return Scalar(0);
    return weights_[slot(dy, dx)];
  }

  Scalar max_weight() const { return *std::max_element(weights_.begin(), weights_.end()); }
  Scalar min_weight() const { return *std::min_element(weights_.begin(), weights_.end()); }

  /// Number of off-center stencil entries.
  int support_size() const { return static_cast<int>(weights_.size()) - 1; }

private:
  std::size_t slot(int dy, int dx) const { return std::size_t(dy + radius_) * (2 * radius_ + 1) + (dx + radius_); }

  int radius_;
  Scalar spacing_;
  Scalar sigma_;
  std::vector<Scalar> weights_;
};

using Mollifier = BasicMollifier<double>;

/// sigma <= 0 selects the default n_rho / 2.
template <typename Scalar>
BasicMollifier<Scalar> make_mollifier(int radius, Scalar spacing, Scalar sigma = Scalar(0)) {
  if (radius < 1 || radius > 3) throw std::invalid_argument("mollifier radius n_rho must be 1, 2 or 3");
  return BasicMollifier<Scalar>(radius, spacing, sigma > Scalar(0) ? sigma : Scalar(radius) / Scalar(2));
}

}  // namespace manitomo
