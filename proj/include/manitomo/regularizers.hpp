#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>

#include "manitomo/grid.hpp"
#include "manitomo/metrics.hpp"
#include "manitomo/transforms.hpp"

namespace manitomo {

/// Below this magnitude |x|^{p-2} is replaced by 0 (subgradient selection for p < 2).
inline constexpr double kFlatThreshold = 1e-12;

template <typename Scalar>
struct BasicRegConfig {
  Scalar s = Scalar(0.5);
  Scalar p = Scalar(2);
  Scalar alpha = Scalar(1);
  /// l = 1: mollified, stencil-local sum. l = 0 (no mollifier): all pairs, small grids only.
  std::optional<BasicMollifier<Scalar>> mollifier;
  BasicMetricSpec<Scalar> metric;

  bool local() const { return mollifier.has_value(); }

  void validate() const {
    if (!(s > Scalar(0) && s < Scalar(1))) throw std::invalid_argument("fractional order s must lie in (0, 1)");
    if (!(p > Scalar(1))) throw std::invalid_argument("exponent p must be > 1");
    if (!(alpha >= Scalar(0))) throw std::invalid_argument("alpha must be >= 0");
    metric.validate();
    if (metric.kind == MetricKind::product && metric.p != p) {
      throw std::invalid_argument("product metric exponent must equal the regularizer exponent p");
    }
  }
};

using RegConfig = BasicRegConfig<double>;

/// Value and gradient of a functional in its parameters.
template <typename Scalar, typename Params>
struct BasicEvaluation {
  Scalar value = Scalar(0);
  Params gradient;
};

/// Whether `phi` insists that values lie in K or only that they have a direction.
enum class DomainCheck { strict, relaxed };

namespace detail {

template <typename Scalar>
Scalar sign(Scalar x) {
  return x > Scalar(0) ? Scalar(1) : (x < Scalar(0) ? Scalar(-1) : Scalar(0));
}

/// |x|^{p-1} sign(x) with the flat-threshold rule; 0 at x = 0.
template <typename Scalar>
Scalar signed_power(Scalar x, Scalar p) {
  const Scalar ax = std::abs(x);
  if (ax < Scalar(kFlatThreshold)) return Scalar(0);
  return sign(x) * std::pow(ax, p - Scalar(1));
}

/// Pair weight h^4 rho(z h) / |z h|^{2 + p s}; rho = 1 without a mollifier.
template <typename Scalar>
Scalar pair_weight(const BasicGrid<Scalar>& grid, const BasicRegConfig<Scalar>& cfg, int dy, int dx) {
  const Scalar h = grid.spacing();
  const Scalar dist = h * std::sqrt(Scalar(dy * dy + dx * dx));
  const Scalar rho = cfg.mollifier ? cfg.mollifier->weight(dy, dx) : Scalar(1);
  const Scalar h2 = h * h;
  return h2 * h2 * rho / std::pow(dist, Scalar(2) + cfg.p * cfg.s);
}

/**
 * Visits every ordered pixel pair (x, x + z), z != 0, that the regularizer
 * sums over: the stencil ||z||_inf <= n_rho for l = 1, all pairs for l = 0.
 * visit(k, q, weight) receives flat pixel indices.
 */
template <typename Scalar, typename Visit>
void for_each_pair(const BasicGrid<Scalar>& grid, const BasicRegConfig<Scalar>& cfg, Visit&& visit) {
  const int n = grid.height();
  const int reach = cfg.mollifier ? cfg.mollifier->radius() : n - 1;
  const int side = 2 * reach + 1;
  std::vector<Scalar> weights(std::size_t(side) * side, Scalar(0));
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      if (dy || dx) weights[std::size_t(dy + reach) * side + (dx + reach)] = pair_weight(grid, cfg, dy, dx);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int k = grid.index(i, j);
      for (int dy = -reach; dy <= reach; ++dy) {
        const int qi = i + dy;
        if (qi < 0 || qi >= n) continue;
        for (int dx = -reach; dx <= reach; ++dx) {
          const int qj = j + dx;
          if ((!dy && !dx) || qj < 0 || qj >= n) continue;
          visit(k, grid.index(qi, qj), weights[std::size_t(dy + reach) * side + (dx + reach)]);
        }
      }
    }
  }
}

/// Signed angle from a to b in (-pi, pi].
template <typename Scalar, typename A, typename B>
Scalar signed_angle(const A& a, const B& b) {
  const Scalar cross = a(0) * b(1) - a(1) * b(0);
  const Scalar dot = a(0) * b(0) + a(1) * b(1);
  Scalar delta = std::atan2(cross, dot);
  return delta == -std::numbers::pi_v<Scalar> ? std::numbers::pi_v<Scalar> : delta;
}

template <typename Scalar, typename A, typename B>
Scalar sphere_distance(const A& a, const B& b) {
  return std::atan2(std::abs(a(0) * b(1) - a(1) * b(0)), a(0) * b(0) + a(1) * b(1));
}

/**
 * d/da of d_sphere(a, b)^p. With alpha the polar angle of a and delta the
 * signed angle from a to b, d = |delta| and d(alpha)/da = (-a_y, a_x)/|a|^2.
 * Zero at d = 0 and at the antipodal discontinuity.
 */
template <typename Scalar, typename A, typename B>
Vector2<Scalar> sphere_power_gradient(const A& a, const B& b, Scalar p) {
  const Scalar delta = signed_angle<Scalar>(a, b);
  const Scalar d = std::abs(delta);
  if (d < Scalar(kFlatThreshold) || d >= std::numbers::pi_v<Scalar>) return Vector2<Scalar>::Zero();
  const Scalar n2 = a(0) * a(0) + a(1) * a(1);
  const Scalar coeff = p * std::pow(d, p - Scalar(1)) * sign(delta) / n2;
  // d|delta|/da = -sign(delta) d(alpha)/da
  return {coeff * a(1), -coeff * a(0)};
}

template <typename Scalar>
void check_field_domain(const BasicVectorField<Scalar>& field, const BasicMetricSpec<Scalar>& metric,
                        DomainCheck check) {
  if (metric.kind == MetricKind::euclidean) return;
  if (field.channels() != 2) throw std::invalid_argument("sphere and product metrics need 2-channel fields");
  for (int k = 0; k < field.grid().pixels(); ++k) {
    const Scalar l = field.data().row(k).norm();
    if (!(l > Scalar(0))) throw std::invalid_argument("field has a zero vector; its direction is undefined");
    if (metric.kind == MetricKind::product && check == DomainCheck::strict &&
        (l < metric.epsilon || l > metric.r_max)) {
      throw std::invalid_argument("field value outside the annulus K at pixel " + std::to_string(k));
    }
  }
}

}  // namespace detail

/**
 * Discrete metric double integral
 *
 *   Phi(w) = h^4 sum_x sum_{z != 0} d^p(w(x), w(x+z)) rho(z h) / |z h|^{2+ps}
 *
 * over ordered pairs inside the grid, for cartesian fields under the
 * configured metric.
 */
template <typename Scalar>
Scalar phi(const BasicVectorField<Scalar>& field, const BasicRegConfig<Scalar>& cfg,
           DomainCheck check = DomainCheck::strict) {
  cfg.validate();
  detail::check_field_domain(field, cfg.metric, check);
  const auto& w = field.data();
  const Scalar p = cfg.p;
  const Scalar gamma = cfg.metric.gamma;
  Scalar total = 0;
  switch (cfg.metric.kind) {
    case MetricKind::euclidean:
      detail::for_each_pair(field.grid(), cfg, [&](int k, int q, Scalar c) {
        total += c * std::pow((w.row(k) - w.row(q)).norm(), p);
      });
      break;
    case MetricKind::sphere:
      detail::for_each_pair(field.grid(), cfg, [&](int k, int q, Scalar c) {
        total += c * std::pow(detail::sphere_distance<Scalar>(w.row(k), w.row(q)), p);
      });
      break;
    case MetricKind::product:
      detail::for_each_pair(field.grid(), cfg, [&](int k, int q, Scalar c) {
        const Scalar dl = w.row(k).norm() - w.row(q).norm();
        total += c * (std::pow(detail::sphere_distance<Scalar>(w.row(k), w.row(q)), p) +
                      gamma * std::pow(std::abs(dl), p));
      });
      break;
  }
  return total;
}

/**
 * Analytic gradient of `phi`. Each unordered pair appears twice with equal
 * weight, so the gradient at x is 2 sum_z c_z d/dw(x) d^p(w(x), w(x+z)).
 */
template <typename Scalar>
BasicVectorField<Scalar> phi_grad(const BasicVectorField<Scalar>& field, const BasicRegConfig<Scalar>& cfg,
                                  DomainCheck check = DomainCheck::strict) {
  cfg.validate();
  detail::check_field_domain(field, cfg.metric, check);
  const auto& w = field.data();
  const Scalar p = cfg.p;
  const Scalar gamma = cfg.metric.gamma;
  BasicVectorField<Scalar> grad(field.grid(), field.channels());
  auto& g = grad.data();
  switch (cfg.metric.kind) {
    case MetricKind::euclidean:
      detail::for_each_pair(field.grid(), cfg, [&](int k, int q, Scalar c) {
        const auto delta = (w.row(k) - w.row(q)).eval();
        const Scalar n = delta.norm();
        if (n < Scalar(kFlatThreshold) && p < Scalar(2)) return;
        g.row(k) += (Scalar(2) * c * p * std::pow(n, p - Scalar(2))) * delta;
      });
      break;
    case MetricKind::sphere:
      detail::for_each_pair(field.grid(), cfg, [&](int k, int q, Scalar c) {
        g.row(k) += (Scalar(2) * c) * detail::sphere_power_gradient<Scalar>(w.row(k), w.row(q), p).transpose();
      });
      break;
    case MetricKind::product:
      detail::for_each_pair(field.grid(), cfg, [&](int k, int q, Scalar c) {
        const Scalar lk = w.row(k).norm();
        const Scalar dl = lk - w.row(q).norm();
        Vector2<Scalar> gk = detail::sphere_power_gradient<Scalar>(w.row(k), w.row(q), p);
        gk += (gamma * p * detail::signed_power(dl, p) / lk) * w.row(k).transpose();
        g.row(k) += (Scalar(2) * c) * gk.transpose();
      });
      break;
  }
  return grad;
}

/// Phi with d_angle on lifted angles (radians).
template <typename Scalar>
BasicEvaluation<Scalar, typename BasicAngleField<Scalar>::Values> phi_angle(
    const typename BasicAngleField<Scalar>::Values& u, const BasicGrid<Scalar>& grid,
    const BasicRegConfig<Scalar>& cfg, bool with_gradient = true) {
  cfg.validate();
  if (u.size() != grid.pixels()) throw std::invalid_argument("angle data size does not match grid");
  const Scalar p = cfg.p;
  BasicEvaluation<Scalar, typename BasicAngleField<Scalar>::Values> out;
  if (with_gradient) out.gradient = BasicAngleField<Scalar>::Values::Zero(u.size());
  detail::for_each_pair(grid, cfg, [&](int k, int q, Scalar c) {
    const Scalar delta = wrap_angle(u(k) - u(q));
    const Scalar d = std::abs(delta);
    out.value += c * std::pow(d, p);
    if (with_gradient && d < std::numbers::pi_v<Scalar>) {
      out.gradient(k) += Scalar(2) * c * p * detail::signed_power(delta, p);
    }
  });
  return out;
}

/**
 * Phi under the product metric on polar parameters: column 0 holds the
 * 1-normalized orientation Theta, column 1 the length l.
 */
template <typename Scalar>
BasicEvaluation<Scalar, FieldMatrix<Scalar>> phi_polar(const FieldMatrix<Scalar>& params,
                                                        const BasicGrid<Scalar>& grid,
                                                        const BasicRegConfig<Scalar>& cfg,
                                                        bool with_gradient = true) {
  cfg.validate();
  if (params.rows() != grid.pixels() || params.cols() != 2) {
    throw std::invalid_argument("polar parameters must be pixels x 2");
  }
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Scalar p = cfg.p;
  const Scalar gamma = cfg.metric.gamma;
  BasicEvaluation<Scalar, FieldMatrix<Scalar>> out;
  if (with_gradient) out.gradient = FieldMatrix<Scalar>::Zero(params.rows(), 2);
  detail::for_each_pair(grid, cfg, [&](int k, int q, Scalar c) {
    const Scalar delta = wrap_angle(two_pi * (params(k, 0) - params(q, 0)));
    const Scalar dl = params(k, 1) - params(q, 1);
    out.value += c * (std::pow(std::abs(delta), p) + gamma * std::pow(std::abs(dl), p));
    if (!with_gradient) return;
    if (std::abs(delta) < std::numbers::pi_v<Scalar>) {
      out.gradient(k, 0) += Scalar(2) * c * p * two_pi * detail::signed_power(delta, p);
    }
    out.gradient(k, 1) += Scalar(2) * c * gamma * p * detail::signed_power(dl, p);
  });
  return out;
}

/**
 * Sobolev semi-norm h^2 sum_x ||D w(x)||_F^p with forward differences
 * (backward in the last column / top row) scaled by 1/h. x runs along
 * columns, y upward along decreasing row index.
 */
template <typename Scalar>
BasicEvaluation<Scalar, FieldMatrix<Scalar>> sobolev(const BasicVectorField<Scalar>& field, Scalar p,
                                                      bool with_gradient = true) {
  if (!(p > Scalar(1))) throw std::invalid_argument("Sobolev exponent must be > 1");
  const auto& grid = field.grid();
  const int n = grid.height();
  const int m = field.channels();
  const Scalar h = grid.spacing();
  const auto& w = field.data();
  BasicEvaluation<Scalar, FieldMatrix<Scalar>> out;
  if (with_gradient) out.gradient = FieldMatrix<Scalar>::Zero(w.rows(), m);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dx(m), dy(m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // x-difference between pixels (ia, ja) - (ib, jb); same for y.
      const int xa = j + 1 < n ? grid.index(i, j + 1) : grid.index(i, j);
      const int xb = j + 1 < n ? grid.index(i, j) : grid.index(i, j - 1);
      const int ya = i > 0 ? grid.index(i - 1, j) : grid.index(i, j);
      const int yb = i > 0 ? grid.index(i, j) : grid.index(i + 1, j);
      dx = (w.row(xa) - w.row(xb)).transpose() / h;
      dy = (w.row(ya) - w.row(yb)).transpose() / h;
      const Scalar norm = std::sqrt(dx.squaredNorm() + dy.squaredNorm());
      out.value += h * h * std::pow(norm, p);
      if (!with_gradient) continue;
      if (norm < Scalar(kFlatThreshold) && p < Scalar(2)) continue;
      const Scalar q = h * h * p * std::pow(norm, p - Scalar(2)) / h;
      out.gradient.row(xa) += q * dx.transpose();
      out.gradient.row(xb) -= q * dx.transpose();
      out.gradient.row(ya) += q * dy.transpose();
      out.gradient.row(yb) -= q * dy.transpose();
    }
  }
  return out;
}

/**
 * Data term dr dphi sum |F w - v|^p with |.| the Euclidean norm over the
 * M sinogram channels; gradient F^T (dr dphi p |res|^{p-2} res).
 */
template <typename Scalar>
BasicEvaluation<Scalar, FieldMatrix<Scalar>> fidelity(const BasicVectorField<Scalar>& field,
                                                       const BasicSinogram<Scalar>& observed,
                                                       const BasicProjector<Scalar>& projector, OperatorKind kind,
                                                       Scalar p, bool with_gradient = true) {
  if (!(p > Scalar(1))) throw std::invalid_argument("fidelity exponent must be > 1");
  const auto& geom = projector.geometry();
  if (!geom.matches(observed)) throw std::invalid_argument("observed sinogram does not match geometry");
  const int expected_channels = kind == OperatorKind::radon ? field.channels() : 1;
  if (observed.channels() != expected_channels) throw std::invalid_argument("observed sinogram has wrong channel count");
  const Scalar quad = geom.offset_step() * geom.angle_step();

  auto residual = projector.forward(kind, field);
  residual.data() -= observed.data();
  auto& res = residual.data();

  BasicEvaluation<Scalar, FieldMatrix<Scalar>> out;
  for (Eigen::Index r = 0; r < res.rows(); ++r) {
    const Scalar n = res.row(r).norm();
    out.value += quad * std::pow(n, p);
    if (!with_gradient) continue;
    if (p == Scalar(2)) {
      res.row(r) *= Scalar(2) * quad;
    } else if (n < Scalar(kFlatThreshold) && p < Scalar(2)) {
      res.row(r).setZero();
    } else {
      res.row(r) *= quad * p * std::pow(n, p - Scalar(2));
    }
  }
  if (with_gradient) out.gradient = projector.adjoint(kind, residual).data();
  return out;
}

/**
 * Lifted circle-valued functional in u (radians):
 *   fidelity((cos u, sin u)) + alpha Phi_angle(u)
 * with the Radon transform.
 */
template <typename Scalar>
BasicEvaluation<Scalar, typename BasicAngleField<Scalar>::Values> lifted_objective(
    const BasicAngleField<Scalar>& u, const BasicSinogram<Scalar>& observed, const BasicProjector<Scalar>& projector,
    const BasicRegConfig<Scalar>& cfg, Scalar fidelity_p = Scalar(2), bool with_gradient = true) {
  if (!(u.grid() == projector.geometry().grid())) throw std::invalid_argument("angle grid does not match geometry");
  const auto radians = u.radians();
  const BasicAngleField<Scalar> lifted(u.grid(), radians, false);
  const auto fid = fidelity(lifted.to_vectors(), observed, projector, OperatorKind::radon, fidelity_p, with_gradient);
  const auto reg = phi_angle(radians, u.grid(), cfg, with_gradient);
  BasicEvaluation<Scalar, typename BasicAngleField<Scalar>::Values> out;
  out.value = fid.value + cfg.alpha * reg.value;
  if (with_gradient) {
    out.gradient = -radians.array().sin() * fid.gradient.col(0).array() +
                   radians.array().cos() * fid.gradient.col(1).array();
    out.gradient += cfg.alpha * reg.gradient;
    if (u.normalized()) out.gradient *= Scalar(2) * std::numbers::pi_v<Scalar>;
  }
  return out;
}

}  // namespace manitomo
