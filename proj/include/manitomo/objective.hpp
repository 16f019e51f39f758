#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>

#include "manitomo/regularizers.hpp"

namespace manitomo {

/**
 * A differentiable functional over a pixels x channels parameter matrix.
 * Returns the value; writes the gradient when `gradient` is non-null.
 */
template <typename Scalar>
using BasicObjective = std::function<Scalar(const FieldMatrix<Scalar>&, FieldMatrix<Scalar>*)>;

using Objective = BasicObjective<double>;

/// How optimizer parameters map to field values.
///   cartesian: the field itself.
///   polar:     (Theta, l) per pixel, w = l (cos 2 pi Theta, sin 2 pi Theta).
///   angle:     one lifted angle u (radians) per pixel, w = (cos u, sin u).
enum class Parameterization { cartesian, polar, angle };

template <typename Scalar>
BasicVectorField<Scalar> field_from_params(const FieldMatrix<Scalar>& params, const BasicGrid<Scalar>& grid,
                                           Parameterization param) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  switch (param) {
    case Parameterization::cartesian:
      return {grid, params};
    case Parameterization::polar: {
      if (params.cols() != 2) throw std::invalid_argument("polar parameters need 2 columns");
      FieldMatrix<Scalar> w(params.rows(), 2);
      w.col(0) = params.col(1).array() * (two_pi * params.col(0).array()).cos();
      w.col(1) = params.col(1).array() * (two_pi * params.col(0).array()).sin();
      return {grid, std::move(w)};
    }
    case Parameterization::angle: {
      if (params.cols() != 1) throw std::invalid_argument("angle parameters need 1 column");
      FieldMatrix<Scalar> w(params.rows(), 2);
      w.col(0) = params.col(0).array().cos();
      w.col(1) = params.col(0).array().sin();
      return {grid, std::move(w)};
    }
  }
  throw std::invalid_argument("unknown parameterization");
}

/// Polar parameters of a 2-channel field (Theta in [0, 1), l = |w|).
template <typename Scalar>
FieldMatrix<Scalar> polar_from_field(const BasicVectorField<Scalar>& field) {
  if (field.channels() != 2) throw std::invalid_argument("polar parameters need a 2-channel field");
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  FieldMatrix<Scalar> params(field.data().rows(), 2);
  for (Eigen::Index k = 0; k < params.rows(); ++k) {
    const Scalar x = field.data()(k, 0);
    const Scalar y = field.data()(k, 1);
    Scalar theta = std::atan2(y, x) / two_pi;
    theta -= std::floor(theta);
    params(k, 0) = theta;
    params(k, 1) = std::hypot(x, y);
  }
  return params;
}

/**
 * fidelity(F, v) + alpha Phi over the chosen parameterization. Polar
 * requires the product metric; Phi comes from phi_polar there. Cartesian
 * fields use phi/phi_grad with relaxed domain checks (iterates may leave K).
 */
template <typename Scalar>
BasicObjective<Scalar> full_objective(std::shared_ptr<const BasicProjector<Scalar>> projector,
                                      BasicSinogram<Scalar> observed, OperatorKind kind, BasicRegConfig<Scalar> cfg,
                                      Parameterization param, Scalar fidelity_p = Scalar(2)) {
  cfg.validate();
  if (param == Parameterization::polar && cfg.metric.kind != MetricKind::product) {
    throw std::invalid_argument("polar parameterization requires the product metric");
  }
  if (param == Parameterization::angle && cfg.metric.kind != MetricKind::sphere) {
    throw std::invalid_argument("angle parameterization requires the sphere metric");
  }
  if (param == Parameterization::angle && kind != OperatorKind::radon) {
    throw std::invalid_argument("the lifted functional uses the Radon transform");
  }
  return [projector = std::move(projector), observed = std::move(observed), kind, cfg, param, fidelity_p](
             const FieldMatrix<Scalar>& params, FieldMatrix<Scalar>* gradient) -> Scalar {
    const auto& grid = projector->geometry().grid();
    const bool want = gradient != nullptr;
    constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
    switch (param) {
      case Parameterization::angle: {
        const BasicAngleField<Scalar> u(grid, params.col(0), false);
        auto eval = lifted_objective(u, observed, *projector, cfg, fidelity_p, want);
        if (want) *gradient = eval.gradient;
        return eval.value;
      }
      case Parameterization::cartesian: {
        const BasicVectorField<Scalar> w(grid, params);
        auto fid = fidelity(w, observed, *projector, kind, fidelity_p, want);
        Scalar value = fid.value;
        if (cfg.alpha != Scalar(0)) {
          value += cfg.alpha * phi(w, cfg, DomainCheck::relaxed);
          if (want) fid.gradient += cfg.alpha * phi_grad(w, cfg, DomainCheck::relaxed).data();
        }
        if (want) *gradient = std::move(fid.gradient);
        return value;
      }
      case Parameterization::polar: {
        const auto w = field_from_params(params, grid, Parameterization::polar);
        auto fid = fidelity(w, observed, *projector, kind, fidelity_p, want);
        Scalar value = fid.value;
        FieldMatrix<Scalar> g;
        if (want) {
          // chain rule through w = l (cos 2 pi Theta, sin 2 pi Theta)
          g.resize(params.rows(), 2);
          const Eigen::Array<Scalar, Eigen::Dynamic, 1> c = (two_pi * params.col(0).array()).cos();
          const Eigen::Array<Scalar, Eigen::Dynamic, 1> s = (two_pi * params.col(0).array()).sin();
          g.col(0) = two_pi * params.col(1).array() * (-s * fid.gradient.col(0).array() + c * fid.gradient.col(1).array());
          g.col(1) = c * fid.gradient.col(0).array() + s * fid.gradient.col(1).array();
        }
        if (cfg.alpha != Scalar(0)) {
          auto reg = phi_polar(params, grid, cfg, want);
          value += cfg.alpha * reg.value;
          if (want) g += cfg.alpha * reg.gradient;
        }
        if (want) *gradient = std::move(g);
        return value;
      }
    }
    throw std::invalid_argument("unknown parameterization");
  };
}

/// fidelity(F, v) + beta Theta(w) over cartesian fields.
template <typename Scalar>
BasicObjective<Scalar> sobolev_objective(std::shared_ptr<const BasicProjector<Scalar>> projector,
                                         BasicSinogram<Scalar> observed, OperatorKind kind, Scalar beta, Scalar p,
                                         Scalar fidelity_p = Scalar(2)) {
  if (!(beta >= Scalar(0))) throw std::invalid_argument("beta must be >= 0");
  if (!(p > Scalar(1))) throw std::invalid_argument("Sobolev exponent must be > 1");
  return [projector = std::move(projector), observed = std::move(observed), kind, beta, p, fidelity_p](
             const FieldMatrix<Scalar>& params, FieldMatrix<Scalar>* gradient) -> Scalar {
    const BasicVectorField<Scalar> w(projector->geometry().grid(), params);
    const bool want = gradient != nullptr;
    auto fid = fidelity(w, observed, *projector, kind, fidelity_p, want);
    auto reg = sobolev(w, p, want);
    if (want) *gradient = fid.gradient + beta * reg.gradient;
    return fid.value + beta * reg.value;
  };
}

}  // namespace manitomo
