#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "manitomo/grid.hpp"
#include "manitomo/objective.hpp"

namespace manitomo {

template <typename Scalar>
struct BasicGDParams {
  int max_iters = 500;
  Scalar step0 = Scalar(1);
  Scalar shrink = Scalar(0.5);
  Scalar armijo_c = Scalar(1e-4);
  Scalar grad_tol = Scalar(1e-6);
  int max_backtracks = 40;

  void validate() const {
    if (max_iters < 1 || max_backtracks < 1) throw std::invalid_argument("iteration limits must be positive");
    if (!(step0 > Scalar(0)) || !(armijo_c > Scalar(0)) || !(grad_tol > Scalar(0))) {
      throw std::invalid_argument("step0, armijo_c and grad_tol must be positive");
    }
    if (!(shrink > Scalar(0) && shrink < Scalar(1))) throw std::invalid_argument("shrink must lie in (0, 1)");
  }
};

using GDParams = BasicGDParams<double>;

enum class GDStatus { converged, max_iters, line_search_failed };

inline const char* to_string(GDStatus status) {
  switch (status) {
    case GDStatus::converged: return "converged";
    case GDStatus::max_iters: return "max-iters";
    case GDStatus::line_search_failed: return "line-search-failed";
  }
  return "unknown";
}

template <typename Scalar>
struct BasicTraceEntry {
  int iter = 0;
  Scalar objective = Scalar(0);
  Scalar grad_norm = Scalar(0);
  Scalar step = Scalar(0);
};

template <typename Scalar>
struct BasicGDResult {
  FieldMatrix<Scalar> params;
  std::vector<BasicTraceEntry<Scalar>> trace;  // entry 0 is the initial point
  GDStatus status = GDStatus::max_iters;

  int iterations() const { return static_cast<int>(trace.size()) - 1; }
  Scalar final_objective() const { return trace.back().objective; }
};

using GDResult = BasicGDResult<double>;
using TraceEntry = BasicTraceEntry<double>;

/// In-place map of parameters back onto the admissible set.
template <typename Scalar>
using BasicParamProjection = std::function<void(FieldMatrix<Scalar>&)>;

/**
 * Steepest descent with Armijo backtracking. Each iteration tries
 * t = step0 shrink^j, j = 0..max_backtracks-1, and accepts the first trial
 * x_t with f(x_t) < f(x) and f(x_t) <= f(x) - c t ||g||^2 (classical Armijo).
 *
 * With `per_iteration` set, trials are x_t = P(x - t g) and the required
 * decrease uses min(t ||g||^2, ||x - x_t||^2 / t); accepted iterates stay
 * admissible and the trace stays monotone.
 */
template <typename Scalar>
BasicGDResult<Scalar> minimize(const BasicObjective<Scalar>& objective, const FieldMatrix<Scalar>& init,
                               const BasicGDParams<Scalar>& params,
                               const BasicParamProjection<Scalar>& per_iteration = {}) {
  params.validate();
  BasicGDResult<Scalar> result;
  result.params = init;
  if (per_iteration) per_iteration(result.params);

  FieldMatrix<Scalar> grad;
  Scalar value = objective(result.params, &grad);
  if (!std::isfinite(static_cast<double>(value))) throw std::invalid_argument("objective is not finite at the initial point");
  if (grad.rows() != init.rows() || grad.cols() != init.cols()) {
    throw std::invalid_argument("objective gradient shape does not match parameters");
  }
  Scalar sup = grad.size() ? grad.cwiseAbs().maxCoeff() : Scalar(0);
  result.trace.push_back({0, value, sup, Scalar(0)});

  FieldMatrix<Scalar> trial;
  for (int iter = 1;; ++iter) {
    if (!(sup > params.grad_tol)) {
      result.status = GDStatus::converged;
      return result;
    }
    if (iter > params.max_iters) {
      result.status = GDStatus::max_iters;
      return result;
    }
    const Scalar grad_sq = grad.squaredNorm();
    Scalar t = params.step0;
    bool accepted = false;
    Scalar trial_value = value;
    for (int b = 0; b < params.max_backtracks; ++b, t *= params.shrink) {
      trial = result.params - t * grad;
      Scalar decrease = t * grad_sq;
      if (per_iteration) {
        per_iteration(trial);
        decrease = std::min(decrease, (result.params - trial).squaredNorm() / t);
      }
      trial_value = objective(trial, nullptr);
      if (std::isfinite(static_cast<double>(trial_value)) && trial_value <= value - params.armijo_c * decrease &&
          trial_value < value) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      result.status = GDStatus::line_search_failed;
      return result;
    }
    result.params.swap(trial);
    value = objective(result.params, &grad);
    sup = grad.cwiseAbs().maxCoeff();
    result.trace.push_back({iter, value, sup, t});
  }
}

/// CSV with header `iter,objective,grad_norm,step`, 17 significant digits.
template <typename Scalar>
void write_trace_csv(std::ostream& out, const std::vector<BasicTraceEntry<Scalar>>& trace) {
  char buffer[128];
  out << "iter,objective,grad_norm,step\n";
  for (const auto& e : trace) {
    std::snprintf(buffer, sizeof buffer, "%d,%.17g,%.17g,%.17g\n", e.iter, static_cast<double>(e.objective),
                  static_cast<double>(e.grad_norm), static_cast<double>(e.step));
    out << buffer;
  }
}

/// Nearest point of the annulus eps <= |x| <= r_max along the ray through x; 0 maps to (eps, 0).
template <typename Scalar>
Vector2<Scalar> project_annulus(const Vector2<Scalar>& x, Scalar epsilon, Scalar r_max) {
  if (!(epsilon > Scalar(0) && epsilon < r_max)) throw std::invalid_argument("annulus needs 0 < epsilon < r_max");
  const Scalar n = x.norm();
  if (n == Scalar(0)) return {epsilon, Scalar(0)};
  if (n >= epsilon && n <= r_max) return x;
  const Scalar target = n < epsilon ? epsilon : r_max;
  Vector2<Scalar> y = (target / n) * x;
  // keep |y| inside K after rounding
  const Scalar nudge = n < epsilon ? Scalar(1) + std::numeric_limits<Scalar>::epsilon()
                                   : Scalar(1) - std::numeric_limits<Scalar>::epsilon();
  for (int k = 0; k < 8 && (y.norm() < epsilon || y.norm() > r_max); ++k) y *= nudge;
  return y;
}

/// theta modulo 1, in [0, 1).
template <typename Scalar>
Scalar project_angle(Scalar theta) {
  Scalar r = theta - std::floor(theta);
  // floor can round theta - floor(theta) up to exactly 1 for tiny negative theta
  return r >= Scalar(1) ? Scalar(0) : r;
}

}  // namespace manitomo
