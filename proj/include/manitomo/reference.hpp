#pragma once

// Slow, deliberately naive oracles for tests. Nothing here calls into the
// production regularizer, metric or projector code: kernels, distances and
// quadrature are written out again from their definitions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "manitomo/grid.hpp"
#include "manitomo/objective.hpp"
#include "manitomo/regularizers.hpp"

namespace manitomo::reference {

inline constexpr int kMaxBruteForceSize = 16;

/// Literal double sum over all ordered pixel pairs x != y.
inline double phi_bruteforce(const VectorField& field, const RegConfig& cfg) {
  const Grid& grid = field.grid();
  const int n = grid.height();
  if (n > kMaxBruteForceSize) throw std::invalid_argument("phi_bruteforce: grid larger than 16x16");
  const double h = grid.spacing();

  // Mollifier recomputed from its definition.
  int radius = 0;
  double sigma = 1.0;
  double mass = 0.0;
  if (cfg.mollifier) {
    radius = cfg.mollifier->radius();
    sigma = cfg.mollifier->sigma();
    for (int a = -radius; a <= radius; ++a)
      for (int b = -radius; b <= radius; ++b) mass += std::exp(-(a * a + b * b) / (2.0 * sigma * sigma));
    mass *= h * h;
  }

  const auto& w = field.data();
  const int m = field.channels();
  double total = 0.0;
  for (int xi = 0; xi < n; ++xi)
    for (int xj = 0; xj < n; ++xj)
      for (int yi = 0; yi < n; ++yi)
        for (int yj = 0; yj < n; ++yj) {
          if (xi == yi && xj == yj) continue;
          const int dy = yi - xi;
          const int dx = yj - xj;
          double rho = 1.0;
          if (cfg.mollifier) {
            if (std::max(std::abs(dy), std::abs(dx)) > radius) continue;
            rho = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma)) / mass;
          }
          const Vector2<double> px = grid.center(xi, xj);
          const Vector2<double> py = grid.center(yi, yj);
          const double dist = std::sqrt((px.x() - py.x()) * (px.x() - py.x()) + (px.y() - py.y()) * (px.y() - py.y()));

          const int kx = xi * n + xj;
          const int ky = yi * n + yj;
          double dp = 0.0;
          if (cfg.metric.kind == MetricKind::euclidean) {
            double sq = 0.0;
            for (int c = 0; c < m; ++c) sq += (w(kx, c) - w(ky, c)) * (w(kx, c) - w(ky, c));
            dp = std::pow(std::sqrt(sq), cfg.p);
          } else {
            const double la = std::sqrt(w(kx, 0) * w(kx, 0) + w(kx, 1) * w(kx, 1));
            const double lb = std::sqrt(w(ky, 0) * w(ky, 0) + w(ky, 1) * w(ky, 1));
            double c = (w(kx, 0) * w(ky, 0) + w(kx, 1) * w(ky, 1)) / (la * lb);
            c = std::min(1.0, std::max(-1.0, c));
            dp = std::pow(std::acos(c), cfg.p);
            if (cfg.metric.kind == MetricKind::product) dp += cfg.metric.gamma * std::pow(std::abs(la - lb), cfg.p);
          }
          total += dp * rho / std::pow(dist, 2.0 + cfg.p * cfg.s) * (h * h) * (h * h);
        }
  return total;
}

/// Composite midpoint rule for the line integral of f along r theta + t theta_perp, |t| <= half_length.
inline Eigen::VectorXd line_integral_quadrature(const std::function<Eigen::VectorXd(double, double)>& f, double r,
                                                double phi, double step, double half_length) {
  if (!(step > 0.0) || !(half_length > 0.0)) throw std::invalid_argument("quadrature needs positive step and length");
  const int count = std::max(1, static_cast<int>(std::lround(2.0 * half_length / step)));
  const double dt = 2.0 * half_length / count;
  const double ct = std::cos(phi), st = std::sin(phi);
  Eigen::VectorXd sum;
  for (int k = 0; k < count; ++k) {
    const double t = -half_length + (k + 0.5) * dt;
    const Eigen::VectorXd v = f(r * ct - t * st, r * st + t * ct);
    if (k == 0) sum = Eigen::VectorXd::Zero(v.size());
    sum += v;
  }
  return sum * dt;
}

/// Central differences (f(x + h e_i) - f(x - h e_i)) / 2h at the listed flat (row-major) coordinates.
inline std::vector<double> fd_gradient_at(const Objective& objective, const FieldMatrix<double>& point,
                                          const std::vector<Eigen::Index>& coords, double h_fd = 1e-5) {
  if (!(h_fd > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  std::vector<double> out;
  out.reserve(coords.size());
  FieldMatrix<double> probe = point;
  for (Eigen::Index flat : coords) {
    const Eigen::Index r = flat / point.cols();
    const Eigen::Index c = flat % point.cols();
    const double x0 = probe(r, c);
    probe(r, c) = x0 + h_fd;
    const double fp = objective(probe, nullptr);
    probe(r, c) = x0 - h_fd;
    const double fm = objective(probe, nullptr);
    probe(r, c) = x0;
    out.push_back((fp - fm) / (2.0 * h_fd));
  }
  return out;
}

/// Full central-difference gradient.
inline FieldMatrix<double> fd_gradient(const Objective& objective, const FieldMatrix<double>& point,
                                       double h_fd = 1e-5) {
  std::vector<Eigen::Index> coords(static_cast<std::size_t>(point.size()));
  for (Eigen::Index k = 0; k < point.size(); ++k) coords[static_cast<std::size_t>(k)] = k;
  const auto values = fd_gradient_at(objective, point, coords, h_fd);
  FieldMatrix<double> out(point.rows(), point.cols());
  for (Eigen::Index k = 0; k < point.size(); ++k) out(k / point.cols(), k % point.cols()) = values[std::size_t(k)];
  return out;
}

/**
 * Largest per-coordinate error of an analytic gradient against finite
 * differences: relative where |analytic| >= 1e-10, absolute below.
 */
inline double gradient_mismatch(const FieldMatrix<double>& analytic, const std::vector<Eigen::Index>& coords,
                                const std::vector<double>& numeric) {
  double worst = 0.0;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    const double a = analytic(coords[k] / analytic.cols(), coords[k] % analytic.cols());
    const double err = std::abs(a - numeric[k]);
    worst = std::max(worst, std::abs(a) < 1e-10 ? err : err / std::abs(a));
  }
  return worst;
}

}  // namespace manitomo::reference
