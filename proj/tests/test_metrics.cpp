#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "manitomo/metrics.hpp"

using namespace manitomo;
using std::numbers::pi;
using V2 = Eigen::Vector2d;

namespace {

V2 polar(double angle, double length) { return length * V2(std::cos(angle), std::sin(angle)); }

struct Sampler {
  std::mt19937_64 rng;
  explicit Sampler(std::uint64_t seed) : rng(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
  V2 unit() { return polar(uniform(-pi, pi), 1.0); }
  V2 in_annulus(double eps, double r_max) { return polar(uniform(-pi, pi), uniform(eps, r_max)); }
};

MetricSpec product_spec(double gamma, double p, double eps, double r_max) {
  MetricSpec m;
  m.kind = MetricKind::product;
  m.gamma = gamma;
  m.p = p;
  m.epsilon = eps;
  m.r_max = r_max;
  return m;
}

}  // namespace

TEST_CASE("d_euclidean examples") {
  CHECK(d_euclidean(V2(0, 0), V2(3, 4)) == 5.0);
  CHECK(d_euclidean(V2(0.3, -2), V2(0.3, -2)) == 0.0);
  CHECK(d_euclidean(V2(1, 0), V2(-1, 0)) == 2.0);
  CHECK_THROWS_AS(d_euclidean(Eigen::VectorXd::Ones(3), Eigen::VectorXd::Ones(2)), std::invalid_argument);
}

TEST_CASE("d_sphere examples") {
  CHECK(d_sphere(V2(1, 0), V2(0, 1)) == doctest::Approx(pi / 2));
  CHECK(d_sphere(V2(1, 0), V2(-1, 0)) == doctest::Approx(pi));
  CHECK(d_sphere(V2(0.6, 0.8), V2(0.6, 0.8)) == 0.0);
  CHECK(d_sphere(V2(3, 0), V2(0, 0.5)) == doctest::Approx(pi / 2));  // normalized defensively
  CHECK_THROWS_AS(d_sphere(V2(0, 0), V2(1, 0)), std::invalid_argument);
}

TEST_CASE("wrap_angle and d_angle") {
  CHECK(wrap_angle(-pi) == pi);
  CHECK(wrap_angle(pi) == pi);
  CHECK(wrap_angle(3 * pi) == doctest::Approx(pi));
  CHECK(wrap_angle(0.0) == 0.0);
  CHECK(d_angle(0.0, 2 * pi) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(d_angle(0.0, pi / 2) == doctest::Approx(pi / 2));
  CHECK(std::abs(d_angle(0.1, 2 * pi - 0.1) - 0.2) <= 1e-12);
  CHECK(d_angle(0.0, pi) == pi);

  Sampler s(1);
  double worst = 0.0;
  for (int t = 0; t < 10000; ++t) {
    const double u1 = s.uniform(-20, 20), u2 = s.uniform(-20, 20);
    const double a = d_angle(u1, u2);
    CHECK_MESSAGE((a >= 0.0 && a <= pi), "d_angle out of range");
    worst = std::max(worst, std::abs(a - d_sphere(polar(u1, 1), polar(u2, 1))));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("d_product examples") {
  const MetricSpec m = product_spec(1.0, 2.0, 0.1, 1.0);
  CHECK(d_product(V2(0.3, 0.4), V2(0.3, 0.4), m) == 0.0);
  CHECK(d_product(V2(1, 0), V2(0.5, 0), m) == doctest::Approx(0.5));
  CHECK(d_product(V2(1, 0), V2(0, 0.3), product_spec(0.0, 2.0, 0.1, 1.0)) == doctest::Approx(pi / 2));
  CHECK_THROWS_AS(d_product(V2(0.05, 0), V2(1, 0), m), std::invalid_argument);
  CHECK_THROWS_AS(d_product(V2(1.5, 0), V2(1, 0), m), std::invalid_argument);
}

TEST_CASE("metric spec validation") {
  CHECK_THROWS_AS(product_spec(-1, 2, 0.1, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(product_spec(1, 1, 0.1, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(product_spec(1, 2, 1, 1).validate(), std::invalid_argument);
  CHECK_THROWS_AS(product_spec(1, 2, 0, 1).validate(), std::invalid_argument);
  CHECK_NOTHROW(product_spec(0, 1.1, 1e-3, 0.1).validate());
}

TEST_CASE("d_product satisfies the metric axioms") {
  Sampler s(2);
  for (double p : {1.1, 2.0, 3.0}) {
    const MetricSpec m = product_spec(s.uniform(0.2, 4.0), p, 0.05, 1.5);
    double worst_slack = 0.0;
    for (int t = 0; t < 10000; ++t) {
      const V2 x = s.in_annulus(m.epsilon, m.r_max);
      const V2 y = s.in_annulus(m.epsilon, m.r_max);
      const V2 z = s.in_annulus(m.epsilon, m.r_max);
      const double dxy = d_product(x, y, m);
      REQUIRE(dxy == d_product(y, x, m));
      REQUIRE(d_product(x, x, m) == 0.0);
      REQUIRE(dxy > 0.0);
      worst_slack = std::max(worst_slack, dxy - d_product(x, z, m) - d_product(z, y, m));
    }
    CHECK(worst_slack <= 1e-12);
  }
}

TEST_CASE("d_sphere sandwich |a - b| <= d <= (pi/2) |a - b|") {
  Sampler s(3);
  for (int t = 0; t < 10000; ++t) {
    const V2 a = s.unit(), b = s.unit();
    const double chord = (a - b).norm();
    const double d = d_sphere(a, b);
    REQUIRE(chord <= d + 1e-9);
    REQUIRE(d <= pi / 2 * chord + 1e-9);
  }
}

TEST_CASE("d_product equivalence with the Euclidean distance") {
  Sampler s(4);
  for (double p : {1.1, 2.0}) {
    for (double r_max : {0.1, 1.0, 2.5}) {
      const double eps = r_max / 20;
      const double gamma = s.uniform(1.0, 5.0);
      const MetricSpec m = product_spec(gamma, p, eps, r_max);
      const double lower = std::pow(2.0, (p - 1) / p) * std::max(1.0, r_max);
      const double upper = pi / eps + std::pow(gamma, 1 / p);
      double worst_ratio = 0.0;
      for (int t = 0; t < 10000; ++t) {
        const V2 x = s.in_annulus(eps, r_max), y = s.in_annulus(eps, r_max);
        const double e = (x - y).norm();
        const double d = d_product(x, y, m);
        REQUIRE(e <= lower * d * (1 + 1e-12));
        worst_ratio = std::max(worst_ratio, d / e);
      }
      CHECK(std::isfinite(worst_ratio));
      CHECK(worst_ratio <= upper);
    }
  }
}

TEST_CASE("mollifier n_rho = 1, sigma = 1") {
  const Mollifier m = make_mollifier(1, 0.1, 1.0);
  CHECK(m.weight(0, 0) == m.max_weight());
  CHECK(m.weight(0, 1) == m.weight(1, 0));
  CHECK(m.weight(0, -1) == m.weight(-1, 0));
  CHECK(m.weight(0, 1) == m.weight(0, -1));
  CHECK(m.weight(1, 1) == m.weight(-1, -1));
  CHECK(m.weight(1, -1) == m.weight(-1, 1));
  CHECK(m.weight(1, 1) == m.weight(1, -1));
  CHECK(m.weight(1, 1) < m.weight(0, 1));
  CHECK(m.weight(2, 0) == 0.0);
  CHECK(m.support_size() == 8);
}

TEST_CASE("mollifier invariants") {
  for (int n : {1, 2, 3}) {
    for (double h : {0.02, 0.0625, 1.0}) {
      const Mollifier m = make_mollifier(n, h);
      CHECK(m.sigma() == doctest::Approx(n / 2.0));
      double mass = 0.0;
      int nonzero = 0;
      for (int dy = -n; dy <= n; ++dy)
        for (int dx = -n; dx <= n; ++dx) {
          const double w = m.weight(dy, dx);
          mass += w * h * h;
          nonzero += (dy || dx) && w > 0.0;
          CHECK(w == doctest::Approx(m.weight(dx, dy)).epsilon(1e-15));
          CHECK(w == doctest::Approx(m.weight(-dy, dx)).epsilon(1e-15));
          // radially decreasing
          for (int ey = -n; ey <= n; ++ey)
            for (int ex = -n; ex <= n; ++ex)
              if (ey * ey + ex * ex > dy * dy + dx * dx) CHECK(m.weight(ey, ex) <= w);
        }
      CHECK(std::abs(mass - 1.0) <= 1e-12);
      CHECK(nonzero == (2 * n + 1) * (2 * n + 1) - 1);
      CHECK(m.weight(0, 0) > 0.0);
    }
  }
  CHECK(make_mollifier(2, 0.1).support_size() == 24);
  CHECK_THROWS_AS(make_mollifier(0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(make_mollifier(4, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(Mollifier(1, 0.1, -1.0), std::invalid_argument);
}
