#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "manitomo/objective.hpp"
#include "manitomo/optimize.hpp"
#include "manitomo/phantoms.hpp"

using namespace manitomo;
using std::numbers::pi;

namespace {

// f(x) = 1/2 sum_k d_k (x_k - c_k)^2 with d_k in [1, 4].
Objective quadratic(const FieldMatrix<double>& center, const FieldMatrix<double>& diag) {
  return [center, diag](const FieldMatrix<double>& x, FieldMatrix<double>* g) {
    const FieldMatrix<double> r = x - center;
    if (g) *g = diag.cwiseProduct(r);
    return 0.5 * diag.cwiseProduct(r).cwiseProduct(r).sum();
  };
}

bool monotone(const GDResult& r) {
  for (std::size_t k = 1; k < r.trace.size(); ++k)
    if (!(r.trace[k].objective < r.trace[k - 1].objective)) return false;
  return true;
}

}  // namespace

TEST_CASE("gradient descent minimizes a separable quadratic") {
  FieldMatrix<double> c(5, 2), d(5, 2);
  c << 1, -2, 0.5, 3, -1, 0, 2, 2, 0.25, -0.75;
  d << 1, 2, 3, 4, 1.5, 2.5, 3.5, 1, 2, 4;
  GDParams params;
  params.max_iters = 200;
  params.step0 = 0.5;
  params.grad_tol = 1e-9;
  const GDResult r = minimize(quadratic(c, d), FieldMatrix<double>(FieldMatrix<double>::Zero(5, 2)), params);
  CHECK(r.status == GDStatus::converged);
  CHECK(r.iterations() <= 200);
  CHECK((r.params - c).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(monotone(r));
  CHECK(r.trace.front().iter == 0);
  CHECK(r.trace.front().step == 0.0);
  CHECK(r.final_objective() <= 1e-12);
}

TEST_CASE("zero gradient at the start converges immediately") {
  FieldMatrix<double> c = FieldMatrix<double>::Constant(3, 1, 0.7);
  const GDResult r = minimize(quadratic(c, FieldMatrix<double>::Ones(3, 1)), c, GDParams{});
  CHECK(r.status == GDStatus::converged);
  CHECK(r.iterations() == 0);
  CHECK(r.trace.size() == 1);
  CHECK(r.params == c);
}

TEST_CASE("iteration cap and failed line search are reported") {
  FieldMatrix<double> c(1, 1), d(1, 1);
  c << 10;
  d << 1;
  GDParams params;
  params.max_iters = 3;
  params.step0 = 0.1;
  const GDResult capped = minimize(quadratic(c, d), FieldMatrix<double>(FieldMatrix<double>::Zero(1, 1)), params);
  CHECK(capped.status == GDStatus::max_iters);
  CHECK(capped.iterations() == 3);

  // A wrong gradient sign never yields descent.
  const Objective liar = [](const FieldMatrix<double>& x, FieldMatrix<double>* g) {
    if (g) *g = -x;
    return 0.5 * x.squaredNorm();
  };
  params.max_backtracks = 10;
  const GDResult failed = minimize(liar, FieldMatrix<double>(FieldMatrix<double>::Ones(1, 1)), params);
  CHECK(failed.status == GDStatus::line_search_failed);
  CHECK(failed.iterations() == 0);
}

TEST_CASE("minimize rejects bad input") {
  const Objective f = quadratic(FieldMatrix<double>::Zero(2, 1), FieldMatrix<double>::Ones(2, 1));
  FieldMatrix<double> bad = FieldMatrix<double>::Zero(2, 1);
  bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(minimize(f, bad, GDParams{}), std::invalid_argument);
  GDParams p;
  p.shrink = 1.0;
  CHECK_THROWS_AS(minimize(f, FieldMatrix<double>(FieldMatrix<double>::Zero(2, 1)), p), std::invalid_argument);
  p = GDParams{};
  p.step0 = 0;
  CHECK_THROWS_AS(minimize(f, FieldMatrix<double>(FieldMatrix<double>::Zero(2, 1)), p), std::invalid_argument);
  p = GDParams{};
  p.max_iters = 0;
  CHECK_THROWS_AS(minimize(f, FieldMatrix<double>(FieldMatrix<double>::Zero(2, 1)), p), std::invalid_argument);
}

TEST_CASE("projected descent stays admissible") {
  // Minimum of the unconstrained quadratic sits outside the box [0, 1].
  FieldMatrix<double> c(2, 1);
  c << 2, -1;
  const BasicParamProjection<double> clamp = [](FieldMatrix<double>& x) { x = x.cwiseMax(0.0).cwiseMin(1.0); };
  GDParams params;
  params.max_iters = 50;
  const GDResult r = minimize(quadratic(c, FieldMatrix<double>::Ones(2, 1)), FieldMatrix<double>(FieldMatrix<double>::Constant(2, 1, 0.5)),
                              params, clamp);
  CHECK(r.params(0, 0) == 1.0);
  CHECK(r.params(1, 0) == 0.0);
  CHECK(monotone(r));
}

TEST_CASE("project_annulus") {
  using V = Vector2<double>;
  CHECK(project_annulus(V(0.5, 0), 0.1, 1.0) == V(0.5, 0));
  CHECK(project_annulus(V(0, 0), 0.1, 1.0) == V(0.1, 0));
  CHECK((project_annulus(V(3, 4), 0.1, 1.0) - V(0.6, 0.8)).norm() <= 1e-15);
  CHECK((project_annulus(V(0.003, -0.004), 0.1, 1.0) - V(0.06, -0.08)).norm() <= 1e-15);
  CHECK_THROWS_AS(project_annulus(V(1, 0), 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(project_annulus(V(1, 0), 1.0, 1.0), std::invalid_argument);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 10000; ++t) {
    const V x(u(rng), u(rng));
    const V y = project_annulus(x, 0.05, 1.5);
    REQUIRE(y.norm() >= 0.05);
    REQUIRE(y.norm() <= 1.5);
    REQUIRE(project_annulus(y, 0.05, 1.5) == y);
    REQUIRE(std::abs(std::atan2(y.y(), y.x()) - std::atan2(x.y(), x.x())) <= 1e-12);
  }
}

TEST_CASE("project_angle") {
  CHECK(project_angle(0.25) == 0.25);
  CHECK(project_angle(1.0) == 0.0);
  CHECK(project_angle(-0.25) == 0.75);
  CHECK(project_angle(3.5) == 0.5);
  CHECK(project_angle(-1e-20) == 0.0);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int t = 0; t < 10000; ++t) {
    const double x = u(rng);
    const double y = project_angle(x);
    REQUIRE(y >= 0.0);
    REQUIRE(y < 1.0);
    REQUIRE(project_angle(y) == y);
    REQUIRE(std::abs(std::remainder(x - y, 1.0)) <= 1e-12);
  }
}

TEST_CASE("trace csv") {
  std::vector<TraceEntry> trace = {{0, 2.5, 1.0, 0.0}, {1, 0.1, 0.5, 0.25}};
  std::ostringstream out;
  write_trace_csv(out, trace);
  CHECK(out.str() == "iter,objective,grad_norm,step\n0,2.5,1,0\n1,0.10000000000000001,0.5,0.25\n");
}

TEST_CASE("lifted reconstruction on 32x32 descends") {
  const Grid g = make_grid(32);
  auto proj = std::make_shared<const Projector>(Geometry(g, Geometry::default_offsets(g), 45, g.spacing() / 2));
  const AngleField truth = angle_phantom(AnglePhantom::two_region, g);
  const Sinogram v = add_noise(proj->radon(truth.to_vectors()), NoiseSpec{1e-3, 4});

  RegConfig cfg;
  cfg.s = 0.49;
  cfg.p = 2;
  cfg.alpha = 0.1;
  cfg.mollifier = make_mollifier(2, g.spacing());
  cfg.metric.kind = MetricKind::sphere;
  cfg.metric.p = 2;
  const Objective f = full_objective<double>(proj, v, OperatorKind::radon, cfg, Parameterization::angle);

  FieldMatrix<double> init = FieldMatrix<double>::Constant(g.pixels(), 1, 1.0);
  GDParams params;
  params.max_iters = 40;
  const GDResult a = minimize(f, init, params);
  const GDResult b = minimize(f, init, params);
  CHECK(a.iterations() > 0);
  CHECK(monotone(a));
  CHECK(a.final_objective() < a.trace.front().objective);
  // deterministic
  CHECK(a.params == b.params);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) CHECK(a.trace[k].objective == b.trace[k].objective);

  const AngleField u0(g, init.col(0), false), u1(g, a.params.col(0), false);
  const auto fid0 = fidelity(u0.to_vectors(), v, *proj, OperatorKind::radon, 2.0, false).value;
  const auto fid1 = fidelity(u1.to_vectors(), v, *proj, OperatorKind::radon, 2.0, false).value;
  CHECK(fid1 < fid0);
}
