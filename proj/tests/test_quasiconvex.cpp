#include "doctest.h"

#include <cmath>
#include <random>

#include "adjcone/quasiconvex.hpp"
#include "test_util.hpp"

using namespace adjcone;
using namespace testutil;

TEST_CASE("evaluate step function") {
  const auto f = step1d();
  CHECK(evaluate(f, vec({-0.5})) == 0);
  CHECK(evaluate(f, vec({0.5})) == 1);
  CHECK(std::isinf(evaluate(f, vec({3}))));
}

TEST_CASE("construction validates the family") {
  CHECK_THROWS_AS(StepLevelFunction({1, 0}, {interval(0, 1), interval(0, 2)}), InputError);
  CHECK_THROWS_AS(StepLevelFunction({0, 1}, {interval(2, 3), interval(-1, 1)}), InputError);
  CHECK_THROWS_AS(StepLevelFunction({0}, {interval(0, 1), interval(0, 2)}), InputError);
  CHECK_FALSE(corrupted1d().nested());
  CHECK(step1d().full_dimensional());
}

TEST_CASE("sublevel and strict_sublevel") {
  const auto f = step1d();
  auto s = sublevel(f, 1);
  REQUIRE_FALSE(s.empty());
  CHECK(s.realization->lower()[0] == doctest::Approx(-1));
  CHECK(s.realization->upper()[0] == doctest::Approx(1));
  CHECK(sublevel(f, 1.5).realization->upper()[0] == doctest::Approx(1));
  CHECK(sublevel(f, -1).empty());

  auto t = strict_sublevel(f, 1);
  REQUIRE_FALSE(t.empty());
  CHECK(t.realization->upper()[0] == doctest::Approx(0));
  CHECK(t.closed);
  CHECK(strict_sublevel(f, 0).empty());
  CHECK(strict_sublevel(f, 2).realization->upper()[0] == doctest::Approx(1));
}

TEST_CASE("in_argmin") {
  const auto f = step1d();
  CHECK(in_argmin(f, vec({-0.5})));
  CHECK_FALSE(in_argmin(f, vec({0.5})));
  CHECK(in_argmin(f, vec({0})));
}

TEST_CASE("rho") {
  const auto f = step1d();
  CHECK(rho(f, vec({0.5})) == doctest::Approx(project(interval(-1, 0), vec({0.5})).distance));
  CHECK(rho(f, vec({1.0})) == doctest::Approx(1.0));
  CHECK(rho(sq2d(), vec({2, 2})) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(rho(f, vec({-0.5})), InputError);
  CHECK_THROWS_AS(rho(f, vec({5})), InputError);
}

TEST_CASE("adjusted_contains") {
  const auto f = step1d();
  CHECK(adjusted_contains(f, vec({0.5}), vec({0.25})));
  CHECK_FALSE(adjusted_contains(f, vec({0.5}), vec({0.75})));
  CHECK(adjusted_contains(f, vec({-0.5}), vec({0})));
  CHECK_FALSE(adjusted_contains(f, vec({-0.5}), vec({0.1})));
  CHECK_THROWS_AS(adjusted_contains(f, vec({4}), vec({0})), InputError);
}

TEST_CASE("sandwich, consistency and rho positivity (property)") {
  std::mt19937_64 rng(21);
  for (const auto& f : {step1d(), sq2d()}) {
    const Vector lo = f.domain_lower().array() - 0.5, hi = f.domain_upper().array() + 0.5;
    for (int s = 0; s < 300; ++s) {
      const Vector x = uniform_in_box(f.domain_lower(), f.domain_upper(), rng);
      const double L = evaluate(f, x);
      const AdjustedSet S(f, x);
      CHECK(S.contains(x));
      if (!S.at_argmin()) CHECK(rho(f, x) > 0);
      for (int p = 0; p < 10; ++p) {
        const Vector y = uniform_in_box(lo, hi, rng);
        const bool in_strict = evaluate(f, y) < L;
        const bool in_adj = S.contains(y);
        const bool in_level = evaluate(f, y) <= L;
        CHECK((!in_strict || in_adj));
        CHECK((!in_adj || in_level));
      }
    }
  }
}

TEST_CASE("monotone levels (property)") {
  const auto f = sq2d();
  for (double a : {1.0, 1.5, 2.0}) {
    for (double b : {1.0, 1.5, 2.0, 3.0}) {
      if (a > b) continue;
      const LevelSet La = sublevel(f, a);
      for (const Vector& v : La.realization->vertices()) {
        CHECK(contains(*sublevel(f, b).realization, v));
      }
    }
  }
}

TEST_CASE("quasiconvexity_check") {
  SamplingPlan plan;
  plan.base_points = 200;
  plan.pairs = 50;
  CHECK(quasiconvexity_check(step1d(), plan).pass);
  CHECK(quasiconvexity_check(sq2d(), plan).pass);

  const auto two_wells = AnalyticFunction::registered("two_wells", interval(-2, 2));
  const Verdict v = quasiconvexity_check(two_wells, SamplingPlan{});
  REQUIRE_FALSE(v.pass);
  const auto& w = *v.witness;
  // The worst sampled triple approaches (-1, 1, 1/2) up to ordering.
  const double lo = std::min(w.a[0], w.b[0]), hi = std::max(w.a[0], w.b[0]);
  CHECK(lo == doctest::Approx(-1).epsilon(0.1));
  CHECK(hi == doctest::Approx(1).epsilon(0.1));
  CHECK(w.excess == doctest::Approx(1.0).epsilon(0.1));
  const Vector mid = w.t * w.a + (1 - w.t) * w.b;
  CHECK(two_wells(mid) > std::max(two_wells(w.a), two_wells(w.b)));

  const auto max_abs = AnalyticFunction::registered("max_abs", square(1));
  CHECK(quasiconvexity_check(max_abs, plan).pass);
  CHECK_FALSE(quasiconvexity_check(corrupted1d(), plan).pass);
}

TEST_CASE("adjusted_convexity_check agrees with quasiconvexity_check") {
  SamplingPlan plan;
  plan.base_points = 200;
  plan.pairs = 50;
  CHECK(adjusted_convexity_check(step1d(), plan).pass);
  CHECK(adjusted_convexity_check(sq2d(), plan).pass);

  const Verdict c = adjusted_convexity_check(corrupted1d(), plan);
  REQUIRE_FALSE(c.pass);
  const auto& w = *c.witness;
  const Vector z = w.t * w.a + (1 - w.t) * w.b;
  CHECK(adjusted_contains(corrupted1d(), w.base, w.a));
  CHECK(adjusted_contains(corrupted1d(), w.base, w.b));
  CHECK_FALSE(adjusted_contains(corrupted1d(), w.base, z));

  CHECK_FALSE(adjusted_convexity_check(AnalyticFunction::registered("two_wells", interval(-2, 2)), plan).pass);
  CHECK(adjusted_convexity_check(AnalyticFunction::registered("max_abs", square(1)), plan).pass);
  CHECK(adjusted_convexity_check(AnalyticFunction::registered("norm", square(1)), plan).pass);
}

TEST_CASE("analytic rho ladder") {
  const auto f = AnalyticFunction::registered("norm", interval(-2, 2));
  const RhoEstimate r = analytic_rho(f, vec({1.0}));
  // S^< of the norm at 1 is (-1, 1), so the true value is 0.
  CHECK(r.value <= 2e-3);
  CHECK(r.spread <= 1.1e-2);
  CHECK(r.values.size() == 3);
}

TEST_CASE("checks are deterministic for a fixed seed") {
  SamplingPlan plan;
  plan.base_points = 50;
  plan.pairs = 20;
  const auto a = adjusted_convexity_check(corrupted1d(), plan);
  const auto b = adjusted_convexity_check(corrupted1d(), plan);
  REQUIRE(a.witness);
  REQUIRE(b.witness);
  CHECK(a.witness->a[0] == b.witness->a[0]);
  CHECK(a.witness->t == b.witness->t);
  CHECK(a.checks == b.checks);
}
