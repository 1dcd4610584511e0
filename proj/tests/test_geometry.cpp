#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "adjcone/polytope.hpp"
#include "test_util.hpp"

using namespace adjcone;
using namespace testutil;

TEST_CASE("contains") {
  const Polytope I = interval(-1, 1);
  CHECK(contains(I, vec({0.5}), 1e-9));
  CHECK(contains(I, vec({1 + 1e-12}), 1e-9));
  CHECK_FALSE(contains(square(1), vec({2, 0}), 1e-9));
  CHECK_THROWS_AS(contains(I, vec({0, 0})), InputError);
}

TEST_CASE("construction rejects empty and unbounded halfspace systems") {
  Matrix A(2, 1);
  A << 1, -1;
  CHECK_THROWS_AS(Polytope::from_halfspaces(A, vec({-1, -1})), InputError);  // x <= -1, x >= 1
  Matrix H(1, 2);
  H << 1, 0;
  CHECK_THROWS_AS(Polytope::from_halfspaces(H, vec({1})), InputError);
  const Polytope P = Polytope::from_halfspaces(A, vec({2, 1}));
  CHECK(P.lower()[0] == doctest::Approx(-1));
  CHECK(P.upper()[0] == doctest::Approx(2));
  CHECK(P.inradius() == doctest::Approx(1.5));
}

TEST_CASE("project: interval endpoint and square corner") {
  const Projection a = project(interval(-1, 0), vec({0.5}));
  CHECK(a.point[0] == doctest::Approx(0.0));
  CHECK(a.distance == doctest::Approx(0.5));

  const Projection b = project(square(1), vec({2, 2}));
  CHECK(b.point[0] == doctest::Approx(1.0));
  CHECK(b.point[1] == doctest::Approx(1.0));
  CHECK(b.distance == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("project: lower-dimensional polytope") {
  // segment {(t, 0) : t in [0,1]}
  const Polytope seg = Polytope::from_points(std::vector<Vector>{vec({0, 0}), vec({1, 0})});
  const Projection p = project(seg, vec({2, 3}));
  CHECK(p.point[0] == doctest::Approx(1.0));
  CHECK(p.point[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(p.distance == doctest::Approx(std::sqrt(10.0)));
}

namespace {

// Coarse-to-fine grid search for min ||y - x|| over y in P, membership by
// H-rep only. Each stage refines a 21^n grid around the incumbent.
double grid_distance(const Polytope& P, const Vector& x) {
  const int n = P.dim();
  Vector lo = P.lower(), hi = P.upper();
  double best = std::numeric_limits<double>::infinity();
  Vector best_y = P.center();
  for (int stage = 0; stage < 5; ++stage) {
    const int steps = 20;
    const Vector h = (hi - lo) / steps;
    std::vector<int> idx(n, 0);
    while (true) {
      Vector y(n);
      for (int k = 0; k < n; ++k) y[k] = lo[k] + idx[k] * h[k];
      if (contains(P, y, 0.0)) {
        const double d = (y - x).norm();
        if (d < best) {
          best = d;
          best_y = y;
        }
      }
      int k = 0;
      while (k < n && ++idx[k] > steps) idx[k++] = 0;
      if (k == n) break;
    }
    lo = (best_y - 2 * h).cwiseMax(P.lower());
    hi = (best_y + 2 * h).cwiseMin(P.upper());
  }
  return best;
}

}  // namespace

TEST_CASE("project: random 3D polytope agrees with grid oracle") {
  std::mt19937_64 rng(7);
  const Polytope P = random_polytope(3, 10, 1.0, vec({0.2, -0.1, 0.3}), rng);
  for (const Vector& x : {vec({3, 1, -2}), vec({-2.5, 0.4, 0.1}), vec({0.5, 2.8, 2.2})}) {
    const Projection pr = project(P, x);
    CHECK(std::abs(pr.distance - grid_distance(P, x)) <= 1e-3);
  }
}

TEST_CASE("project: optimality and variational characterization (property)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const Polytope P = random_polytope(n, 8, 1.0, Vector::Zero(n), rng);
    const Vector x = uniform_in_box(Vector::Constant(n, -4), Vector::Constant(n, 4), rng);
    const Projection pr = project(P, x);
    CHECK(contains(P, pr.point, 1e-9));
    for (int s = 0; s < 200; ++s) {
      const Vector y = uniform_in_box(P.lower(), P.upper(), rng);
      if (!contains(P, y, 0.0)) continue;
      CHECK(pr.distance <= (x - y).norm() + 1e-9);
      CHECK((x - pr.point).dot(y - pr.point) <= 1e-9);
    }
  }
}

TEST_CASE("enlarged_contains") {
  CHECK(enlarged_contains(interval(-1, 0), 0.5, vec({0.5})));
  CHECK_FALSE(enlarged_contains(interval(-1, 0), 0.5, vec({0.75})));
  CHECK(enlarged_contains(square(1), 1.0, vec({2, 0})));
  CHECK_THROWS_AS(enlarged_contains(square(1), -0.1, vec({0, 0})), InputError);
}

TEST_CASE("vertices") {
  auto V = vertices(square(1));
  CHECK(V.size() == 4);
  for (const Vector& v : V) {
    CHECK(std::abs(v[0]) == doctest::Approx(1));
    CHECK(std::abs(v[1]) == doctest::Approx(1));
  }
  auto W = vertices(interval(-1, 0));
  REQUIRE(W.size() == 2);
  CHECK(std::min(W[0][0], W[1][0]) == doctest::Approx(-1));
  CHECK(std::max(W[0][0], W[1][0]) == doctest::Approx(0));

  Matrix A5 = Matrix::Zero(10, 5);
  CHECK_THROWS_AS(vertices(Polytope::box(Vector::Zero(5), Vector::Ones(5))), InputError);
}

TEST_CASE("vertices: random hexagon matches hull of a dense boundary sample") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  Matrix A(6, 2);
  Vector b(6);
  for (int i = 0; i < 6; ++i) {
    const double th = 2 * M_PI * i / 6 + jitter(rng);
    A(i, 0) = std::cos(th);
    A(i, 1) = std::sin(th);
    b[i] = 1.0;
  }
  const Polytope hex = Polytope::from_halfspaces(A, b);
  const auto V = vertices(hex);
  CHECK(V.size() == 6);

  // Boundary sample: points on each supporting line that satisfy all rows.
  std::vector<Vector> boundary;
  for (int i = 0; i < 6; ++i) {
    const Vector a = A.row(i).transpose();
    const Vector t(vec({-a[1], a[0]}));
    for (int s = -4000; s <= 4000; ++s) {
      const Vector y = a * b[i] + t * (s * 1e-3);
      if (contains(hex, y, 1e-12)) boundary.push_back(y);
    }
  }
  // Sample extremes sit in pairs near each corner; cluster them.
  std::vector<Vector> hull;
  for (const Vector& h : extreme_points(boundary)) {
    bool near = false;
    for (const Vector& e : hull) near = near || (e - h).norm() <= 1e-2;
    if (!near) hull.push_back(h);
  }
  CHECK(hull.size() == 6);
  for (const Vector& v : V) {
    double best = 1e9;
    for (const Vector& h : hull) best = std::min(best, (h - v).norm());
    CHECK(best <= 2e-3);
  }
}

TEST_CASE("vertices/halfspaces duality on random points (property)") {
  std::mt19937_64 rng(5);
  const Polytope P = random_polytope(3, 9, 1.0, vec({0, 0, 0}), rng);
  const auto V = vertices(P);
  int agree = 0;
  for (int s = 0; s < 1000; ++s) {
    const Vector x = uniform_in_box(P.lower() * 1.2, P.upper() * 1.2, rng);
    agree += contains(P, x, 1e-9) == hull_contains(V, x, 1e-9);
  }
  CHECK(agree == 1000);
}

TEST_CASE("proper_faces") {
  CHECK(proper_faces(square(1)).size() == 8);
  CHECK(proper_faces(interval(0, 1)).size() == 2);
  const Polytope tri = Polytope::from_points(std::vector<Vector>{vec({0, 0}), vec({1, 0}), vec({0, 1})});
  const auto F = proper_faces(tri);
  CHECK(F.size() == 6);
  CHECK(std::count_if(F.begin(), F.end(), [](const Face& f) { return f.dim == 1; }) == 3);
  CHECK(std::count_if(F.begin(), F.end(), [](const Face& f) { return f.dim == 0; }) == 3);
  const Polytope cube = Polytope::box(Vector::Zero(3), Vector::Ones(3));
  CHECK(proper_faces(cube).size() == 6 + 12 + 8);
}

TEST_CASE("is_inside_point") {
  CHECK(is_inside_point(square(1), vec({0, 0})));
  CHECK_FALSE(is_inside_point(square(1), vec({1, 0})));
  CHECK_FALSE(is_inside_point(square(1), vec({3, 0})));
  const Polytope seg = Polytope::from_points(std::vector<Vector>{vec({0, 0}), vec({1, 0})});
  CHECK(is_inside_point(seg, vec({0.5, 0})));
  CHECK_FALSE(is_inside_point(seg, vec({1, 0})));
  CHECK_FALSE(is_inside_point(seg, vec({0.5, 0.1})));
}

TEST_CASE("is_inside_point agrees with face enumeration (property)") {
  std::mt19937_64 rng(13);
  const Polytope tri = Polytope::from_points(std::vector<Vector>{vec({0, 0}), vec({2, 0}), vec({0, 1})});
  const Polytope seg3 = Polytope::from_points(std::vector<Vector>{vec({0, 0, 0}), vec({1, 1, 1})});
  for (const Polytope* P : {&tri, &seg3}) {
    const auto faces = proper_faces(*P);
    std::vector<Vector> probes;
    for (const Vector& v : P->vertices()) probes.push_back(v);
    const auto& V = P->vertices();
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int s = 0; s < 300; ++s) {
      // Random points in the hull, some snapped to edges.
      std::vector<double> w(V.size());
      double sum = 0;
      for (auto& x : w) sum += (x = u(rng));
      Vector y = Vector::Zero(P->dim());
      for (size_t j = 0; j < V.size(); ++j) y += (s % 3 == 0 && j == 0 ? 0.0 : w[j] / sum) * V[j];
      if (s % 3 == 0) y /= (1 - w[0] / sum);
      probes.push_back(y);
    }
    for (const Vector& x : probes) {
      bool on_face = false;
      for (const Face& f : faces) {
        bool all = true;
        for (int i : f.halfspaces) {
          if (std::abs(P->normals().row(i).dot(x) - P->offsets()[i]) > 1e-9) all = false;
        }
        on_face = on_face || all;
      }
      CHECK(is_inside_point(*P, x) == (contains(*P, x) && !on_face));
    }
  }
}

TEST_CASE("in_class_D") {
  CHECK(in_class_D(square(1)));
  CHECK(in_class_D(interval(0, 1)));
  CHECK(in_class_D(Polytope::point(vec({1, 2, 3}))));
}

TEST_CASE("weighted_minkowski") {
  const Polytope Q = square(1);
  std::vector<WeightedTerm> id{{1.0, Q}};
  const Polytope R = weighted_minkowski(id);
  CHECK(R.vertices().size() == 4);
  for (const Vector& v : R.vertices()) CHECK(hull_contains(Q.vertices(), v, 1e-9));

  std::vector<WeightedTerm> pts{{0.6, Polytope::point(vec({0.25}))}, {0.4, Polytope::point(vec({0.3}))}};
  const Polytope S = weighted_minkowski(pts);
  CHECK(S.lower()[0] == doctest::Approx(0.27));
  CHECK(S.upper()[0] == doctest::Approx(0.27));

  // Interval arithmetic oracle: 0.5*[0,1] + 0.5*[2,4] = [1, 2.5].
  std::vector<WeightedTerm> ivs{{0.5, interval(0, 1)}, {0.5, interval(2, 4)}};
  const Polytope T = weighted_minkowski(ivs);
  CHECK(T.lower()[0] == doctest::Approx(0.5 * 0 + 0.5 * 2));
  CHECK(T.upper()[0] == doctest::Approx(0.5 * 1 + 0.5 * 4));

  std::vector<WeightedTerm> bad{{0.5, interval(0, 1)}, {0.4, interval(2, 4)}};
  CHECK_THROWS_AS(weighted_minkowski(bad), InputError);
  std::vector<WeightedTerm> mixed{{0.5, interval(0, 1)}, {0.5, square(1)}};
  CHECK_THROWS_AS(weighted_minkowski(mixed), InputError);
}

TEST_CASE("weighted_minkowski: two segments give a parallelogram") {
  const Polytope s1 = Polytope::from_points(std::vector<Vector>{vec({1, 0}), vec({0, 1})});
  const Polytope s2 = Polytope::from_points(std::vector<Vector>{vec({0.5, 0}), vec({0, 2})});
  std::vector<WeightedTerm> t{{0.5, s1}, {0.5, s2}};
  const Polytope R = weighted_minkowski(t);
  CHECK(R.vertices().size() == 4);
  CHECK(contains(R, vec({0.75, 0})));
  CHECK(contains(R, vec({0, 1.5})));
  CHECK(contains(R, vec({0.5, 1.0})));
}

TEST_CASE("cone_contains") {
  const GeneratedCone K(2, {vec({1, 0}), vec({0, 1})});
  CHECK(cone_contains(K, vec({1, 1}), 1e-9));
  CHECK_FALSE(cone_contains(GeneratedCone(2, {vec({1, 0})}), vec({0, 1}), 1e-9));
  // (2,1) = 1*(1,0) + 1*(1,1)
  CHECK(cone_contains(GeneratedCone(2, {vec({1, 0}), vec({1, 1})}), vec({2, 1}), 1e-9));
  CHECK(cone_contains(GeneratedCone(2, {}), vec({0, 0}), 1e-9));
  CHECK_FALSE(cone_contains(GeneratedCone(2, {}), vec({0, 1}), 1e-9));
  CHECK_THROWS_AS(GeneratedCone(2, {vec({0, 0})}), InputError);
}

TEST_CASE("cone_section") {
  const Polytope a = cone_section(GeneratedCone(1, {vec({1})}), vec({1}), 0.25);
  CHECK(a.lower()[0] == doctest::Approx(0.25));
  CHECK(a.upper()[0] == doctest::Approx(0.25));

  const Polytope b = cone_section(GeneratedCone(2, {vec({1, 0}), vec({0, 1})}), vec({1, 1}), 1.0);
  CHECK(b.vertices().size() == 2);
  CHECK(contains(b, vec({1, 0})));
  CHECK(contains(b, vec({0, 1})));
  CHECK(contains(b, vec({0.5, 0.5})));
  CHECK_FALSE(contains(b, vec({0.5, 0.4})));

  const Polytope c = cone_section(GeneratedCone(2, {vec({2, 0})}), vec({1, 0}), 0.5);
  CHECK(c.vertices().size() == 1);
  CHECK(c.vertices()[0][0] == doctest::Approx(0.5));
  CHECK(c.vertices()[0][1] == doctest::Approx(0.0));

  CHECK_THROWS_AS(cone_section(GeneratedCone(2, {vec({-1, 0})}), vec({1, 0}), 0.5), NumericalError);
}

TEST_CASE("cone_section never contains the origin (property)") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 2;
    Vector c(n);
    for (int k = 0; k < n; ++k) c[k] = g(rng);
    std::vector<Vector> gens;
    while (gens.size() < 3) {
      Vector v(n);
      for (int k = 0; k < n; ++k) v[k] = g(rng);
      if (v.dot(c) > 0.1 * v.norm() * c.norm()) gens.push_back(v);
    }
    const double eps = 0.3;
    const Polytope S = cone_section(GeneratedCone(n, gens), c, eps);
    for (const Vector& v : S.vertices()) CHECK(v.norm() >= eps / c.norm() - 1e-9);
    CHECK(project(S, Vector::Zero(n)).distance >= eps / c.norm() - 1e-9);
  }
}

TEST_CASE("polar_cone") {
  // Polar of directions of [-3,-1]^2 seen from the origin.
  std::vector<Vector> d{vec({-3, -3}), vec({-1, -3}), vec({-3, -1}), vec({-1, -1})};
  const GeneratedCone P = polar_cone(2, d);
  CHECK(P.generators().size() == 2);
  CHECK(cone_contains(P, vec({3, -1}), 1e-9));
  CHECK(cone_contains(P, vec({-1, 3}), 1e-9));
  CHECK_FALSE(cone_contains(P, vec({3, -1.1}), 1e-9));

  // A single direction in 3D: polar is a halfspace.
  std::vector<Vector> one{vec({0, 0, 1})};
  const GeneratedCone H = polar_cone(3, one);
  CHECK(cone_contains(H, vec({1, 2, -3}), 1e-9));
  CHECK(cone_contains(H, vec({-1, 0, 0}), 1e-9));
  CHECK_FALSE(cone_contains(H, vec({0, 0, 1}), 1e-9));
}

TEST_CASE("GeneratedCone::pruned removes redundant rays") {
  const GeneratedCone K(2, {vec({1, 0}), vec({0, 2}), vec({1, 1}), vec({3, 0})});
  const GeneratedCone P = K.pruned();
  CHECK(P.generators().size() == 2);
  CHECK(cones_equal(K, P, 1e-9));
}
