#include <doctest.h>

#include <cmath>

#include "kio/primitives.hpp"
#include "oracles.hpp"

using namespace kio;

namespace {

using test::jerk_quadrature;
using test::oracle_coefficients;

KinodynamicState at_rest(const Vec3& p) {
  KinodynamicState s;
  s.p = p;
  return s;
}

}  // namespace

TEST_SUITE("primitives") {

TEST_CASE("zero boundary gives the zero primitive") {
  const Primitive p = solve_obvp(at_rest(Vec3::Zero()), at_rest(Vec3::Zero()), 1.5);
  for (const auto& axis : p.coefficients) CHECK(axis.isZero(0.0));
  const auto s = p.eval(0.7);
  CHECK(s.p.isZero(0.0));
  CHECK(s.jerk.isZero(0.0));
  CHECK(jerk_cost(p) == 0.0);
  CHECK(max_speed(p) == 0.0);
  CHECK(max_accel(p) == 0.0);
  for (const Vec3& w : sample_waypoints(p, 20)) CHECK(w.isZero(0.0));
}

TEST_CASE("rest to rest unit displacement") {
  const Primitive p = solve_obvp(at_rest(Vec3::Zero()), at_rest(Vec3(1, 0, 0)), 1.0);
  const Vec6 expected = (Vec6() << 0, 0, 0, 10, -15, 6).finished();
  CHECK((p.coefficients[0] - expected).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(p.coefficients[1].isZero(0.0));
  CHECK(std::abs(jerk_cost(p) - 720.0) < 1e-9);
  CHECK(std::abs(jerk_quadrature(p, 0.0, 1.0) - 720.0) < 1e-6);
  const auto end = p.eval(1.0);
  CHECK(end.p.x() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(end.v.x()) < 1e-12);
  CHECK(std::abs(end.a.x()) < 1e-12);
  CHECK(max_speed(p) == doctest::Approx(1.875).epsilon(1e-9));
}

TEST_CASE("duration must be positive and eval stays in range") {
  CHECK_THROWS_AS(solve_obvp(at_rest(Vec3::Zero()), at_rest(Vec3::Ones()), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(solve_obvp(at_rest(Vec3::Zero()), at_rest(Vec3::Ones()), -1.0), std::invalid_argument);
  const Primitive p = solve_obvp(at_rest(Vec3::Zero()), at_rest(Vec3::Ones()), 1.0);
  CHECK_THROWS_AS(p.eval(-1e-9), std::out_of_range);
  CHECK_THROWS_AS(p.eval(1.0 + 1e-9), std::out_of_range);
  CHECK_THROWS_AS(sample_waypoints(p, 1), std::invalid_argument);
}

TEST_CASE("random BVPs: boundary recovery and agreement with a direct solve") {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const KinodynamicState x0 = test::random_state(rng);
    const KinodynamicState xT = test::random_state(rng);
    const double T = rng.uniform(0.3, 3.0);
    const Primitive p = solve_obvp(x0, xT, T);
    const auto s0 = p.eval(0.0);
    const auto sT = p.eval(T);
    CHECK((s0.p - x0.p).norm() < 1e-9);
    CHECK((s0.v - x0.v).norm() < 1e-9);
    CHECK((s0.a - x0.a).norm() < 1e-9);
    CHECK((sT.p - xT.p).norm() < 1e-9);
    CHECK((sT.v - xT.v).norm() < 1e-9);
    CHECK((sT.a - xT.a).norm() < 1e-9);
    for (int axis = 0; axis < 3; ++axis) {
      const Vec6 c = oracle_coefficients(axis_boundary(x0, xT, axis), T);
      CHECK((c - p.coefficients[axis]).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, c.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("derivatives agree with finite differences") {
  Rng rng(2);
  for (int i = 0; i < 50; ++i) {
    const Primitive p = solve_obvp(test::random_state(rng), test::random_state(rng), 1.5);
    const double t = rng.uniform(0.1, 1.4);
    const double h = 1e-5;
    const auto lo = p.eval(t - h);
    const auto hi = p.eval(t + h);
    const auto s = p.eval(t);
    for (int k = 0; k < 3; ++k) {
      CHECK(test::rel_err(s.v[k], (hi.p[k] - lo.p[k]) / (2 * h), 1e-3) < 1e-6);
      CHECK(test::rel_err(s.a[k], (hi.v[k] - lo.v[k]) / (2 * h), 1e-3) < 1e-6);
      CHECK(test::rel_err(s.jerk[k], (hi.a[k] - lo.a[k]) / (2 * h), 1e-3) < 1e-6);
    }
  }
}

TEST_CASE("jerk cost matches quadrature and the time-scaling law") {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double T = rng.uniform(0.5, 3.0);
    const Primitive p = solve_obvp(test::random_state(rng), test::random_state(rng), T);
    CHECK(test::rel_err(jerk_cost(p), jerk_quadrature(p, 0.0, T)) < 1e-6);
    const double t0 = rng.uniform(0.0, T / 2);
    const double t1 = rng.uniform(T / 2, T);
    CHECK(test::rel_err(jerk_integral(p, t0, t1), jerk_quadrature(p, t0, t1)) < 1e-6);
  }
  for (double T : {0.5, 2.0, 4.0}) {
    const Primitive p = solve_obvp(at_rest(Vec3::Zero()), at_rest(Vec3(1, 0, 0)), T);
    CHECK(test::rel_err(jerk_cost(p), 720.0 / std::pow(T, 5)) < 1e-6);
  }
}

TEST_CASE("jerk penalty matrix is symmetric PSD and equals the quadratic form") {
  Rng rng(4);
  for (double T : {0.4, 1.0, 1.5, 3.0}) {
    const Mat6 r = jerk_penalty_matrix(T);
    CHECK((r - r.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * r.cwiseAbs().maxCoeff());
    for (int i = 0; i < 200; ++i) {
      Vec6 d;
      for (int k = 0; k < 6; ++k) d[k] = rng.uniform(-3, 3);
      CHECK(d.dot(r * d) >= -1e-12);
    }
  }
  const KinodynamicState x0 = test::random_state(rng);
  const KinodynamicState xT = test::random_state(rng);
  const Primitive p = solve_obvp(x0, xT, 1.2);
  const Mat6 r = jerk_penalty_matrix(1.2);
  double sum = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const AxisBoundary d = axis_boundary(x0, xT, axis);
    sum += d.dot(r * d);
  }
  CHECK(test::rel_err(sum, jerk_cost(p)) < 1e-12);
}

TEST_CASE("axis permutation leaves the total cost unchanged") {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    KinodynamicState x0 = test::random_state(rng);
    KinodynamicState xT = test::random_state(rng);
    const double before = jerk_cost(solve_obvp(x0, xT, 1.5));
    for (KinodynamicState* s : {&x0, &xT}) {
      for (Vec3* v : {&s->p, &s->v, &s->a}) *v = Vec3(v->z(), v->x(), v->y());
    }
    CHECK(test::rel_err(jerk_cost(solve_obvp(x0, xT, 1.5)), before) < 1e-12);
  }
}

TEST_CASE("waypoints") {
  Rng rng(6);
  const Primitive p = solve_obvp(test::random_state(rng), test::random_state(rng), 1.5);
  const auto two = sample_waypoints(p, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == p.eval(0.0).p);
  CHECK(two[1] == p.eval(1.5).p);
  const auto pts = sample_waypoints(p, 20);
  const auto times = waypoint_times(1.5, 20);
  REQUIRE(pts.size() == 20);
  for (int m = 0; m < 20; ++m) {
    CHECK(times[m] == doctest::Approx(m * 1.5 / 19).epsilon(1e-15));
    CHECK((pts[m] - p.eval(times[m]).p).norm() < 1e-12);
  }
}

TEST_CASE("grid maxima are bounded by coefficient norms") {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const double T = rng.uniform(0.5, 2.0);
    const Primitive p = solve_obvp(test::random_state(rng), test::random_state(rng), T);
    double v_bound = 0.0;
    double a_bound = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      double vb = 0.0;
      double ab = 0.0;
      for (int k = 1; k < 6; ++k) vb += k * std::abs(p.coefficients[axis][k]) * std::pow(T, k - 1);
      for (int k = 2; k < 6; ++k) ab += k * (k - 1) * std::abs(p.coefficients[axis][k]) * std::pow(T, k - 2);
      v_bound += vb * vb;
      a_bound += ab * ab;
    }
    CHECK(max_speed(p) <= std::sqrt(v_bound) + 1e-12);
    CHECK(max_accel(p) <= std::sqrt(a_bound) + 1e-12);
    CHECK(max_speed(p) >= p.eval(0.0).v.norm() - 1e-12);
  }
}

}  // TEST_SUITE
