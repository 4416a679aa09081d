#include "kio/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kio {

Vec9 KinodynamicState::flat() const {
  Vec9 x;
  x << p, v, a;
  return x;
}

KinodynamicState KinodynamicState::from_flat(const Vec9& x, double yaw) {
  return {x.segment<3>(0), x.segment<3>(3), x.segment<3>(6), yaw};
}

bool KinodynamicState::finite() const {
  return p.allFinite() && v.allFinite() && a.allFinite() && std::isfinite(yaw);
}

AxisBoundary axis_boundary(const KinodynamicState& x0, const KinodynamicState& xT, int axis) {
  AxisBoundary d;
  d << x0.p[axis], x0.v[axis], x0.a[axis], xT.p[axis], xT.v[axis], xT.a[axis];
  return d;
}

Mat6 coefficient_map(double T) {
  const double T2 = T * T;
  const double T3 = T2 * T;
  const double T4 = T3 * T;
  const double T5 = T4 * T;
  Mat6 c = Mat6::Zero();
  c(0, 0) = 1.0;
  c(1, 1) = 1.0;
  c(2, 2) = 0.5;
  // c3 = (20(pT−p0) − (12v0 + 8vT)T − (3a0 − aT)T²) / 2T³
  c.row(3) << -20.0, -12.0 * T, -3.0 * T2, 20.0, -8.0 * T, T2;
  c.row(3) /= 2.0 * T3;
  // c4 = (30(p0−pT) + (16v0 + 14vT)T + (3a0 − 2aT)T²) / 2T⁴
  c.row(4) << 30.0, 16.0 * T, 3.0 * T2, -30.0, 14.0 * T, -2.0 * T2;
  c.row(4) /= 2.0 * T4;
  // c5 = (12(pT−p0) − 6(v0 + vT)T + (aT − a0)T²) / 2T⁵
  c.row(5) << -12.0, -6.0 * T, -T2, 12.0, -6.0 * T, T2;
  c.row(5) /= 2.0 * T5;
  return c;
}

Primitive solve_obvp(const KinodynamicState& x0, const KinodynamicState& xT, double duration) {
  if (!(duration > 0.0)) {
    throw std::invalid_argument("primitive duration must be positive, got " +
                                std::to_string(duration));
  }
  const Mat6 cmap = coefficient_map(duration);
  Primitive prim;
  prim.duration = duration;
  prim.yaw0 = x0.yaw;
  for (int axis = 0; axis < 3; ++axis) {
    prim.coefficients[axis] = cmap * axis_boundary(x0, xT, axis);
  }
  return prim;
}

Primitive hold_primitive(const Vec3& p, double yaw, double duration) {
  Primitive prim;
  prim.duration = duration;
  prim.yaw0 = yaw;
  for (int axis = 0; axis < 3; ++axis) prim.coefficients[axis][0] = p[axis];
  return prim;
}

Primitive::Sample Primitive::eval(double t) const {
  if (!(t >= 0.0 && t <= duration)) {
    throw std::out_of_range("t = " + std::to_string(t) + " outside [0, " +
                            std::to_string(duration) + "]");
  }
  Sample s;
  for (int axis = 0; axis < 3; ++axis) {
    const Vec6& c = coefficients[axis];
    s.p[axis] = c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
    s.v[axis] = c[1] + t * (2.0 * c[2] + t * (3.0 * c[3] + t * (4.0 * c[4] + t * 5.0 * c[5])));
    s.a[axis] = 2.0 * c[2] + t * (6.0 * c[3] + t * (12.0 * c[4] + t * 20.0 * c[5]));
    s.jerk[axis] = 6.0 * c[3] + t * (24.0 * c[4] + t * 60.0 * c[5]);
  }
  return s;
}

KinodynamicState Primitive::state_at(double t) const {
  const Sample s = eval(t);
  return {s.p, s.v, s.a, yaw0};
}

AxisBoundary Primitive::boundary(int axis) const {
  const Sample s0 = eval(0.0);
  const Sample sT = eval(duration);
  AxisBoundary d;
  d << s0.p[axis], s0.v[axis], s0.a[axis], sT.p[axis], sT.v[axis], sT.a[axis];
  return d;
}

Vec6 boundary_weights(double t, double duration) {
  Vec6 powers;
  powers[0] = 1.0;
  for (int i = 1; i < 6; ++i) powers[i] = powers[i - 1] * t;
  return coefficient_map(duration).transpose() * powers;
}

Mat6 jerk_penalty_matrix(double T) {
  const double i1 = 1.0 / T;
  const double i2 = i1 * i1;
  const double i3 = i2 * i1;
  const double i4 = i3 * i1;
  const double i5 = i4 * i1;
  Mat6 r;
  // clang-format off
  r <<  720*i5,  360*i4,  60*i3, -720*i5,  360*i4, -60*i3,
        360*i4,  192*i3,  36*i2, -360*i4,  168*i3, -24*i2,
         60*i3,   36*i2,   9*i1,  -60*i3,   24*i2,  -3*i1,
       -720*i5, -360*i4, -60*i3,  720*i5, -360*i4,  60*i3,
        360*i4,  168*i3,  24*i2, -360*i4,  192*i3, -36*i2,
        -60*i3,  -24*i2,  -3*i1,   60*i3,  -36*i2,   9*i1;
  // clang-format on
  return r;
}

double jerk_cost(const Primitive& prim) {
  const Mat6 r = jerk_penalty_matrix(prim.duration);
  double cost = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const AxisBoundary d = prim.boundary(axis);
    cost += d.dot(r * d);
  }
  return cost;
}

double jerk_integral(const Primitive& prim, double t0, double t1) {
  double total = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    const Vec6& c = prim.coefficients[axis];
    // jerk = j0 + j1 t + j2 t²; jerk² = q0 + q1 t + ... + q4 t⁴
    const double j0 = 6.0 * c[3];
    const double j1 = 24.0 * c[4];
    const double j2 = 60.0 * c[5];
    const double q[5] = {j0 * j0, 2.0 * j0 * j1, j1 * j1 + 2.0 * j0 * j2, 2.0 * j1 * j2, j2 * j2};
    double p0 = t0;
    double p1 = t1;
    for (int k = 0; k < 5; ++k) {
      total += q[k] * (p1 - p0) / (k + 1);
      p0 *= t0;
      p1 *= t1;
    }
  }
  return total;
}

std::vector<double> waypoint_times(double duration, int count) {
  if (count < 2) throw std::invalid_argument("waypoint count must be >= 2");
  std::vector<double> t(count);
  for (int m = 0; m < count; ++m) t[m] = duration * (static_cast<double>(m) / (count - 1));
  return t;
}

std::vector<Vec3> sample_waypoints(const Primitive& prim, int count) {
  std::vector<Vec3> out;
  out.reserve(std::max(count, 0));
  for (double t : waypoint_times(prim.duration, count)) out.push_back(prim.eval(t).p);
  return out;
}

double max_speed(const Primitive& prim) {
  double best = 0.0;
  for (double t : waypoint_times(prim.duration, kMetricGridSamples)) {
    best = std::max(best, prim.eval(t).v.norm());
  }
  return best;
}

double max_accel(const Primitive& prim) {
  double best = 0.0;
  for (double t : waypoint_times(prim.duration, kMetricGridSamples)) {
    best = std::max(best, prim.eval(t).a.norm());
  }
  return best;
}


PrimitiveSet PrimitiveSet::subset(const std::vector<std::size_t>& indices) const {
  PrimitiveSet out;
  out.origin = origin;
  out.duration = duration;
  for (std::size_t k : indices) {
    out.terminals.push_back(terminals.at(k));
    out.confidences.push_back(confidences.at(k));
  }
  return out;
}

}  // namespace kio
