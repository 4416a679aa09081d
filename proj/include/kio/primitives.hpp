#pragma once

#include <array>
#include <vector>

#include "kio/types.hpp"

namespace kio {

/// Flat-output state of the vehicle.
struct KinodynamicState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
  double yaw = 0.0;

  /// [p, v, a]
  Vec9 flat() const;
  static KinodynamicState from_flat(const Vec9& x, double yaw = 0.0);
  bool finite() const;
};

/// Boundary data of one axis: [p0, v0, a0, pT, vT, aT].
using AxisBoundary = Vec6;

AxisBoundary axis_boundary(const KinodynamicState& x0, const KinodynamicState& xT, int axis);

/// Quintic per axis over [0, duration]; coefficients ascend in powers of t.
struct Primitive {
  std::array<Vec6, 3> coefficients{Vec6::Zero(), Vec6::Zero(), Vec6::Zero()};
  double duration = 1.0;
  double yaw0 = 0.0;

  struct Sample {
    Vec3 p = Vec3::Zero();
    Vec3 v = Vec3::Zero();
    Vec3 a = Vec3::Zero();
    Vec3 jerk = Vec3::Zero();
  };

  /// Position and first three derivatives; throws std::out_of_range outside [0, duration].
  Sample eval(double t) const;
  KinodynamicState state_at(double t) const;
  AxisBoundary boundary(int axis) const;
};

/// Maps boundary data to quintic coefficients: c = C(T)·d.
Mat6 coefficient_map(double duration);

/// Closed-form min-jerk quintic matching p, v, a at both ends.
Primitive solve_obvp(const KinodynamicState& x0, const KinodynamicState& xT, double duration);

/// Constant-position primitive at `p` (all derivatives zero).
Primitive hold_primitive(const Vec3& p, double yaw, double duration);

/// Weights w(t) with p(t) = wᵀ d for boundary data d of one axis.
Vec6 boundary_weights(double t, double duration);

/// Jerk penalty matrix: dᵀ R_J(T) d = ∫₀ᵀ jerk(t)² dt for one axis.
Mat6 jerk_penalty_matrix(double duration);

/// Σ over axes of dᵀ R_J d; equals ∫₀ᵀ ‖jerk‖² dt.
double jerk_cost(const Primitive& prim);

/// Exact ∫ ‖jerk‖² dt over [t0, t1] ⊆ [0, duration].
double jerk_integral(const Primitive& prim, double t0, double t1);

/// Positions at t_m = m·T/(M−1), m = 0..M−1.
std::vector<Vec3> sample_waypoints(const Primitive& prim, int count);
/// Waypoint times matching sample_waypoints.
std::vector<double> waypoint_times(double duration, int count);

inline constexpr int kMetricGridSamples = 1001;

/// Grid-approximate maxima of ‖v(t)‖ and ‖a(t)‖ over kMetricGridSamples uniform times.
double max_speed(const Primitive& prim);
double max_accel(const Primitive& prim);


/// Candidate terminal states sharing one start state and duration, with confidences.
struct PrimitiveSet {
  KinodynamicState origin;
  double duration = 1.5;
  std::vector<KinodynamicState> terminals;
  std::vector<double> confidences;

  std::size_t size() const { return terminals.size(); }
  bool empty() const { return terminals.empty(); }
  Primitive primitive(std::size_t k) const { return solve_obvp(origin, terminals[k], duration); }
  PrimitiveSet subset(const std::vector<std::size_t>& indices) const;
};

}  // namespace kio
