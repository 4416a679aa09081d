#pragma once

#include <optional>
#include <vector>

#include "kio/camera.hpp"
#include "kio/primitives.hpp"

// The shield is camera-local: it sees only the current depth frame. This library
// must never depend on kio::World (enforced by the link graph in src/CMakeLists.txt).

namespace kio {

struct PhysicalEnvelope {
  double p_max = 4.0;  // m, per-axis terminal displacement
  double v_max = 2.0;  // m/s
  double a_max = 6.0;  // m/s²

  void validate() const;
  /// diag(U_max) as a 9-vector [P P P V V V A A A].
  Vec9 scale() const;
};

enum class OutOfViewPolicy { Conservative, Permissive };

struct SafetyParams {
  double radius = 0.3;  // r
  double buffer = 0.2;  // ε
  OutOfViewPolicy out_of_view = OutOfViewPolicy::Conservative;
  // Also reject a waypoint when any observed surface point lies within the margin of it in 3D.
  // The per-pixel depth rule alone lets a path graze a wall edge seen through a gap.
  bool footprint = true;
  // With footprint on and the conservative policy, a waypoint's body may leave the horizontal
  // view only within this distance of the start. Kept separate from r + ε so that growing the
  // margin never admits a path.
  double view_slack = 0.5;

  double margin() const { return radius + buffer; }
  void validate() const;
};

struct CameraModel {
  Intrinsics intrinsics = Intrinsics::default_depth_camera();
  CameraExtrinsics extrinsics;
};

struct Violation {
  int waypoint = 0;
  double u = 0.0;
  double v = 0.0;
  double z_c = 0.0;
  std::optional<double> d_obs;  // absent when the waypoint is outside the image
  bool footprint = false;       // raised by the footprint test; u, v, d_obs name the offending pixel
};

struct ShieldVerdict {
  bool accepted = true;
  std::optional<Violation> first_violation;
};

/// x_T = U_max ⊙ tanh(h). Strictly inside (−U_max, U_max) for finite h.
Vec9 bound_activation(const Vec9& h, const PhysicalEnvelope& envelope);
/// Diagonal of ∂x_T/∂h: U_max ⊙ (1 − tanh²(h)).
Vec9 bound_activation_grad(const Vec9& h, const PhysicalEnvelope& envelope);

/// Rejects at the first of M waypoints whose camera depth exceeds d_obs − (r + ε),
/// with d_obs read from the nearest pixel. Waypoints within z_near are skipped.
ShieldVerdict shield_check(const Primitive& prim, const DepthImage& image, const BodyPose& pose,
                           const CameraModel& camera, const SafetyParams& safety, int waypoints);

struct FilterResult {
  PrimitiveSet survivors;
  std::vector<std::size_t> survivor_indices;
  std::vector<ShieldVerdict> verdicts;  // aligned with the input set
};

FilterResult filter_primitives(const PrimitiveSet& set, const DepthImage& image,
                               const BodyPose& pose, const CameraModel& camera,
                               const SafetyParams& safety, int waypoints);

}  // namespace kio
