#include "kio/shield.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kio {

void PhysicalEnvelope::validate() const {
  if (!(p_max > 0.0 && v_max > 0.0 && a_max > 0.0)) {
    throw std::invalid_argument("physical envelope bounds must be strictly positive");
  }
}

Vec9 PhysicalEnvelope::scale() const {
  Vec9 u;
  u << p_max, p_max, p_max, v_max, v_max, v_max, a_max, a_max, a_max;
  return u;
}

void SafetyParams::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("safety radius must be > 0");
  if (!(buffer >= 0.0)) throw std::invalid_argument("safety buffer must be >= 0");
  if (!(view_slack >= 0.0)) throw std::invalid_argument("view slack must be >= 0");
}

Vec9 bound_activation(const Vec9& h, const PhysicalEnvelope& envelope) {
  // tanh rounds to ±1 for |h| > ~19; keep the open-interval guarantee.
  const double below_one = std::nextafter(1.0, 0.0);
  const Eigen::Array<double, 9, 1> t = h.array().tanh().max(-below_one).min(below_one);
  return envelope.scale().cwiseProduct(t.matrix());
}

Vec9 bound_activation_grad(const Vec9& h, const PhysicalEnvelope& envelope) {
  const Eigen::Array<double, 9, 1> t = h.array().tanh();
  return envelope.scale().cwiseProduct((1.0 - t * t).matrix());
}

namespace {

// First pixel (row-major) whose back-projected surface point q is within `margin` of the
// waypoint p_c and closer to it than to the primitive's start o_c. The second condition lets a
// vehicle already inside the margin back away instead of freezing.
std::optional<Violation> footprint_hit(const DepthImage& image, const Intrinsics& intr,
                                       const Vec3& p_c, const Vec3& o_c, double margin,
                                       int waypoint) {
  int u0 = 0;
  int u1 = image.width() - 1;
  int v0 = 0;
  int v1 = image.height() - 1;
  const double near = p_c.z() - margin;
  if (near > kZNear) {
    // Bound on the pixel offset of any point inside the ball that lies in front of the camera.
    const Projection pr = project_camera_point(p_c, intr);
    const double ru = intr.fx * margin * (1.0 + std::abs(p_c.x()) / p_c.z()) / near;
    const double rv = intr.fy * margin * (1.0 + std::abs(p_c.y()) / p_c.z()) / near;
    u0 = std::max(u0, static_cast<int>(std::floor(pr.u - ru)));
    u1 = std::min(u1, static_cast<int>(std::ceil(pr.u + ru)));
    v0 = std::max(v0, static_cast<int>(std::floor(pr.v - rv)));
    v1 = std::min(v1, static_cast<int>(std::ceil(pr.v + rv)));
  }
  const double m2 = margin * margin;
  for (int v = v0; v <= v1; ++v) {
    for (int u = u0; u <= u1; ++u) {
      const double d = image.at(u, v);
      if (d >= image.max_range()) continue;  // no return within range
      const Vec3 q((u - intr.cx) * d / intr.fx, (v - intr.cy) * d / intr.fy, d);
      const double d2 = (q - p_c).squaredNorm();
      if (d2 < m2 && d2 < (q - o_c).squaredNorm()) {
        return Violation{waypoint, static_cast<double>(u), static_cast<double>(v), p_c.z(), d, true};
      }
    }
  }
  return std::nullopt;
}

// True when part of the body ball B(w, radius) lies outside the camera frustum and beyond
// B(o, margin), the clearance ball the vehicle already holds at the primitive's start.
// True when part of the ball of `radius` around w lies outside the horizontal view and farther
// than `slack` from the start point o.
bool body_leaves_view(const Intrinsics& intr, const Vec3& w, const Vec3& o, double radius,
                      double slack) {
  const Vec3 away = w - o;
  const double reach = away.norm();
  if (reach + radius <= slack) return false;
  // Inward half-spaces n·x + b >= 0: the left and right image edges and z_near. The top and
  // bottom edges are left out; with a 3:4 image nearly every waypoint in the first half metre
  // pokes above or below the view, and rejecting on that stops the vehicle for good.
  const std::array<std::pair<Vec3, double>, 3> planes{{
      {Vec3(intr.fx, 0.0, intr.cx).normalized(), 0.0},
      {Vec3(-intr.fx, 0.0, intr.width - intr.cx).normalized(), 0.0},
      {Vec3(0.0, 0.0, 1.0), -kZNear},
  }};
  const Vec3 far = reach > 0.0 ? Vec3(w + radius * away / reach) : w;
  for (const auto& [n, b] : planes) {
    const double s = n.dot(w) + b;
    if (s >= radius) continue;
    // Farthest point from o of the cap outside this plane: the ball's far point if the cap
    // holds it, otherwise somewhere on the rim circle.
    double farthest = reach + radius;
    if (n.dot(far) + b > 0.0) {
      const Vec3 c = w - s * n;
      const double rho = std::sqrt(std::max(0.0, radius * radius - s * s));
      const Vec3 d = o - c;
      const double dn = n.dot(d);
      const double dp = (d - dn * n).norm();
      farthest = std::hypot(dn, dp + rho);
    }
    if (farthest > slack) return true;
  }
  return false;
}

}  // namespace

ShieldVerdict shield_check(const Primitive& prim, const DepthImage& image, const BodyPose& pose,
                           const CameraModel& camera, const SafetyParams& safety, int waypoints) {
  const auto& intr = camera.intrinsics;
  const std::vector<Vec3> points = sample_waypoints(prim, waypoints);
  const double margin = safety.margin();
  ShieldVerdict verdict;
  const Vec3 o_c = world_to_camera(points.front(), pose, camera.extrinsics);
  for (int m = 0; m < static_cast<int>(points.size()); ++m) {
    const Vec3 p_c = world_to_camera(points[m], pose, camera.extrinsics);
    if (p_c.z() > kZNear) {
      const Projection pr = project_camera_point(p_c, intr);
      const bool in_view = pr.u >= 0.0 && pr.u < intr.width && pr.v >= 0.0 && pr.v < intr.height;
      if (!in_view) {
        if (safety.out_of_view == OutOfViewPolicy::Permissive) continue;
        verdict.accepted = false;
        verdict.first_violation = Violation{m, pr.u, pr.v, pr.z, std::nullopt};
        return verdict;
      }
      const double d_obs = sample_depth_nearest(image, pr.u, pr.v);
      if (pr.z > d_obs - margin) {
        verdict.accepted = false;
        verdict.first_violation = Violation{m, pr.u, pr.v, pr.z, d_obs};
        return verdict;
      }
    }
    // Near-camera waypoints have no pixel but still have a footprint.
    if (safety.footprint && safety.out_of_view == OutOfViewPolicy::Conservative &&
        body_leaves_view(intr, p_c, o_c, safety.radius, safety.view_slack)) {
      // No pixel exists behind the near plane; report NaN coordinates there.
      const double nan = std::numeric_limits<double>::quiet_NaN();
      const Projection pr = p_c.z() > kZNear ? project_camera_point(p_c, intr) : Projection{nan, nan, p_c.z()};
      verdict.accepted = false;
      verdict.first_violation = Violation{m, pr.u, pr.v, p_c.z(), std::nullopt, true};
      return verdict;
    }
    if (safety.footprint) {
      if (auto hit = footprint_hit(image, intr, p_c, o_c, margin, m)) {
        verdict.accepted = false;
        verdict.first_violation = hit;
        return verdict;
      }
    }
  }
  return verdict;
}

FilterResult filter_primitives(const PrimitiveSet& set, const DepthImage& image,
                               const BodyPose& pose, const CameraModel& camera,
                               const SafetyParams& safety, int waypoints) {
  FilterResult out;
  out.verdicts.reserve(set.size());
  for (std::size_t k = 0; k < set.size(); ++k) {
    out.verdicts.push_back(
        shield_check(set.primitive(k), image, pose, camera, safety, waypoints));
    if (out.verdicts.back().accepted) out.survivor_indices.push_back(k);
  }
  out.survivors = set.subset(out.survivor_indices);
  return out;
}

}  // namespace kio
