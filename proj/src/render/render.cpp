#include "kio/render.hpp"

#include <algorithm>
#include <cmath>

namespace kio {

namespace {

struct RenderSetup {
  Vec3 origin;
  Mat3 world_from_camera;
  std::vector<Wall> walls;  // walls that a ray of length max_ray can reach
};

RenderSetup prepare(const World& world, const BodyPose& pose, const Intrinsics& intr,
                    const CameraExtrinsics& extr, double max_range) {
  RenderSetup s;
  s.origin = pose.translation + pose.rotation * extr.translation;
  s.world_from_camera = pose.rotation * extr.rotation;
  // Longest ray (corner pixel) for a z-depth of max_range.
  const double du = std::max(intr.cx, intr.width - 1 - intr.cx) / intr.fx;
  const double dv = std::max(intr.cy, intr.height - 1 - intr.cy) / intr.fy;
  const double max_ray = max_range * std::sqrt(1.0 + du * du + dv * dv);
  for (std::size_t i : world.walls_near(s.origin, max_ray)) s.walls.push_back(world.walls()[i]);
  return s;
}

void render_row(const RenderSetup& s, const Intrinsics& intr, double max_range, int v,
                DepthImage& image) {
  for (int u = 0; u < intr.width; ++u) {
    const Vec3 ray_c((u - intr.cx) / intr.fx, (v - intr.cy) / intr.fy, 1.0);
    const double ray_norm = ray_c.norm();
    const Vec3 dir = s.world_from_camera * (ray_c / ray_norm);
    const double t_max = max_range * ray_norm;
    double best = t_max;
    bool hit = false;
    for (const auto& w : s.walls) {
      if (const auto t = box_ray_hit(w, s.origin, dir, best)) {
        best = *t;
        hit = true;
      }
    }
    // Plane depth = ray length · cos(angle to optical axis).
    const double z = hit ? std::min(best / ray_norm, max_range) : max_range;
    image.at(u, v) = static_cast<float>(z);
  }
}

}  // namespace

DepthImage render_depth(const World& world, const BodyPose& pose, const Intrinsics& intr,
                        const CameraExtrinsics& extr, double max_range, Execution execution) {
  intr.validate();
  const RenderSetup setup = prepare(world, pose, intr, extr, max_range);
  DepthImage image(intr.width, intr.height, max_range);
  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (int v = 0; v < intr.height; ++v) render_row(setup, intr, max_range, v, image);
  } else {
    for (int v = 0; v < intr.height; ++v) render_row(setup, intr, max_range, v, image);
  }
  return image;
}

}  // namespace kio
