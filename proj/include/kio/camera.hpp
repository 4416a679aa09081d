#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kio/types.hpp"

namespace kio {

/// Pinhole intrinsics. Integer pixel coordinates (i, j) name sample centres:
/// pixel (i, j) holds the depth along the ray through continuous (u, v) = (i, j).
struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  void validate() const;

  /// Square pixels, principal point at (W/2, H/2).
  static Intrinsics from_fov(int width, int height, double horizontal_fov_deg);
  /// 96×72, 87° horizontal field of view.
  static Intrinsics default_depth_camera();
};

/// Body-to-world transform.
struct BodyPose {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static BodyPose from_yaw(const Vec3& position, double yaw);
  void validate() const;
};

/// Camera-to-body transform.
struct CameraExtrinsics {
  Mat3 rotation = forward_facing();
  Vec3 translation = Vec3::Zero();

  /// Body x (forward) → camera +z, body y (left) → camera −x, body z (up) → camera −y.
  static Mat3 forward_facing();
  void validate() const;
};

/// Metric z-depth image, row-major (v * width + u).
class DepthImage {
 public:
  DepthImage() = default;
  DepthImage(int width, int height, double max_range);

  int width() const { return width_; }
  int height() const { return height_; }
  double max_range() const { return max_range_; }

  float at(int u, int v) const { return values_[static_cast<std::size_t>(v) * width_ + u]; }
  float& at(int u, int v) { return values_[static_cast<std::size_t>(v) * width_ + u]; }
  const std::vector<float>& values() const { return values_; }
  std::vector<float>& values() { return values_; }

  bool operator==(const DepthImage& other) const;

 private:
  int width_ = 0;
  int height_ = 0;
  double max_range_ = 5.0;
  std::vector<float> values_;
};

struct Projection {
  double u = 0.0;
  double v = 0.0;
  double z = 0.0;  // camera-frame depth
};

inline constexpr double kZNear = 0.1;

/// World point expressed in the camera frame.
Vec3 world_to_camera(const Vec3& point_world, const BodyPose& pose, const CameraExtrinsics& extr);
/// R_cw = R_bcᵀ R_wbᵀ, the Jacobian of world_to_camera.
Mat3 camera_from_world_rotation(const BodyPose& pose, const CameraExtrinsics& extr);

/// Pinhole projection; absent behind z_near or outside [0, W) × [0, H).
std::optional<Projection> project(const Vec3& point_world, const BodyPose& pose,
                                  const Intrinsics& intr, const CameraExtrinsics& extr);

/// Unclipped projection of a camera-frame point with z > 0.
Projection project_camera_point(const Vec3& p_c, const Intrinsics& intr);

/// World point whose projection is (u, v) at camera depth `depth`.
Vec3 back_project(double u, double v, double depth, const BodyPose& pose, const Intrinsics& intr,
                  const CameraExtrinsics& extr);

/// Nearest sample for (u, v) in [0, W) × [0, H); rounds half up, clamps to the border.
double sample_depth_nearest(const DepthImage& image, double u, double v);

struct BilinearSample {
  double value = 0.0;
  double d_du = 0.0;
  double d_dv = 0.0;
};

/// Bilinear interpolation between integer samples; coordinates clamp to [0, W−1] × [0, H−1].
/// Derivatives are zero along a clamped axis.
BilinearSample sample_depth_bilinear_grad(const DepthImage& image, double u, double v);
double sample_depth_bilinear(const DepthImage& image, double u, double v);

/// PFM ("Pf", little-endian, scale −1.0). PFM stores rows bottom-to-top.
void write_pfm(const DepthImage& image, const std::string& path);
DepthImage read_pfm(const std::string& path, double max_range = 5.0);

/// Sidecar describing how a depth image was produced.
std::string depth_sidecar_json(const Intrinsics& intr, const BodyPose& pose,
                               const CameraExtrinsics& extr, double max_range);

}  // namespace kio
