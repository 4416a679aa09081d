#include "kio/camera.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kio {

namespace {

void check_rotation(const Mat3& r, const char* what) {
  const double ortho = (r.transpose() * r - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho > 1e-9 || std::abs(r.determinant() - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(what) + " is not a proper rotation");
  }
}

}  // namespace

void Intrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw std::invalid_argument("focal lengths must be positive");
  if (!(cx > 0.0 && cx < width) || !(cy > 0.0 && cy < height)) {
    throw std::invalid_argument("principal point must lie inside the image");
  }
}

Intrinsics Intrinsics::from_fov(int width, int height, double horizontal_fov_deg) {
  Intrinsics k;
  k.width = width;
  k.height = height;
  k.cx = width / 2.0;
  k.cy = height / 2.0;
  k.fx = k.cx / std::tan(horizontal_fov_deg * std::numbers::pi / 360.0);
  k.fy = k.fx;
  k.validate();
  return k;
}

Intrinsics Intrinsics::default_depth_camera() { return from_fov(96, 72, 87.0); }

BodyPose BodyPose::from_yaw(const Vec3& position, double yaw) {
  return {yaw_rotation(yaw), position};
}

void BodyPose::validate() const { check_rotation(rotation, "body rotation"); }

Mat3 CameraExtrinsics::forward_facing() {
  // Columns are the camera axes expressed in the body frame.
  Mat3 r;
  r.col(0) = Vec3(0.0, -1.0, 0.0);
  r.col(1) = Vec3(0.0, 0.0, -1.0);
  r.col(2) = Vec3(1.0, 0.0, 0.0);
  return r;
}

void CameraExtrinsics::validate() const { check_rotation(rotation, "camera rotation"); }

DepthImage::DepthImage(int width, int height, double max_range)
    : width_(width),
      height_(height),
      max_range_(max_range),
      values_(static_cast<std::size_t>(width) * height, static_cast<float>(max_range)) {
  if (width <= 0 || height <= 0) throw std::invalid_argument("image size must be positive");
  if (!(max_range > 0.0)) throw std::invalid_argument("max_range must be positive");
}

bool DepthImage::operator==(const DepthImage& other) const {
  return width_ == other.width_ && height_ == other.height_ && max_range_ == other.max_range_ &&
         values_ == other.values_;
}

Mat3 camera_from_world_rotation(const BodyPose& pose, const CameraExtrinsics& extr) {
  return extr.rotation.transpose() * pose.rotation.transpose();
}

Vec3 world_to_camera(const Vec3& point_world, const BodyPose& pose, const CameraExtrinsics& extr) {
  const Vec3 p_b = pose.rotation.transpose() * (point_world - pose.translation);
  return extr.rotation.transpose() * (p_b - extr.translation);
}

Projection project_camera_point(const Vec3& p_c, const Intrinsics& intr) {
  return {intr.fx * p_c.x() / p_c.z() + intr.cx, intr.fy * p_c.y() / p_c.z() + intr.cy, p_c.z()};
}

std::optional<Projection> project(const Vec3& point_world, const BodyPose& pose,
                                  const Intrinsics& intr, const CameraExtrinsics& extr) {
  const Vec3 p_c = world_to_camera(point_world, pose, extr);
  if (p_c.z() <= kZNear) return std::nullopt;
  const Projection pr = project_camera_point(p_c, intr);
  if (pr.u < 0.0 || pr.u >= intr.width || pr.v < 0.0 || pr.v >= intr.height) return std::nullopt;
  return pr;
}

Vec3 back_project(double u, double v, double depth, const BodyPose& pose, const Intrinsics& intr,
                  const CameraExtrinsics& extr) {
  const Vec3 p_c((u - intr.cx) / intr.fx * depth, (v - intr.cy) / intr.fy * depth, depth);
  const Vec3 p_b = extr.rotation * p_c + extr.translation;
  return pose.rotation * p_b + pose.translation;
}

double sample_depth_nearest(const DepthImage& image, double u, double v) {
  const int i = std::clamp(static_cast<int>(std::floor(u + 0.5)), 0, image.width() - 1);
  const int j = std::clamp(static_cast<int>(std::floor(v + 0.5)), 0, image.height() - 1);
  return image.at(i, j);
}

BilinearSample sample_depth_bilinear_grad(const DepthImage& image, double u, double v) {
  const double u_max = image.width() - 1;
  const double v_max = image.height() - 1;
  const bool u_clamped = u <= 0.0 || u >= u_max;
  const bool v_clamped = v <= 0.0 || v >= v_max;
  u = std::clamp(u, 0.0, u_max);
  v = std::clamp(v, 0.0, v_max);

  const int u0 = std::min(static_cast<int>(std::floor(u)), image.width() - 1);
  const int v0 = std::min(static_cast<int>(std::floor(v)), image.height() - 1);
  const int u1 = std::min(u0 + 1, image.width() - 1);
  const int v1 = std::min(v0 + 1, image.height() - 1);
  const double fu = u - u0;
  const double fv = v - v0;

  const double i00 = image.at(u0, v0);
  const double i10 = image.at(u1, v0);
  const double i01 = image.at(u0, v1);
  const double i11 = image.at(u1, v1);

  BilinearSample s;
  s.value = (1.0 - fu) * (1.0 - fv) * i00 + fu * (1.0 - fv) * i10 + (1.0 - fu) * fv * i01 +
            fu * fv * i11;
  s.d_du = u_clamped ? 0.0 : (1.0 - fv) * (i10 - i00) + fv * (i11 - i01);
  s.d_dv = v_clamped ? 0.0 : (1.0 - fu) * (i01 - i00) + fu * (i11 - i10);
  return s;
}

double sample_depth_bilinear(const DepthImage& image, double u, double v) {
  return sample_depth_bilinear_grad(image, u, v).value;
}

}  // namespace kio
