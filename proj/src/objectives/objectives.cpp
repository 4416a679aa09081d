#include "kio/objectives.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace kio {

namespace {

double confidence_sum(const PrimitiveSet& set) {
  const double s = std::accumulate(set.confidences.begin(), set.confidences.end(), 0.0);
  if (!(s > 0.0)) throw std::invalid_argument("confidences must have a positive sum");
  return s;
}

struct GoalFrame {
  Vec3 along;    // ĝ
  Vec3 lateral;  // horizontal unit normal to ĝ (left of travel)
};

GoalFrame goal_frame(const Vec3& start, const Vec3& goal) {
  const Vec3 delta = goal - start;
  const double n = delta.norm();
  if (!(n > 0.0)) throw std::invalid_argument("goal coincides with the start position");
  GoalFrame f;
  f.along = delta / n;
  Vec3 lat = Vec3::UnitZ().cross(f.along);
  if (lat.norm() < 1e-9) lat = f.along.cross(Vec3::UnitX());
  f.lateral = lat.normalized();
  return f;
}

}  // namespace

void GuidanceConfig::validate() const {
  if (progress_weight < 0.0 || lateral_weight < 0.0 || diversity_weight < 0.0) {
    throw std::invalid_argument("guidance weights must be >= 0");
  }
  if (!(lateral_tolerance > 0.0)) throw std::invalid_argument("lateral tolerance must be > 0");
}

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

LossTerm smoothness_loss(const PrimitiveSet& set) {
  const std::size_t k_count = set.size();
  LossTerm out(k_count);
  if (k_count == 0) return out;
  const double c_sum = confidence_sum(set);
  const Mat6 r = jerk_penalty_matrix(set.duration);

  std::vector<double> cost(k_count, 0.0);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double w = set.confidences[k] / c_sum;
    for (int axis = 0; axis < 3; ++axis) {
      const AxisBoundary d = axis_boundary(set.origin, set.terminals[k], axis);
      const Vec6 rd = r * d;
      cost[k] += d.dot(rd);
      // Terminal entries of d are (pT, vT, aT) at indices 3..5.
      out.d_terminal[k][axis] += 2.0 * w * rd[3];
      out.d_terminal[k][3 + axis] += 2.0 * w * rd[4];
      out.d_terminal[k][6 + axis] += 2.0 * w * rd[5];
    }
    out.value += w * cost[k];
  }
  for (std::size_t k = 0; k < k_count; ++k) out.d_confidence[k] = (cost[k] - out.value) / c_sum;
  return out;
}

LossTerm safety_loss(const PrimitiveSet& set, const DepthImage& image, const BodyPose& pose,
                     const CameraModel& camera, const SafetyParams& safety, int waypoints) {
  const std::size_t k_count = set.size();
  LossTerm out(k_count);
  const auto& intr = camera.intrinsics;
  const Mat3 cam_from_world = camera_from_world_rotation(pose, camera.extrinsics);
  const double margin_offset = safety.margin();
  const std::vector<double> times = waypoint_times(set.duration, waypoints);

  std::vector<Vec6> weights;
  weights.reserve(times.size());
  for (double t : times) weights.push_back(boundary_weights(t, set.duration));

  for (std::size_t k = 0; k < k_count; ++k) {
    const Primitive prim = set.primitive(k);
    const double c = set.confidences[k];
    for (std::size_t m = 0; m < times.size(); ++m) {
      const Vec3 p_w = prim.eval(times[m]).p;
      const Vec3 p_c = world_to_camera(p_w, pose, camera.extrinsics);
      double margin = 0.0;
      Vec3 d_margin_d_pc = Vec3::UnitZ();
      bool in_view = false;
      Projection pr;
      if (p_c.z() > kZNear) {
        pr = project_camera_point(p_c, intr);
        in_view = pr.u >= 0.0 && pr.u < intr.width && pr.v >= 0.0 && pr.v < intr.height;
      }
      if (in_view) {
        const BilinearSample s = sample_depth_bilinear_grad(image, pr.u, pr.v);
        margin = p_c.z() - s.value + margin_offset;
        const double z = p_c.z();
        const Vec3 du(intr.fx / z, 0.0, -intr.fx * p_c.x() / (z * z));
        const Vec3 dv(0.0, intr.fy / z, -intr.fy * p_c.y() / (z * z));
        d_margin_d_pc -= s.d_du * du + s.d_dv * dv;
      } else {
        margin = p_c.z() - image.max_range() + margin_offset;
      }
      const double term = softplus(margin);
      out.value += c * term;
      out.d_confidence[k] += term;
      const Vec3 g_pw = c * sigmoid(margin) * (cam_from_world.transpose() * d_margin_d_pc);
      const Vec6& w = weights[m];
      out.d_terminal[k].segment<3>(0) += w[3] * g_pw;
      out.d_terminal[k].segment<3>(3) += w[4] * g_pw;
      out.d_terminal[k].segment<3>(6) += w[5] * g_pw;
    }
  }
  return out;
}

std::vector<double> guidance_scores(const PrimitiveSet& set, const Vec3& goal,
                                    const GuidanceConfig& cfg) {
  const GoalFrame f = goal_frame(set.origin.p, goal);
  std::vector<double> scores;
  scores.reserve(set.size());
  for (const auto& xt : set.terminals) {
    const Vec3 dp = xt.p - set.origin.p;
    const double progress = dp.dot(f.along);
    const double lateral = (dp - progress * f.along).norm();
    const double excess = std::max(0.0, lateral - cfg.lateral_tolerance);
    scores.push_back(-cfg.progress_weight * progress + cfg.lateral_weight * excess * excess);
  }
  return scores;
}

LossTerm guidance_loss(const PrimitiveSet& set, const Vec3& goal, const GuidanceConfig& cfg) {
  const std::size_t k_count = set.size();
  const GoalFrame f = goal_frame(set.origin.p, goal);
  LossTerm out(k_count);
  if (k_count == 0) return out;
  const double c_sum = confidence_sum(set);

  std::vector<double> score(k_count);
  std::vector<double> offset(k_count);
  std::vector<Vec3> d_score(k_count);
  double mean_score = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    const Vec3 dp = set.terminals[k].p - set.origin.p;
    const double progress = dp.dot(f.along);
    const Vec3 lat_vec = dp - progress * f.along;
    const double lateral = lat_vec.norm();
    const double excess = std::max(0.0, lateral - cfg.lateral_tolerance);
    score[k] = -cfg.progress_weight * progress + cfg.lateral_weight * excess * excess;
    d_score[k] = -cfg.progress_weight * f.along;
    if (excess > 0.0) d_score[k] += 2.0 * cfg.lateral_weight * excess * (lat_vec / lateral);
    offset[k] = dp.dot(f.lateral);
    const double w = set.confidences[k] / c_sum;
    mean_score += w * score[k];
    out.d_terminal[k].segment<3>(0) = w * d_score[k];
  }
  for (std::size_t k = 0; k < k_count; ++k) {
    out.d_confidence[k] = (score[k] - mean_score) / c_sum;
  }

  double mean_offset = 0.0;
  for (double s : offset) mean_offset += s;
  mean_offset /= static_cast<double>(k_count);
  double var = 0.0;
  for (double s : offset) var += (s - mean_offset) * (s - mean_offset);
  var /= static_cast<double>(k_count);
  const double stddev = std::sqrt(var);

  out.value = mean_score - cfg.diversity_weight * stddev;
  if (stddev > 0.0) {
    for (std::size_t k = 0; k < k_count; ++k) {
      const double d_std = (offset[k] - mean_offset) / (static_cast<double>(k_count) * stddev);
      out.d_terminal[k].segment<3>(0) -= cfg.diversity_weight * d_std * f.lateral;
    }
  }
  return out;
}

LossBreakdown total_loss(const PrimitiveSet& set, const LossContext& ctx) {
  if (ctx.image == nullptr) throw std::invalid_argument("loss context has no depth image");
  const LossTerm smooth = smoothness_loss(set);
  const LossTerm safety =
      safety_loss(set, *ctx.image, ctx.pose, ctx.camera, ctx.safety, ctx.waypoints);
  const LossTerm guide = guidance_loss(set, ctx.goal, ctx.guidance);
  const LossWeights& w = ctx.weights;

  LossBreakdown out;
  out.smooth = smooth.value;
  out.safety = safety.value;
  out.guidance = guide.value;
  out.total = w.smooth * smooth.value + w.safety * safety.value + w.guidance * guide.value;
  out.d_terminal.resize(set.size());
  out.d_confidence.resize(set.size());
  for (std::size_t k = 0; k < set.size(); ++k) {
    out.d_terminal[k] = w.smooth * smooth.d_terminal[k] + w.safety * safety.d_terminal[k] +
                        w.guidance * guide.d_terminal[k];
    out.d_confidence[k] = w.smooth * smooth.d_confidence[k] + w.safety * safety.d_confidence[k] +
                          w.guidance * guide.d_confidence[k];
  }
  return out;
}

}  // namespace kio
