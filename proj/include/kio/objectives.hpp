#pragma once

#include <vector>

#include "kio/camera.hpp"
#include "kio/primitives.hpp"
#include "kio/shield.hpp"

namespace kio {

struct LossWeights {
  double smooth = 1e-3;
  double safety = 1.0;
  double guidance = 0.1;
};

/// Progress along the goal direction, hinge on lateral excess beyond `lateral_tolerance`,
/// and a bonus for spreading candidates laterally.
struct GuidanceConfig {
  double progress_weight = 1.0;    // α_par
  double lateral_weight = 0.5;     // β_lat
  double diversity_weight = 0.2;   // γ_div
  double lateral_tolerance = 2.0;  // L_max, m

  void validate() const;
};

/// A scalar loss with gradients w.r.t. each world-frame terminal state [p, v, a] and confidence.
struct LossTerm {
  double value = 0.0;
  std::vector<Vec9> d_terminal;
  std::vector<double> d_confidence;

  explicit LossTerm(std::size_t k = 0) : d_terminal(k, Vec9::Zero()), d_confidence(k, 0.0) {}
};

struct LossBreakdown {
  double total = 0.0;
  double smooth = 0.0;
  double safety = 0.0;
  double guidance = 0.0;
  std::vector<Vec9> d_terminal;
  std::vector<double> d_confidence;
};

double softplus(double x);
double sigmoid(double x);

/// Confidence-weighted mean of per-candidate jerk costs.
LossTerm smoothness_loss(const PrimitiveSet& set);

/// Σ_k c_k Σ_m softplus(z_c − d_obs + r + ε) with bilinear d_obs. Waypoints that do not
/// project into the image read d_obs = max_range.
LossTerm safety_loss(const PrimitiveSet& set, const DepthImage& image, const BodyPose& pose,
                     const CameraModel& camera, const SafetyParams& safety, int waypoints);

/// Throws std::invalid_argument when goal coincides with the start position.
LossTerm guidance_loss(const PrimitiveSet& set, const Vec3& goal, const GuidanceConfig& cfg);

/// Per-candidate guidance score without the set-level diversity term (lower is better).
std::vector<double> guidance_scores(const PrimitiveSet& set, const Vec3& goal,
                                    const GuidanceConfig& cfg);

struct LossContext {
  const DepthImage* image = nullptr;
  BodyPose pose;
  CameraModel camera;
  SafetyParams safety;
  int waypoints = 20;
  Vec3 goal = Vec3::Zero();
  GuidanceConfig guidance;
  LossWeights weights;
};

LossBreakdown total_loss(const PrimitiveSet& set, const LossContext& ctx);

}  // namespace kio
