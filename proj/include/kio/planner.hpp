#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kio/camera.hpp"
#include "kio/micronet/policy_net.hpp"
#include "kio/objectives.hpp"
#include "kio/primitives.hpp"
#include "kio/shield.hpp"

namespace kio {

struct PlannerConfig {
  int candidates = 5;           // K, network head size
  int sampler_candidates = 24;  // K for the sampling baseline
  int waypoints = 20;           // M
  double duration = 1.5;        // T_f, s
  PhysicalEnvelope envelope;
  SafetyParams safety;
  GuidanceConfig guidance;
  CameraModel camera;
  double replan_rate = 10.0;  // Hz
  bool shield_enabled = true;
  // Selection: highest confidence, then lowest guidance score, then lowest index.
  std::string tie_break = "confidence,guidance,index";

  void validate() const;
};

/// Where raw candidates come from on a planning step.
struct CandidateSource {
  nn::PolicyNet* network = nullptr;  // null selects the sampler
  std::uint64_t sampler_seed = 0;

  static CandidateSource sampler(std::uint64_t seed) { return {nullptr, seed}; }
  static CandidateSource policy(nn::PolicyNet& net) { return {&net, 0}; }
};

struct PlanResult {
  std::optional<Primitive> chosen;
  std::optional<std::size_t> chosen_index;  // absent when the fallback was used
  PrimitiveSet candidates;
  std::vector<ShieldVerdict> verdicts;  // aligned with candidates
  bool used_fallback = false;
  double elapsed_ms = 0.0;
};

/// Generate → bound → quintic → shield → select; falls back to a braking primitive
/// when no candidate survives.
PlanResult plan_step(const DepthImage& image, const KinodynamicState& state, const Vec3& goal,
                     const CandidateSource& source, const PlannerConfig& config);

/// Index into `set` of the selected candidate among `survivors`.
std::optional<std::size_t> select_candidate(const PrimitiveSet& set,
                                            const std::vector<std::size_t>& survivors,
                                            const std::vector<double>& guidance_scores);

/// Terminal of the braking primitive with its displacement scaled by `scale`.
KinodynamicState braking_terminal(const KinodynamicState& state, const PlannerConfig& config,
                                  double scale, double* brake_time = nullptr);

/// Braking primitive ending at rest; shortened by halving up to four times when the shield
/// rejects it, then a zero-motion hold. Pass no image to skip the shield check.
Primitive fallback_stop(const KinodynamicState& state, const PlannerConfig& config,
                        const DepthImage* image = nullptr);

/// Network-free baseline: terminals in a forward cone of the yaw frame, ranked by guidance.
PrimitiveSet sampler_candidates(const KinodynamicState& state, const Vec3& goal,
                                const PlannerConfig& config, std::uint64_t seed);

/// Yaw facing the primitive's mean horizontal velocity; `current` if it barely moves.
double commanded_yaw(const Primitive& prim, double current);

}  // namespace kio
