#include "kio/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "kio/rng.hpp"

namespace kio {

namespace {

constexpr double kMinBrakeTime = 0.3;
constexpr int kMaxBrakeHalvings = 4;
constexpr double kSamplerAzimuth = 60.0 * std::numbers::pi / 180.0;
constexpr double kSamplerElevation = 25.0 * std::numbers::pi / 180.0;
constexpr double kSamplerMinDistance = 0.5;

}  // namespace

void PlannerConfig::validate() const {
  if (candidates < 1 || sampler_candidates < 1) throw std::invalid_argument("K must be >= 1");
  if (waypoints < 2) throw std::invalid_argument("M must be >= 2");
  if (!(duration > 0.0)) throw std::invalid_argument("T_f must be > 0");
  if (!(replan_rate > 0.0)) throw std::invalid_argument("replan rate must be > 0");
  envelope.validate();
  safety.validate();
  guidance.validate();
}

std::optional<std::size_t> select_candidate(const PrimitiveSet& set,
                                            const std::vector<std::size_t>& survivors,
                                            const std::vector<double>& guidance_scores) {
  std::optional<std::size_t> best;
  for (std::size_t k : survivors) {
    if (!best) {
      best = k;
      continue;
    }
    const double c = set.confidences[k];
    const double cb = set.confidences[*best];
    if (c > cb || (c == cb && guidance_scores[k] < guidance_scores[*best]) ||
        (c == cb && guidance_scores[k] == guidance_scores[*best] && k < *best)) {
      best = k;
    }
  }
  return best;
}

KinodynamicState braking_terminal(const KinodynamicState& state, const PlannerConfig& config,
                                  double scale, double* brake_time) {
  const double t_brake = std::max(state.v.norm() / config.envelope.a_max, kMinBrakeTime);
  if (brake_time) *brake_time = t_brake;
  KinodynamicState t;
  t.p = state.p + scale * state.v * (t_brake / 2.0);
  t.v = Vec3::Zero();
  t.a = Vec3::Zero();
  t.yaw = state.yaw;
  return t;
}

Primitive fallback_stop(const KinodynamicState& state, const PlannerConfig& config,
                        const DepthImage* image) {
  if (state.v.norm() == 0.0 && state.a.norm() == 0.0) {
    return hold_primitive(state.p, state.yaw, config.duration);
  }
  const BodyPose pose = BodyPose::from_yaw(state.p, state.yaw);
  double scale = 1.0;
  for (int attempt = 0; attempt <= kMaxBrakeHalvings; ++attempt, scale *= 0.5) {
    double t_brake = 0.0;
    const KinodynamicState terminal = braking_terminal(state, config, scale, &t_brake);
    Primitive brake = solve_obvp(state, terminal, t_brake);
    if (image == nullptr ||
        shield_check(brake, *image, pose, config.camera, config.safety, config.waypoints).accepted) {
      return brake;
    }
  }
  return hold_primitive(state.p, state.yaw, config.duration);
}

PrimitiveSet sampler_candidates(const KinodynamicState& state, const Vec3& goal,
                                const PlannerConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  const Mat3 r = yaw_rotation(state.yaw);
  const auto& env = config.envelope;
  // Cap the reach so the mean speed over the horizon stays within V_max.
  const double reach = std::min(env.p_max, env.v_max * config.duration);
  PrimitiveSet set;
  set.origin = state;
  set.duration = config.duration;
  for (int k = 0; k < config.sampler_candidates; ++k) {
    const double azimuth = rng.uniform(-kSamplerAzimuth, kSamplerAzimuth);
    const double elevation = rng.uniform(-kSamplerElevation, kSamplerElevation);
    const double distance = rng.uniform(std::min(kSamplerMinDistance, reach), reach);
    const Vec3 dir(std::cos(elevation) * std::cos(azimuth), std::cos(elevation) * std::sin(azimuth),
                   std::sin(elevation));
    KinodynamicState t;
    t.p = state.p + r * (distance * dir);
    t.v = r * (dir * std::min(distance / config.duration, env.v_max));
    t.a = Vec3::Zero();
    t.yaw = state.yaw;
    set.terminals.push_back(t);
  }

  // Confidence 1 − rank/K, rank by ascending guidance score, ties by index.
  set.confidences.assign(set.size(), 1.0);
  const std::vector<double> scores = guidance_scores(set, goal, config.guidance);
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  const double k_count = static_cast<double>(set.size());
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    set.confidences[order[rank]] = 1.0 - static_cast<double>(rank) / k_count;
  }
  return set;
}

double commanded_yaw(const Primitive& prim, double current) {
  const Vec3 delta = prim.eval(prim.duration).p - prim.eval(0.0).p;
  if (std::hypot(delta.x(), delta.y()) < 1e-6) return current;
  return std::atan2(delta.y(), delta.x());
}

PlanResult plan_step(const DepthImage& image, const KinodynamicState& state, const Vec3& goal,
                     const CandidateSource& source, const PlannerConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  PlanResult result;
  if (source.network != nullptr) {
    const nn::PolicyOutput out =
        source.network->predict(image, nn::conditioning_vector(state, goal));
    result.candidates = nn::candidates_from_output(out, state, config.envelope, config.duration);
  } else {
    result.candidates = sampler_candidates(state, goal, config, source.sampler_seed);
  }

  std::vector<std::size_t> survivors;
  if (config.shield_enabled) {
    const BodyPose pose = BodyPose::from_yaw(state.p, state.yaw);
    FilterResult filtered = filter_primitives(result.candidates, image, pose, config.camera,
                                              config.safety, config.waypoints);
    result.verdicts = std::move(filtered.verdicts);
    survivors = std::move(filtered.survivor_indices);
  } else {
    result.verdicts.assign(result.candidates.size(), ShieldVerdict{});
    survivors.resize(result.candidates.size());
    std::iota(survivors.begin(), survivors.end(), 0);
  }

  const std::vector<double> scores = guidance_scores(result.candidates, goal, config.guidance);
  result.chosen_index = select_candidate(result.candidates, survivors, scores);
  if (result.chosen_index) {
    result.chosen = result.candidates.primitive(*result.chosen_index);
  } else {
    result.used_fallback = true;
    result.chosen = fallback_stop(state, config, config.shield_enabled ? &image : nullptr);
  }
  result.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace kio
