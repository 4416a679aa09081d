#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "kio/harness.hpp"
#include "kio/render.hpp"
#include "kio/rng.hpp"

namespace kio {

namespace {

using json = nlohmann::ordered_json;

// Yaw step applied when the vehicle is stopped by the fallback, to look for an opening.
constexpr double kSearchYawStep = 0.5;
constexpr double kStoppedSpeed = 0.05;
constexpr double kHeadingSpeed = 0.3;

double wrap_angle(double a) {
  return std::remainder(a, 2.0 * std::numbers::pi);
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json primitive_json(const Primitive& prim) {
  json c = json::array();
  for (const auto& axis : prim.coefficients) {
    json row = json::array();
    for (int i = 0; i < 6; ++i) row.push_back(axis[i]);
    c.push_back(row);
  }
  return json{{"coefficients", c}, {"T_f", prim.duration}};
}

json verdict_json(std::size_t index, const ShieldVerdict& v) {
  json out{{"index", index}, {"accepted", v.accepted}, {"violation", nullptr}};
  if (v.first_violation) {
    const Violation& x = *v.first_violation;
    out["violation"] = json{{"m", x.waypoint},
                            {"u", x.u},
                            {"v", x.v},
                            {"z_c", x.z_c},
                            {"d_obs", x.d_obs ? json(*x.d_obs) : json(nullptr)},
                            {"footprint", x.footprint}};
  }
  return out;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::Net: return "net";
    case Method::NetNoShield: return "net_no_shield";
    case Method::Sampler: return "sampler";
    case Method::SamplerNoShield: return "sampler_no_shield";
  }
  return "?";
}

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Reached: return "reached";
    case Outcome::Collided: return "collided";
    case Outcome::Timeout: return "timeout";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::Net, Method::NetNoShield, Method::Sampler, Method::SamplerNoShield}) {
    if (to_string(m) == name) return m;
  }
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected net, net_no_shield, sampler, sampler_no_shield)");
}

bool uses_network(Method m) { return m == Method::Net || m == Method::NetNoShield; }
bool uses_shield(Method m) { return m == Method::Net || m == Method::Sampler; }

PlannerConfig TrialConfig::effective_planner() const {
  PlannerConfig p = planner;
  p.envelope.v_max = tier;
  p.replan_rate = replan_rate;
  p.shield_enabled = uses_shield(method);
  return p;
}

void TrialConfig::validate() const {
  if (!(tier > 0.0)) throw std::invalid_argument("tier must be > 0");
  if (!(timeout > 0.0)) throw std::invalid_argument("timeout must be > 0");
  if (!(sim_dt > 0.0)) throw std::invalid_argument("sim_dt must be > 0");
  if (!(goal_tolerance > 0.0)) throw std::invalid_argument("goal tolerance must be > 0");
  if (!start.allFinite() || !goal.allFinite()) throw std::invalid_argument("start/goal not finite");
  effective_planner().validate();
}

std::uint64_t depth_checksum(const DepthImage& image) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (float f : image.values()) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    for (int b = 0; b < 4; ++b) {
      h ^= (bits >> (8 * b)) & 0xFFu;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

TrialLog simulate_trial(const TrialConfig& trial, const World& world, nn::PolicyNet* net) {
  trial.validate();
  if (uses_network(trial.method) && net == nullptr) {
    throw std::invalid_argument("method '" + to_string(trial.method) + "' needs a policy network");
  }
  const PlannerConfig planner = trial.effective_planner();
  const double radius = planner.safety.radius;
  for (const auto& [name, p] : {std::pair{"start", trial.start}, std::pair{"goal", trial.goal}}) {
    if (!world.contains(p)) throw std::invalid_argument(std::string(name) + " outside world bounds");
    if (world.signed_distance(p) < radius) {
      throw std::invalid_argument(std::string(name) + " collides at radius " + std::to_string(radius));
    }
  }

  TrialLog log;
  log.config = trial;
  KinodynamicState state;
  state.p = trial.start;
  const Vec3 to_goal = trial.goal - trial.start;
  state.yaw = std::atan2(to_goal.y(), to_goal.x());

  auto record = [&](double t, const Vec3& p, const Vec3& v) {
    const double c = world.signed_distance(p);
    log.samples.push_back({t, p, v, c});
    return c;
  };
  record(0.0, state.p, state.v);

  const double interval = 1.0 / trial.replan_rate;
  double t = 0.0;
  std::uint64_t step = 0;
  std::optional<Outcome> outcome;
  while (!outcome) {
    if ((state.p - trial.goal).norm() < trial.goal_tolerance) {
      outcome = Outcome::Reached;
      break;
    }
    if (t >= trial.timeout) {
      outcome = Outcome::Timeout;
      break;
    }
    const BodyPose pose = BodyPose::from_yaw(state.p, state.yaw);
    const DepthImage image = render_depth(world, pose, planner.camera.intrinsics,
                                          planner.camera.extrinsics, trial.max_range);
    const CandidateSource source = net ? CandidateSource::policy(*net)
                                       : CandidateSource::sampler(derive_seed(trial.sampler_seed, step));
    StepRecord rec;
    rec.t = t;
    rec.state = state;
    rec.depth_checksum = depth_checksum(image);
    rec.plan = plan_step(image, state, trial.goal, source, planner);
    if (!trial.record_timing) rec.plan.elapsed_ms = 0.0;

    const Primitive& prim = *rec.plan.chosen;
    const double exec = std::min(interval, prim.duration);
    const int n = std::max(1, static_cast<int>(std::lround(exec / trial.sim_dt)));
    for (int i = 1; i <= n; ++i) {
      const double tau = exec * i / n;
      const Primitive::Sample s = prim.eval(tau);
      rec.executed = tau;
      if (record(t + tau, s.p, s.v) < radius) {
        outcome = Outcome::Collided;
        break;
      }
      if ((s.p - trial.goal).norm() < trial.goal_tolerance) {
        outcome = Outcome::Reached;
        break;
      }
    }
    t += rec.executed;
    const double yaw = state.yaw;
    state = prim.state_at(rec.executed);
    if (rec.plan.used_fallback && state.v.norm() < kStoppedSpeed) {
      state.yaw = wrap_angle(yaw + kSearchYawStep);
    } else if (std::hypot(state.v.x(), state.v.y()) >= kHeadingSpeed) {
      // Look along the velocity so the next primitive starts inside the view.
      state.yaw = std::atan2(state.v.y(), state.v.x());
    } else {
      state.yaw = commanded_yaw(prim, yaw);
    }
    log.steps.push_back(std::move(rec));
    ++step;
  }
  log.outcome = *outcome;
  log.metrics = compute_metrics(log);
  return log;
}

Metrics compute_metrics(const TrialLog& log) {
  Metrics m;
  m.outcome = log.outcome;
  if (!log.steps.empty()) {
    double sum = 0.0;
    for (const auto& s : log.steps) sum += s.plan.elapsed_ms;
    m.latency_ms = sum / static_cast<double>(log.steps.size());
  }
  if (log.samples.empty()) return m;
  m.min_dist_m = log.samples.front().clearance;
  for (std::size_t i = 0; i < log.samples.size(); ++i) {
    const auto& s = log.samples[i];
    if (i > 0) m.path_length_m += (s.p - log.samples[i - 1].p).norm();
    m.max_speed_mps = std::max(m.max_speed_mps, s.v.norm());
    m.min_dist_m = std::min(m.min_dist_m, s.clearance);
  }
  const double total = log.samples.back().t - log.samples.front().t;
  if (total > 0.0) {
    m.avg_speed_mps = m.path_length_m / total;
    double jerk = 0.0;
    for (const auto& s : log.steps) {
      if (s.plan.chosen && s.executed > 0.0) jerk += jerk_integral(*s.plan.chosen, 0.0, s.executed);
    }
    m.smoothness = jerk / total;
  }
  return m;
}

void write_trial_log(const TrialLog& log, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trial log " + path);
  const TrialConfig& c = log.config;
  out << json{{"trial",
               {{"method", to_string(c.method)},
                {"tier", c.tier},
                {"world_seed", c.world_seed},
                {"sampler_seed", c.sampler_seed},
                {"start", vec_json(c.start)},
                {"goal", vec_json(c.goal)},
                {"replan_rate", c.replan_rate},
                {"timeout", c.timeout}}}}
             .dump()
      << '\n';
  for (const auto& s : log.steps) {
    json verdicts = json::array();
    for (std::size_t k = 0; k < s.plan.verdicts.size(); ++k) {
      verdicts.push_back(verdict_json(k, s.plan.verdicts[k]));
    }
    json confidences = json::array();
    for (double c : s.plan.candidates.confidences) confidences.push_back(c);
    json rec{{"t", s.t},
             {"state",
              {{"p", vec_json(s.state.p)},
               {"v", vec_json(s.state.v)},
               {"a", vec_json(s.state.a)},
               {"yaw", s.state.yaw}}},
             {"depth_checksum", s.depth_checksum},
             {"plan",
              {{"chosen", s.plan.chosen ? primitive_json(*s.plan.chosen) : json(nullptr)},
               {"chosen_index", s.plan.chosen_index ? json(*s.plan.chosen_index) : json(nullptr)},
               {"used_fallback", s.plan.used_fallback},
               {"elapsed_ms", s.plan.elapsed_ms},
               {"confidences", confidences},
               {"verdicts", verdicts}}},
             {"executed", s.executed}};
    out << rec.dump() << '\n';
  }
  const Metrics& m = log.metrics;
  out << json{{"metrics",
               {{"latency_ms", m.latency_ms},
                {"path_length_m", m.path_length_m},
                {"avg_speed_mps", m.avg_speed_mps},
                {"max_speed_mps", m.max_speed_mps},
                {"min_dist_m", m.min_dist_m},
                {"smoothness", m.smoothness},
                {"outcome", to_string(m.outcome)}}}}
             .dump()
      << '\n';
}

}  // namespace kio
