#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <optional>
#include <sstream>
#include <tuple>
#include <stdexcept>

#include "kio/harness.hpp"
#include "kio/rng.hpp"

namespace kio {

namespace {

constexpr double kFlightHeightMin = 1.5;
constexpr double kFlightHeightMax = 4.0;
constexpr double kBorder = 2.0;
constexpr int kFreePointAttempts = 100000;

std::string num(double x, const char* fmt = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

std::string metrics_fields(const Metrics& m) {
  return num(m.latency_ms) + "," + num(m.path_length_m) + "," + num(m.avg_speed_mps) + "," +
         num(m.max_speed_mps) + "," + num(m.min_dist_m) + "," + num(m.smoothness);
}

}  // namespace

void BenchConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("bench needs N >= 1 trials");
  if (methods.empty() || tiers.empty()) throw std::invalid_argument("bench needs methods and tiers");
  if (!(min_separation >= 0.0)) throw std::invalid_argument("min_separation must be >= 0");
  world.validate();
  planner.validate();
}

std::uint64_t trial_world_seed(std::uint64_t bench_seed, int trial) {
  return derive_seed(bench_seed, static_cast<std::uint64_t>(trial));
}

std::pair<Vec3, Vec3> sample_start_goal(const World& world, const BenchConfig& config,
                                        std::uint64_t seed) {
  Rng rng(seed);
  const Vec3& e = world.extent();
  auto free_point = [&]() {
    for (int i = 0; i < kFreePointAttempts; ++i) {
      const Vec3 p(rng.uniform(kBorder, e.x() - kBorder), rng.uniform(kBorder, e.y() - kBorder),
                   rng.uniform(kFlightHeightMin, std::min(kFlightHeightMax, e.z())));
      if (world.signed_distance(p) >= config.start_clearance) return p;
    }
    throw std::runtime_error("no free start/goal point found");
  };
  const Vec3 start = free_point();
  for (int i = 0; i < kFreePointAttempts; ++i) {
    const Vec3 goal = free_point();
    if ((goal - start).norm() >= config.min_separation) return {start, goal};
  }
  throw std::runtime_error("no goal at the required separation from the start");
}

std::vector<SummaryRow> summarize(const std::vector<TrialRow>& rows) {
  std::vector<SummaryRow> out;
  for (const auto& r : rows) {
    if (out.empty() || out.back().method != r.method || out.back().tier != r.tier) {
      SummaryRow s;
      s.method = r.method;
      s.tier = r.tier;
      out.push_back(s);
    }
    SummaryRow& s = out.back();
    ++s.trials;
    s.min_dist_all_m += r.metrics.min_dist_m;
    switch (r.metrics.outcome) {
      case Outcome::Reached: {
        ++s.reached;
        const Metrics& m = r.metrics;
        s.mean.latency_ms += m.latency_ms;
        s.mean.path_length_m += m.path_length_m;
        s.mean.avg_speed_mps += m.avg_speed_mps;
        s.mean.max_speed_mps += m.max_speed_mps;
        s.mean.min_dist_m += m.min_dist_m;
        s.mean.smoothness += m.smoothness;
        break;
      }
      case Outcome::Collided: ++s.collided; break;
      case Outcome::Timeout: ++s.timeout; break;
    }
  }
  for (auto& s : out) {
    s.min_dist_all_m /= s.trials;
    const double n = s.reached > 0 ? s.reached : std::numeric_limits<double>::quiet_NaN();
    s.mean.latency_ms /= n;
    s.mean.path_length_m /= n;
    s.mean.avg_speed_mps /= n;
    s.mean.max_speed_mps /= n;
    s.mean.min_dist_m /= n;
    s.mean.smoothness /= n;
    s.mean.outcome = Outcome::Reached;
  }
  return out;
}

BenchResult run_benchmark(const BenchConfig& config, const nn::PolicyNet* net) {
  config.validate();
  for (Method m : config.methods) {
    if (uses_network(m) && net == nullptr) {
      throw std::invalid_argument("bench method '" + to_string(m) + "' needs a checkpoint");
    }
  }
  const bool parallel = config.execution == Execution::Parallel;

  std::vector<World> worlds(config.trials);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < config.trials; ++i) {
    worlds[i] = generate_world(config.world, trial_world_seed(config.seed, i));
  }

  struct Job {
    Method method;
    double tier;
    int trial;
  };
  std::vector<Job> jobs;
  for (Method m : config.methods) {
    for (double tier : config.tiers) {
      for (int i = 0; i < config.trials; ++i) jobs.push_back({m, tier, i});
    }
  }

  BenchResult result;
  result.rows.resize(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const int job_count = static_cast<int>(jobs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int j = 0; j < job_count; ++j) {
    try {
      const Job& job = jobs[j];
      const World& world = worlds[job.trial];
      TrialConfig tc;
      tc.world_seed = world.seed();
      tc.sampler_seed = derive_seed(world.seed(), 2);
      tc.method = job.method;
      tc.tier = job.tier;
      std::tie(tc.start, tc.goal) = sample_start_goal(world, config, derive_seed(world.seed(), 1));
      tc.replan_rate = config.replan_rate;
      tc.timeout = config.timeout;
      tc.max_range = config.max_range;
      tc.planner = config.planner;
      tc.record_timing = config.record_timing;
      // Forward passes cache activations, so every trial flies its own copy of the network.
      std::optional<nn::PolicyNet> local;
      if (uses_network(job.method)) local.emplace(*net);
      const TrialLog log = simulate_trial(tc, world, local ? &*local : nullptr);
      result.rows[j] = {job.method, job.tier, job.trial, log.metrics};
    } catch (...) {
      errors[j] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  result.summary = summarize(result.rows);
  return result;
}

std::string trials_csv(const std::vector<TrialRow>& rows) {
  std::ostringstream out;
  out << kTrialsHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.method) << ',' << num(r.tier, "%.1f") << ',' << metrics_fields(r.metrics)
        << ',' << to_string(r.metrics.outcome) << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "method,tier,latency_ms,path_length_m,avg_speed_mps,max_speed_mps,min_dist_m,smoothness,"
         "min_dist_all_m,trials,reached,collided,timeout\n";
  for (const auto& s : rows) {
    out << to_string(s.method) << ',' << num(s.tier, "%.1f") << ',' << metrics_fields(s.mean) << ','
        << num(s.min_dist_all_m) << ',' << s.trials << ',' << s.reached << ',' << s.collided << ','
        << s.timeout << '\n';
  }
  return out.str();
}

}  // namespace kio
