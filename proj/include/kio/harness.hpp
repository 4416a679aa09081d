#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kio/camera.hpp"
#include "kio/execution.hpp"
#include "kio/micronet/policy_net.hpp"
#include "kio/micronet/training.hpp"
#include "kio/planner.hpp"
#include "kio/world.hpp"

namespace kio {

enum class Method { Net, NetNoShield, Sampler, SamplerNoShield };
enum class Outcome { Reached, Collided, Timeout };

std::string to_string(Method m);
std::string to_string(Outcome o);
Method parse_method(const std::string& name);
bool uses_network(Method m);
bool uses_shield(Method m);

struct TrialConfig {
  std::uint64_t world_seed = 0;
  std::uint64_t sampler_seed = 0;
  Method method = Method::Sampler;
  double tier = 2.0;  // v_max, m/s
  Vec3 start = Vec3::Zero();
  Vec3 goal = Vec3::Zero();
  double replan_rate = 10.0;  // Hz
  double timeout = 60.0;      // s
  double goal_tolerance = 1.0;
  double sim_dt = 0.01;
  double max_range = 5.0;
  // Planner settings; the envelope's v_max is overridden by `tier`.
  PlannerConfig planner;
  // Off: latency is logged as zero so logs and CSVs are byte-reproducible.
  bool record_timing = true;

  PlannerConfig effective_planner() const;
  void validate() const;
};

struct Metrics {
  double latency_ms = 0.0;
  double path_length_m = 0.0;
  double avg_speed_mps = 0.0;
  double max_speed_mps = 0.0;
  double min_dist_m = 0.0;
  double smoothness = 0.0;  // mean squared jerk, m²/s⁶
  Outcome outcome = Outcome::Timeout;
};

struct TrajectorySample {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  double clearance = 0.0;  // true signed distance
};

struct StepRecord {
  double t = 0.0;
  KinodynamicState state;
  PlanResult plan;
  double executed = 0.0;  // seconds of the chosen primitive that were flown
  std::uint64_t depth_checksum = 0;
};

struct TrialLog {
  TrialConfig config;
  std::vector<StepRecord> steps;
  std::vector<TrajectorySample> samples;
  Outcome outcome = Outcome::Timeout;
  Metrics metrics;
};

/// FNV-1a over the raw float bytes of a depth frame.
std::uint64_t depth_checksum(const DepthImage& image);

/// Closed loop: render, plan, fly one replan interval of the chosen primitive exactly.
/// Throws std::invalid_argument for infeasible start/goal or a missing network.
TrialLog simulate_trial(const TrialConfig& trial, const World& world, nn::PolicyNet* net = nullptr);

Metrics compute_metrics(const TrialLog& log);

/// One JSON object per decision step, then a final metrics record.
void write_trial_log(const TrialLog& log, const std::string& path);

struct BenchConfig {
  std::vector<Method> methods{Method::Sampler, Method::SamplerNoShield};
  std::vector<double> tiers{2.0};
  int trials = 50;
  std::uint64_t seed = 1;
  WorldGenConfig world;
  PlannerConfig planner;
  double timeout = 60.0;
  double replan_rate = 10.0;
  double max_range = 5.0;
  double min_separation = 40.0;   // start-goal distance, m
  double start_clearance = 1.0;   // m
  bool record_timing = true;
  Execution execution = Execution::Parallel;
  std::string checkpoint;  // required for net methods

  void validate() const;
};

struct TrialRow {
  Method method = Method::Sampler;
  double tier = 0.0;
  int trial = 0;
  Metrics metrics;
};

struct SummaryRow {
  Method method = Method::Sampler;
  double tier = 0.0;
  Metrics mean;  // over reached trials
  double min_dist_all_m = 0.0;  // over every trial
  int trials = 0;
  int reached = 0;
  int collided = 0;
  int timeout = 0;
};

struct BenchResult {
  std::vector<TrialRow> rows;  // sorted by method, tier, trial
  std::vector<SummaryRow> summary;
};

/// Start and goal for trial `index` of a world: uniform over free space, far apart.
std::pair<Vec3, Vec3> sample_start_goal(const World& world, const BenchConfig& config,
                                        std::uint64_t seed);

std::uint64_t trial_world_seed(std::uint64_t bench_seed, int trial);

BenchResult run_benchmark(const BenchConfig& config, const nn::PolicyNet* net = nullptr);
std::vector<SummaryRow> summarize(const std::vector<TrialRow>& rows);

std::string trials_csv(const std::vector<TrialRow>& rows);
std::string summary_csv(const std::vector<SummaryRow>& rows);
inline constexpr const char* kTrialsHeader =
    "method,tier,latency_ms,path_length_m,avg_speed_mps,max_speed_mps,min_dist_m,smoothness,outcome";

struct DatasetConfig {
  std::vector<std::uint64_t> world_seeds{1};
  int frames_per_world = 16;
  WorldGenConfig world;
  CameraModel camera;
  double max_range = 5.0;
  double radius = 0.3;
  double max_speed = 2.0;
  void validate() const;
};

using Dataset = std::vector<nn::TrainingSample>;

Dataset generate_dataset(const DatasetConfig& config);
std::string serialize_dataset(const Dataset& data);
Dataset deserialize_dataset(const std::string& bytes);
void save_dataset(const Dataset& data, const std::string& path);
Dataset load_dataset(const std::string& path);

struct TrainConfig {
  int steps = 200;
  int batch_size = 8;
  double learning_rate = 1e-3;
  std::uint64_t seed = 7;
  nn::TrainingContext context;
};

/// Mini-batch Adam over `data`; returns the per-step pre-update loss.
std::vector<LossBreakdown> train_policy(nn::PolicyNet& net, const Dataset& data,
                                        const TrainConfig& config);
std::string loss_curve_csv(const std::vector<LossBreakdown>& curve);

/// Everything the CLI reads from its config file.
struct AppConfig {
  WorldGenConfig world;
  CameraModel camera;
  double max_range = 5.0;
  PlannerConfig planner;
  LossWeights losses;
  TrainConfig training;
  DatasetConfig dataset;
  BenchConfig bench;
  nn::PolicyNetConfig network;
};

/// Parses a JSON config with optional sections world, camera, planner, safety, losses,
/// training, bench. Unknown keys are errors.
AppConfig parse_app_config(const std::string& text);
AppConfig load_app_config(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace kio
