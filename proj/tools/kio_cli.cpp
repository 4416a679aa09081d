// kio: command-line front end for world generation, rendering, planning, simulation,
// benchmarking, training and gradient checks.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kio/gradcheck.hpp"
#include "kio/harness.hpp"
#include "kio/render.hpp"
#include "kio/rng.hpp"

namespace fs = std::filesystem;
using namespace kio;

namespace {

struct Globals {
  std::string config;
  std::uint64_t seed = 1;
  std::string out = "out";
};

AppConfig app_config(const Globals& g) {
  return g.config.empty() ? parse_app_config("{}") : load_app_config(g.config);
}

std::string out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out);
  return (fs::path(g.out) / name).string();
}

Vec3 vec3(const std::vector<double>& v) { return Vec3(v.at(0), v.at(1), v.at(2)); }

nlohmann::ordered_json plan_json(const PlanResult& r) {
  nlohmann::ordered_json j;
  j["used_fallback"] = r.used_fallback;
  j["chosen_index"] = r.chosen_index ? nlohmann::ordered_json(*r.chosen_index) : nullptr;
  j["elapsed_ms"] = r.elapsed_ms;
  auto cands = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < r.candidates.size(); ++k) {
    const auto& t = r.candidates.terminals[k];
    cands.push_back({{"p", {t.p.x(), t.p.y(), t.p.z()}},
                     {"v", {t.v.x(), t.v.y(), t.v.z()}},
                     {"confidence", r.candidates.confidences[k]},
                     {"accepted", r.verdicts[k].accepted}});
  }
  j["candidates"] = cands;
  if (r.chosen) {
    const KinodynamicState end = r.chosen->state_at(r.chosen->duration);
    j["chosen_terminal"] = {end.p.x(), end.p.y(), end.p.z()};
    j["chosen_duration"] = r.chosen->duration;
  }
  return j;
}

nn::PolicyNet load_net(const std::string& path, const AppConfig& cfg) {
  if (path.empty()) throw std::invalid_argument("a --checkpoint is required for network planning");
  return nn::load_checkpoint(path, cfg.network);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Depth-image motion-primitive planner with a geometric safety shield"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Base seed");
  app.add_option("--out", g.out, "Output directory");

  // gen-world
  auto* gen = app.add_subcommand("gen-world", "Generate a wall world and write world.json");

  // render
  auto* render = app.add_subcommand("render", "Render a depth frame to depth.pfm");
  std::string world_path;
  std::vector<double> pos{50.0, 50.0, 2.0};
  std::vector<double> goal{60.0, 50.0, 2.0};
  double yaw = 0.0;
  render->add_option("--world", world_path, "World JSON (default: generate from --seed)");
  render->add_option("--pos", pos, "Camera body position x y z")->expected(3);
  render->add_option("--yaw", yaw, "Body yaw, rad");

  // plan
  auto* plan = app.add_subcommand("plan", "Run one planning step and print the result");
  std::string method_name = "sampler";
  std::string checkpoint;
  std::vector<double> vel{0.0, 0.0, 0.0};
  plan->add_option("--world", world_path, "World JSON (default: generate from --seed)");
  plan->add_option("--pos", pos, "Position x y z")->expected(3);
  plan->add_option("--vel", vel, "Velocity x y z")->expected(3);
  plan->add_option("--yaw", yaw, "Yaw, rad");
  plan->add_option("--goal", goal, "Goal x y z")->expected(3);
  plan->add_option("--method", method_name, "sampler | net");
  plan->add_option("--checkpoint", checkpoint, "Policy checkpoint for --method net");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Fly one closed-loop trial and write trial.jsonl");
  double tier = 2.0;
  bool no_timing = false;
  sim->add_option("--method", method_name, "net | net_no_shield | sampler | sampler_no_shield");
  sim->add_option("--tier", tier, "Speed tier v_max, m/s");
  sim->add_option("--checkpoint", checkpoint, "Policy checkpoint for net methods");
  sim->add_flag("--no-timing", no_timing, "Log zero latency for reproducible output");
  std::optional<int> trial_index;
  sim->add_option("--trial", trial_index, "Replay trial i of `bench --seed`");

  // bench
  auto* bench = app.add_subcommand("bench", "Seeded trials over methods x tiers; writes CSVs");
  std::optional<int> trials;
  std::vector<std::string> methods;
  std::vector<double> tiers;
  bool serial = false;
  bench->add_option("--trials", trials, "Trials per (method, tier)");
  bench->add_option("--methods", methods, "Methods to run");
  bench->add_option("--tiers", tiers, "Speed tiers");
  bench->add_option("--checkpoint", checkpoint, "Policy checkpoint for net methods");
  bench->add_flag("--serial", serial, "Run trials one at a time");
  bench->add_flag("--no-timing", no_timing, "Write zero latency so CSVs are byte-reproducible");

  // train
  auto* train = app.add_subcommand("train", "Generate a dataset, train, write policy.kio and loss.csv");
  std::optional<int> steps;
  train->add_option("--steps", steps, "Optimizer steps");

  // gradcheck
  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of the full loss graph");
  int per_tensor = 3;
  grad->add_option("--per-tensor", per_tensor, "Entries checked per parameter tensor");

  CLI11_PARSE(app, argc, argv);

  try {
    const AppConfig cfg = app_config(g);
    auto world_from_args = [&]() {
      return world_path.empty() ? generate_world(cfg.world, g.seed) : load_world(world_path);
    };

    if (*gen) {
      const World w = generate_world(cfg.world, g.seed);
      const std::string path = out_path(g, "world.json");
      save_world(w, path);
      std::printf("%zu walls in %zu formations -> %s\n", w.walls().size(), w.formations().size(),
                  path.c_str());
    } else if (*render) {
      const World w = world_from_args();
      const BodyPose pose = BodyPose::from_yaw(vec3(pos), yaw);
      const DepthImage img = render_depth(w, pose, cfg.camera.intrinsics, cfg.camera.extrinsics,
                                          cfg.max_range);
      const std::string path = out_path(g, "depth.pfm");
      write_pfm(img, path);
      write_file(out_path(g, "depth.json"),
                 depth_sidecar_json(cfg.camera.intrinsics, pose, cfg.camera.extrinsics, cfg.max_range));
      std::printf("%dx%d depth -> %s\n", img.width(), img.height(), path.c_str());
    } else if (*plan) {
      const World w = world_from_args();
      KinodynamicState s;
      s.p = vec3(pos);
      s.v = vec3(vel);
      s.yaw = yaw;
      const DepthImage img = render_depth(w, BodyPose::from_yaw(s.p, yaw), cfg.camera.intrinsics,
                                          cfg.camera.extrinsics, cfg.max_range);
      std::optional<nn::PolicyNet> net;
      CandidateSource source = CandidateSource::sampler(g.seed);
      if (method_name == "net") {
        net.emplace(load_net(checkpoint, cfg));
        source = CandidateSource::policy(*net);
      } else if (method_name != "sampler") {
        throw std::invalid_argument("plan --method must be sampler or net");
      }
      std::cout << plan_json(plan_step(img, s, vec3(goal), source, cfg.planner)).dump(2) << '\n';
    } else if (*sim) {
      BenchConfig bc = cfg.bench;
      const std::uint64_t world_seed = trial_index ? trial_world_seed(g.seed, *trial_index) : g.seed;
      const World w = generate_world(cfg.world, world_seed);
      TrialConfig tc;
      tc.world_seed = world_seed;
      tc.sampler_seed = derive_seed(world_seed, 2);
      tc.method = parse_method(method_name);
      tc.tier = tier;
      std::tie(tc.start, tc.goal) = sample_start_goal(w, bc, derive_seed(world_seed, 1));
      tc.replan_rate = cfg.planner.replan_rate;
      tc.timeout = bc.timeout;
      tc.max_range = cfg.max_range;
      tc.planner = cfg.planner;
      tc.record_timing = !no_timing;
      std::optional<nn::PolicyNet> net;
      if (uses_network(tc.method)) net.emplace(load_net(checkpoint, cfg));
      const TrialLog log = simulate_trial(tc, w, net ? &*net : nullptr);
      const std::string path = out_path(g, "trial.jsonl");
      write_trial_log(log, path);
      const Metrics& m = log.metrics;
      std::printf("%s: %zu steps, path %.2f m, avg %.2f m/s, max %.2f m/s, min_dist %.3f m, "
                  "smoothness %.2f, latency %.3f ms -> %s\n",
                  to_string(m.outcome).c_str(), log.steps.size(), m.path_length_m, m.avg_speed_mps,
                  m.max_speed_mps, m.min_dist_m, m.smoothness, m.latency_ms, path.c_str());
    } else if (*bench) {
      BenchConfig bc = cfg.bench;
      bc.seed = g.seed;
      if (trials) bc.trials = *trials;
      if (!methods.empty()) {
        bc.methods.clear();
        for (const auto& m : methods) bc.methods.push_back(parse_method(m));
      }
      if (!tiers.empty()) bc.tiers = tiers;
      if (!checkpoint.empty()) bc.checkpoint = checkpoint;
      if (no_timing) bc.record_timing = false;
      bc.execution = serial ? Execution::Serial : Execution::Parallel;
      std::optional<nn::PolicyNet> net;
      for (Method m : bc.methods) {
        if (uses_network(m) && !net) net.emplace(load_net(bc.checkpoint, cfg));
      }
      const BenchResult r = run_benchmark(bc, net ? &*net : nullptr);
      write_file(out_path(g, "trials.csv"), trials_csv(r.rows));
      const std::string summary = summary_csv(r.summary);
      write_file(out_path(g, "summary.csv"), summary);
      std::cout << summary;
    } else if (*train) {
      DatasetConfig dc = cfg.dataset;
      for (auto& s : dc.world_seeds) s = derive_seed(g.seed, s);
      const Dataset data = generate_dataset(dc);
      save_dataset(data, out_path(g, "dataset.kiod"));
      TrainConfig tc = cfg.training;
      if (steps) tc.steps = *steps;
      nn::PolicyNet net(cfg.network, g.seed);
      const auto curve = train_policy(net, data, tc);
      write_file(out_path(g, "loss.csv"), loss_curve_csv(curve));
      nn::save_checkpoint(net, out_path(g, "policy.kio"));
      std::printf("%zu frames, %d steps, loss %.6g -> %.6g\n", data.size(), tc.steps,
                  curve.front().total, curve.back().total);
    } else if (*grad) {
      DatasetConfig dc = cfg.dataset;
      dc.world_seeds = {g.seed};
      dc.frames_per_world = 1;
      const Dataset data = generate_dataset(dc);
      nn::PolicyNet net(cfg.network, g.seed);
      const GradcheckReport r =
          gradcheck_policy(net, data.front(), cfg.training.context, per_tensor, g.seed);
      for (const auto& e : r.entries) {
        std::printf("%-28s %6zu  analytic % .6e  numeric % .6e  rel %.2e%s\n", e.tensor.c_str(),
                    e.index, e.analytic, e.numeric, e.rel_error, e.kink ? "  (kink)" : "");
      }
      std::printf("max relative error %.3e over %zu entries (%d kinks skipped)\n", r.max_rel_error,
                  r.entries.size() - r.kinks, r.kinks);
      return r.max_rel_error <= 1e-3 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
