// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers to run a subset.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kio/gradcheck.hpp"
#include "kio/harness.hpp"
#include "kio/micronet/layers.hpp"
#include "kio/micronet/policy_net.hpp"
#include "kio/micronet/training.hpp"
#include "kio/render.hpp"
#include "oracles.hpp"

using namespace kio;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

KinodynamicState rest_at(const Vec3& p) {
  KinodynamicState s;
  s.p = p;
  return s;
}

// ---- 1 -----------------------------------------------------------------------------------

Verdict obvp_exactness() {
  Rng rng(101);
  double boundary = 0.0;
  double oracle = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const KinodynamicState x0 = test::random_state(rng);
    const KinodynamicState xT = test::random_state(rng);
    const double T = rng.uniform(0.3, 3.0);
    const Primitive p = solve_obvp(x0, xT, T);
    const auto s0 = p.eval(0.0);
    const auto sT = p.eval(T);
    for (const double e : {(s0.p - x0.p).norm(), (s0.v - x0.v).norm(), (s0.a - x0.a).norm(),
                           (sT.p - xT.p).norm(), (sT.v - xT.v).norm(), (sT.a - xT.a).norm()}) {
      boundary = std::max(boundary, e);
    }
    for (int axis = 0; axis < 3; ++axis) {
      const Vec6 c = test::oracle_coefficients(axis_boundary(x0, xT, axis), T);
      oracle = std::max(oracle, (c - p.coefficients[axis]).cwiseAbs().maxCoeff() /
                                    std::max(1.0, c.cwiseAbs().maxCoeff()));
    }
  }
  const Primitive unit = solve_obvp(rest_at(Vec3::Zero()), rest_at(Vec3(1, 0, 0)), 1.0);
  const Vec6 expected = (Vec6() << 0, 0, 0, 10, -15, 6).finished();
  const double coeff = (unit.coefficients[0] - expected).cwiseAbs().maxCoeff();
  const double cost = std::abs(jerk_cost(unit) - 720.0);
  const double quad = std::abs(test::jerk_quadrature(unit, 0.0, 1.0) - 720.0);

  Verdict o;
  o.pass = boundary < 1e-9 && oracle < 1e-9 && coeff < 1e-9 && cost < 1e-9 && quad < 1e-9;
  o.detail = "boundary err " + fmt("%.2e", boundary) + ", vs 6x6 solve " + fmt("%.2e", oracle) +
             ", unit coeff err " + fmt("%.2e", coeff) + ", |J-720| " + fmt("%.2e", cost) +
             " (Simpson " + fmt("%.2e", quad) + ")";
  return o;
}

// ---- 2 -----------------------------------------------------------------------------------

Verdict jerk_quadratic_form() {
  Rng rng(102);
  double form = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double T = rng.uniform(0.5, 3.0);
    const KinodynamicState x0 = test::random_state(rng);
    const KinodynamicState xT = test::random_state(rng);
    const Primitive p = solve_obvp(x0, xT, T);
    const Mat6 r = jerk_penalty_matrix(T);
    double quadratic = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      const AxisBoundary d = axis_boundary(x0, xT, axis);
      quadratic += d.dot(r * d);
    }
    form = std::max(form, test::rel_err(quadratic, test::jerk_quadrature(p, 0.0, T)));
  }
  double scaling = 0.0;
  const KinodynamicState a = rest_at(Vec3(0.5, -1, 2));
  const KinodynamicState b = rest_at(Vec3(3, 1, 1));
  const double j1 = jerk_cost(solve_obvp(a, b, 1.0));
  for (double T : {0.25, 0.5, 1.5, 2.0, 4.0, 8.0}) {
    scaling = std::max(scaling, test::rel_err(jerk_cost(solve_obvp(a, b, T)), j1 / std::pow(T, 5)));
  }
  Verdict o;
  o.pass = form < 1e-6 && scaling < 1e-6;
  o.detail = "d'R_J d vs quadrature " + fmt("%.2e", form) + ", 1/T^5 law " + fmt("%.2e", scaling);
  return o;
}

// ---- 3 -----------------------------------------------------------------------------------

Verdict projection() {
  const Intrinsics k = Intrinsics::default_depth_camera();
  const CameraExtrinsics e;
  Rng rng(103);
  double round_trip = 0.0;
  int projected = 0;
  for (int i = 0; i < 1000; ++i) {
    const BodyPose pose = BodyPose::from_yaw(test::random_vec(rng, 20.0), rng.uniform(-3.1, 3.1));
    const double u = rng.uniform(0.0, k.width - 1e-9);
    const double v = rng.uniform(0.0, k.height - 1e-9);
    const double z = rng.uniform(0.2, 20.0);
    const Vec3 w = back_project(u, v, z, pose, k, e);
    const auto pr = project(w, pose, k, e);
    if (!pr) continue;
    ++projected;
    round_trip = std::max(round_trip, (back_project(pr->u, pr->v, pr->z, pose, k, e) - w).norm());
  }
  const DepthImage img = render_depth(test::frontal_wall(2.0), BodyPose{}, k, e, 5.0);
  const double center = std::abs(img.at(static_cast<int>(k.cx), static_cast<int>(k.cy)) - 2.0);
  Verdict o;
  o.pass = projected == 1000 && round_trip < 1e-9 && center < 1e-6;
  o.detail = std::to_string(projected) + "/1000 projected, round trip " + fmt("%.2e", round_trip) +
             " m, center depth err " + fmt("%.2e", center) + " m";
  return o;
}

// ---- 4 -----------------------------------------------------------------------------------

Verdict shield_soundness() {
  const CameraModel cam;
  const double max_range = 5.0;
  const int M = 20;
  std::vector<SafetyParams> rules(2);
  rules[1].footprint = false;  // the bare depth rule
  int pairs = 0;
  int accepted = 0;
  int unsound = 0;
  int piercing = 0;
  int pierced_accepted = 0;
  Rng rng(104);
  for (std::uint64_t seed = 1; pairs < 500 || piercing < 500; ++seed) {
    const World world = generate_world(WorldGenConfig{}, derive_seed(104, seed));
    for (int scene = 0; scene < 100 && (pairs < 500 || piercing < 500); ++scene) {
      Vec3 p;
      do {
        p = Vec3(rng.uniform(5, 95), rng.uniform(5, 95), rng.uniform(1.5, 4));
      } while (world.signed_distance(p) < 0.5);
      const BodyPose pose = BodyPose::from_yaw(p, rng.uniform(-3.1, 3.1));
      const DepthImage img = render_depth(world, pose, cam.intrinsics, cam.extrinsics, max_range);

      if (pairs < 500) {
        KinodynamicState x0 = rest_at(p);
        x0.v = pose.rotation * Vec3(rng.uniform(0, 2), rng.uniform(-0.5, 0.5), rng.uniform(-0.2, 0.2));
        x0.a = pose.rotation * test::random_vec(rng, 1.0);
        KinodynamicState xT;
        xT.p = p + pose.rotation * Vec3(rng.uniform(0.3, 4), rng.uniform(-1.5, 1.5), rng.uniform(-0.6, 0.6));
        xT.v = pose.rotation * Vec3(rng.uniform(0, 2), rng.uniform(-0.5, 0.5), 0);
        const Primitive prim = solve_obvp(x0, xT, rng.uniform(1.0, 2.0));
        for (const SafetyParams& s : rules) {
          if (!shield_check(prim, img, pose, cam, s, M).accepted) continue;
          ++accepted;
          if (!test::satisfies_depth_rule(prim, img, pose, cam, s, M)) ++unsound;
        }
        ++pairs;
      }

      // Terminal placed on a pixel ray that hits a wall, past d_obs − (r + ε).
      if (piercing < 500) {
        const int u = rng.uniform_int(0, cam.intrinsics.width - 1);
        const int v = rng.uniform_int(0, cam.intrinsics.height - 1);
        const double d = img.at(u, v);
        const double margin = rules[0].margin();
        if (d >= max_range || d < margin + 0.2) continue;
        const double z_t = d - margin + rng.uniform(0.01, margin + 1.0);
        KinodynamicState x0 = rest_at(p);
        KinodynamicState xT = rest_at(back_project(u, v, z_t, pose, cam.intrinsics, cam.extrinsics));
        const Vec3 along = (xT.p - p).normalized();
        x0.v = along * rng.uniform(0.0, 2.0);
        xT.v = along * rng.uniform(0.0, 2.0);
        const Primitive prim = solve_obvp(x0, xT, rng.uniform(1.0, 2.0));
        for (const SafetyParams& s : rules) {
          if (shield_check(prim, img, pose, cam, s, M).accepted) ++pierced_accepted;
        }
        ++piercing;
      }
    }
  }
  Verdict o;
  o.pass = unsound == 0 && pierced_accepted == 0 && accepted > 0;
  o.detail = std::to_string(pairs) + " pairs x 2 rules: " + std::to_string(accepted) + " accepted, " +
             std::to_string(unsound) + " fail re-check; " + std::to_string(piercing) +
             " wall-piercing x 2 rules: " + std::to_string(pierced_accepted) + " accepted";
  return o;
}

// ---- 5 -----------------------------------------------------------------------------------

PrimitiveSet random_set(Rng& rng, int k, const Vec3& origin, double yaw) {
  const Mat3 r = yaw_rotation(yaw);
  PrimitiveSet set;
  set.origin.p = origin;
  set.origin.v = r * Vec3(rng.uniform(0, 1.5), rng.uniform(-0.3, 0.3), 0);
  set.duration = 1.5;
  for (int i = 0; i < k; ++i) {
    KinodynamicState t;
    t.p = origin + r * Vec3(rng.uniform(0.5, 3.5), rng.uniform(-1.2, 1.2), rng.uniform(-0.6, 0.6));
    t.v = r * Vec3(rng.uniform(0, 2), rng.uniform(-0.5, 0.5), rng.uniform(-0.2, 0.2));
    t.a = test::random_vec(rng, 1.0);
    set.terminals.push_back(t);
    set.confidences.push_back(rng.uniform(0.05, 0.95));
  }
  return set;
}

Verdict gradient_checks() {
  struct Row {
    std::string name;
    double worst;
    int checked;
    double limit;
  };
  std::vector<Row> rows;
  auto add = [&](const std::string& name, const test::GradStats& st, double limit) {
    rows.push_back({name, st.worst, st.checked, limit});
  };
  Rng rng(105);

  {
    const PhysicalEnvelope env;
    test::GradStats st;
    for (int i = 0; i < 100; ++i) {
      Vec9 h;
      for (int j = 0; j < 9; ++j) h[j] = rng.uniform(-3, 3);
      const Vec9 g = bound_activation_grad(h, env);
      for (int j = 0; j < 9; ++j) {
        auto f = [&]() { return bound_activation(h, env)[j]; };
        test::probe_gradient(st, f, h[j], g[j], 1e-6);
      }
    }
    add("bound activation", st, 1e-4);
  }

  const CameraModel cam;
  const World world = generate_world(WorldGenConfig{}, 105);
  test::GradStats smooth;
  test::GradStats safety;
  test::GradStats guidance;
  for (int i = 0; i < 20; ++i) {
    Vec3 p;
    do {
      p = Vec3(rng.uniform(5, 95), rng.uniform(5, 95), rng.uniform(1.5, 4));
    } while (world.signed_distance(p) < 0.5);
    const double yaw = rng.uniform(-3.1, 3.1);
    const BodyPose pose = BodyPose::from_yaw(p, yaw);
    const DepthImage img = render_depth(world, pose, cam.intrinsics, cam.extrinsics, 5.0);
    const PrimitiveSet set = random_set(rng, 3, p, yaw);
    const Vec3 goal = p + yaw_rotation(yaw) * Vec3(rng.uniform(3, 10), rng.uniform(-4, 4), 0);
    auto merge = [](test::GradStats& into, const test::GradStats& st) {
      into.worst = std::max(into.worst, st.worst);
      into.checked += st.checked;
      into.skipped += st.skipped;
    };
    merge(smooth, test::check_loss_gradients(smoothness_loss, set, 1e-5));
    merge(safety, test::check_loss_gradients(
                      [&](const PrimitiveSet& s) {
                        return safety_loss(s, img, pose, cam, SafetyParams{}, 20);
                      },
                      set, 1e-5));
    merge(guidance, test::check_loss_gradients(
                        [&](const PrimitiveSet& s) { return guidance_loss(s, goal, GuidanceConfig{}); },
                        set, 1e-5));
  }
  add("smoothness loss", smooth, 1e-4);
  add("safety loss", safety, 1e-4);
  add("guidance loss", guidance, 1e-4);

  {
    nn::Conv2d conv(3, 4, 3, 2, 1);
    conv.init(rng);
    add("conv2d", test::layer_gradcheck(conv, test::random_tensor({3, 9, 11}, rng), rng, 20), 1e-4);
    nn::Linear fc(7, 4);
    fc.init(rng);
    add("linear", test::layer_gradcheck(fc, test::random_tensor({7}, rng), rng, 10), 1e-4);
    nn::ChannelAttention ca(8, 4);
    ca.init(rng);
    add("channel attention", test::layer_gradcheck(ca, test::random_tensor({8, 6, 6}, rng), rng, 30), 1e-4);
    nn::SpatialAttention sa;
    sa.init(rng);
    add("spatial attention", test::layer_gradcheck(sa, test::random_tensor({4, 6, 7}, rng), rng, 30), 1e-4);
    nn::Cbam cbam(8, 4);
    cbam.init(rng);
    add("CBAM", test::layer_gradcheck(cbam, test::random_tensor({8, 5, 6}, rng), rng, 20), 1e-4);
    nn::ResidualBlock res(4, 8, 2, 4);
    res.init(rng);
    add("residual block", test::layer_gradcheck(res, test::random_tensor({4, 8, 10}, rng), rng, 10), 1e-4);
  }

  {
    DatasetConfig dc;
    dc.world_seeds = {105};
    dc.frames_per_world = 1;
    nn::PolicyNet net(nn::PolicyNetConfig{}, 105);
    const GradcheckReport r = gradcheck_policy(net, generate_dataset(dc).front(), nn::TrainingContext{}, 3, 105);
    test::GradStats st;
    st.worst = r.max_rel_error;
    st.checked = static_cast<int>(r.entries.size()) - r.kinks;
    add("full graph (" + std::to_string(r.kinks) + " kinks skipped)", st, 1e-3);
  }

  Verdict o;
  for (const Row& r : rows) {
    const bool ok = r.worst < r.limit && r.checked > 0;
    o.pass = o.pass && ok;
    if (!o.detail.empty()) o.detail += ", ";
    o.detail += r.name + " " + fmt("%.1e", r.worst) + (ok ? "" : " (over " + fmt("%.0e", r.limit) + ")");
  }
  return o;
}

// ---- 6 -----------------------------------------------------------------------------------

Verdict cbam_structure() {
  Rng rng(106);
  int shape_ok = 0;
  int range_bad = 0;
  int quarter_bad = 0;
  int cases = 0;
  for (const auto& shape : {std::vector<int>{8, 4, 4}, std::vector<int>{16, 9, 12}, std::vector<int>{32, 3, 5},
                            std::vector<int>{8, 1, 1}, std::vector<int>{24, 18, 24}}) {
    for (int rep = 0; rep < 4; ++rep) {
      ++cases;
      nn::Cbam block(shape[0], 8);
      const nn::Tensor f = test::random_tensor(shape, rng, 3.0);
      block.zero_init();
      const nn::Tensor quarter = block.forward(f);
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (quarter.shape() != f.shape() || quarter[i] != 0.25 * f[i]) ++quarter_bad;
      }
      block.init(rng);
      const nn::Tensor out = block.forward(f);
      if (out.shape() == f.shape()) ++shape_ok;
      for (const nn::Tensor* map : {&block.channel_map(), &block.spatial_map()}) {
        for (double v : map->values()) {
          if (!(v > 0.0 && v < 1.0)) ++range_bad;
        }
      }
    }
  }
  Verdict o;
  o.pass = shape_ok == cases && range_bad == 0 && quarter_bad == 0;
  o.detail = std::to_string(shape_ok) + "/" + std::to_string(cases) + " shapes preserved, " +
             std::to_string(range_bad) + " attention values outside (0,1), " +
             std::to_string(quarter_bad) + " zero-init outputs != 0.25 x input";
  return o;
}

// ---- 7 -----------------------------------------------------------------------------------

std::optional<nn::PolicyNet> g_trained;

Verdict training_smoke() {
  const AppConfig cfg = parse_app_config("{}");
  DatasetConfig dc = cfg.dataset;
  for (auto& s : dc.world_seeds) s = derive_seed(1, s);
  const Dataset data = generate_dataset(dc);
  auto run = [&]() {
    nn::PolicyNet net(cfg.network, 1);
    auto curve = train_policy(net, data, cfg.training);
    return std::pair{std::move(net), std::move(curve)};
  };
  auto [net, first] = run();
  const auto second = run().second;

  bool finite = true;
  bool identical = first.size() == second.size();
  for (std::size_t i = 0; i < first.size(); ++i) {
    const LossBreakdown& a = first[i];
    finite = finite && std::isfinite(a.total) && std::isfinite(a.smooth) && std::isfinite(a.safety) &&
             std::isfinite(a.guidance);
    if (identical) {
      const LossBreakdown& b = second[i];
      identical = a.total == b.total && a.smooth == b.smooth && a.safety == b.safety &&
                  a.guidance == b.guidance;
    }
  }
  const double l1 = first.front().total;
  const double last = first.back().total;
  const double decrease = (l1 - last) / std::abs(l1);
  g_trained.emplace(std::move(net));

  Verdict o;
  o.pass = data.size() == 64 && first.size() == 200 && finite && identical && decrease >= 0.3;
  o.detail = std::to_string(data.size()) + " frames, " + std::to_string(first.size()) + " steps, loss " +
             fmt("%.4g", l1) + " -> " + fmt("%.4g", last) + " (decrease " + fmt("%.0f", 100 * decrease) +
             "%), " + (finite ? "all finite" : "NON-FINITE") + ", reruns " +
             (identical ? "identical" : "DIFFER");
  return o;
}

// ---- 8, 9 --------------------------------------------------------------------------------

BenchConfig ablation_config() {
  BenchConfig b = parse_app_config("{}").bench;
  b.seed = 1;
  b.trials = 50;
  b.methods = {Method::Sampler, Method::SamplerNoShield};
  b.tiers = {2.0};
  b.record_timing = false;
  return b;
}

std::optional<BenchResult> g_ablation;

const BenchResult& ablation() {
  if (!g_ablation) g_ablation = run_benchmark(ablation_config());
  return *g_ablation;
}

Verdict closed_loop_ablation() {
  const BenchResult& r = ablation();
  const SummaryRow& on = r.summary.at(0);
  const SummaryRow& off = r.summary.at(1);
  Verdict o;
  o.pass = on.method == Method::Sampler && off.method == Method::SamplerNoShield && on.trials == 50 &&
           off.trials == 50 && on.collided == 0 && on.min_dist_all_m >= off.min_dist_all_m;
  auto arm = [](const SummaryRow& s) {
    return "mean min_dist " + fmt("%.3f", s.min_dist_all_m) + " m, " + std::to_string(s.collided) +
           " collided, " + std::to_string(s.reached) + " reached, " + std::to_string(s.timeout) +
           " timed out";
  };
  o.detail = "N=50 at 2.0 m/s; shield on: " + arm(on) + "; shield off: " + arm(off);

  // Informational: the same shield-on arm with only the per-waypoint depth rule.
  BenchConfig point = ablation_config();
  point.methods = {Method::Sampler};
  point.planner.safety.footprint = false;
  const SummaryRow bare = run_benchmark(point).summary.at(0);
  std::printf("       info: depth rule alone: mean min_dist %.3f m, %d/%d collided\n", bare.min_dist_all_m,
              bare.collided, bare.trials);
  return o;
}

Verdict determinism() {
  const BenchResult& a = ablation();
  BenchConfig cfg = ablation_config();
  const BenchResult again = run_benchmark(cfg);
  cfg.execution = Execution::Serial;
  const BenchResult serial = run_benchmark(cfg);

  const std::string trials = trials_csv(a.rows);
  const std::string summary = summary_csv(a.summary);
  const bool rerun = trials_csv(again.rows) == trials && summary_csv(again.summary) == summary;
  const bool modes = trials_csv(serial.rows) == trials && summary_csv(serial.summary) == summary;
  Verdict o;
  o.pass = rerun && modes;
  o.detail = std::to_string(trials.size() + summary.size()) + " CSV bytes; parallel rerun " +
             (rerun ? "identical" : "DIFFERS") + ", serial " + (modes ? "identical" : "DIFFERS");
  return o;
}

// ---- 10 ----------------------------------------------------------------------------------

Verdict checkpoint_round_trip() {
  const auto dir = std::filesystem::temp_directory_path();
  const nn::PolicyNetConfig config;
  DatasetConfig dc;
  dc.world_seeds = {110};
  dc.frames_per_world = 1;
  const nn::TrainingSample sample = generate_dataset(dc).front();
  const nn::Tensor image = nn::image_tensor(sample.image);
  const Vec9 cond = nn::conditioning_vector(sample.state, sample.goal);

  std::vector<std::pair<std::string, nn::PolicyNet*>> nets;
  nn::PolicyNet fresh(config, 110);
  nets.emplace_back("fresh", &fresh);
  if (g_trained) nets.emplace_back("trained", &*g_trained);

  Verdict o;
  for (auto& [name, net] : nets) {
    const std::string a = (dir / ("kio_accept_" + name + "_a.kio")).string();
    const std::string b = (dir / ("kio_accept_" + name + "_b.kio")).string();
    nn::save_checkpoint(*net, a);
    nn::PolicyNet loaded = nn::load_checkpoint(a, config);
    nn::save_checkpoint(loaded, b);
    const std::string bytes = read_file(a);
    const bool same_bytes = bytes == read_file(b);
    const bool same_forward = net->forward(image, cond).values() == loaded.forward(image, cond).values();
    std::filesystem::remove(a);
    std::filesystem::remove(b);
    o.pass = o.pass && same_bytes && same_forward;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += name + ": " + std::to_string(bytes.size()) + " bytes " +
                (same_bytes ? "identical" : "DIFFER") + ", forward " +
                (same_forward ? "bit-equal" : "DIFFERS");
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;  // 0: no runtime bound
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "OBVP exactness", 5, obvp_exactness},
      {2, "jerk quadratic form", 10, jerk_quadratic_form},
      {3, "projection", 0, projection},
      {4, "shield soundness", 0, shield_soundness},
      {5, "gradient checks", 120, gradient_checks},
      {6, "CBAM structure", 0, cbam_structure},
      {7, "training smoke test", 600, training_smoke},
      {8, "closed-loop ablation", 900, closed_loop_ablation},
      {9, "bench determinism", 0, determinism},
      {10, "checkpoint round trip", 0, checkpoint_round_trip},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const Criterion& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.1f s", secs);
    if (c.limit_s > 0) {
      timing += fmt(", limit %.0f s", c.limit_s);
      if (secs >= c.limit_s) {
        o.pass = false;
        timing += " EXCEEDED";
      }
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
