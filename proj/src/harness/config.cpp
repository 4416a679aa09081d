#include <set>
#include <stdexcept>

#include <json.hpp>

#include "kio/harness.hpp"

namespace kio {

namespace {

using json = nlohmann::json;

// Reads keys from one config section and rejects anything it does not know.
class Section {
 public:
  Section(const json& root, const char* name) : name_(name) {
    if (root.contains(name)) {
      node_ = root.at(name);
      if (!node_.is_object()) throw std::invalid_argument(std::string("section '") + name + "' must be an object");
    }
  }
  void done() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.count(key)) {
        throw std::invalid_argument("unknown key '" + key + "' in section '" + name_ + "'");
      }
    }
  }

  template <class T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!node_.contains(key)) return;
    try {
      out = node_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw std::invalid_argument(name_ + "." + key + ": " + e.what());
    }
  }

  void get_vec3(const char* key, Vec3& out) {
    std::vector<double> v{out.x(), out.y(), out.z()};
    get(key, v);
    if (v.size() != 3) throw std::invalid_argument(name_ + "." + key + " must have 3 entries");
    out = Vec3(v[0], v[1], v[2]);
  }

 private:
  std::string name_;
  json node_ = json::object();
  std::set<std::string> seen_;
};

}  // namespace

AppConfig parse_app_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw std::invalid_argument("config must be a JSON object");
  static const std::set<std::string> sections{"world",  "camera",   "planner", "safety",
                                              "losses", "training", "bench"};
  for (const auto& [key, value] : root.items()) {
    if (!sections.count(key)) throw std::invalid_argument("unknown config section '" + key + "'");
  }

  AppConfig c;
  {
    Section s(root, "world");
    s.get_vec3("extent", c.world.extent);
    s.get("formations", c.world.wall_count);
    s.get("thickness_min", c.world.thickness_min);
    s.get("thickness_max", c.world.thickness_max);
    s.get("length_min", c.world.length_min);
    s.get("length_max", c.world.length_max);
    s.get("gap_width_min", c.world.gap_width_min);
    s.get("gap_width_max", c.world.gap_width_max);
    s.get("gaps_min", c.world.gaps_min);
    s.get("gaps_max", c.world.gaps_max);
    s.get("max_attempts", c.world.max_attempts_per_formation);
    s.done();
  }
  {
    Section s(root, "camera");
    int width = 96;
    int height = 72;
    double hfov = 87.0;
    s.get("width", width);
    s.get("height", height);
    s.get("hfov_deg", hfov);
    s.get("max_range", c.max_range);
    c.camera.intrinsics = Intrinsics::from_fov(width, height, hfov);
    s.done();
  }
  SafetyParams safety;
  {
    Section s(root, "safety");
    std::string policy = "conservative";
    s.get("radius", safety.radius);
    s.get("buffer", safety.buffer);
    s.get("out_of_view", policy);
    s.get("footprint", safety.footprint);
    s.get("view_slack", safety.view_slack);
    if (policy == "conservative") {
      safety.out_of_view = OutOfViewPolicy::Conservative;
    } else if (policy == "permissive") {
      safety.out_of_view = OutOfViewPolicy::Permissive;
    } else {
      throw std::invalid_argument("safety.out_of_view must be conservative or permissive");
    }
    safety.validate();
    s.done();
  }
  GuidanceConfig guidance;
  {
    Section s(root, "losses");
    s.get("smooth", c.losses.smooth);
    s.get("safety", c.losses.safety);
    s.get("guidance", c.losses.guidance);
    s.get("progress_weight", guidance.progress_weight);
    s.get("lateral_weight", guidance.lateral_weight);
    s.get("diversity_weight", guidance.diversity_weight);
    s.get("lateral_tolerance", guidance.lateral_tolerance);
    s.done();
  }
  {
    Section s(root, "planner");
    PlannerConfig& p = c.planner;
    s.get("candidates", p.candidates);
    s.get("sampler_candidates", p.sampler_candidates);
    s.get("waypoints", p.waypoints);
    s.get("duration", p.duration);
    s.get("replan_rate", p.replan_rate);
    s.get("shield", p.shield_enabled);
    s.get("p_max", p.envelope.p_max);
    s.get("v_max", p.envelope.v_max);
    s.get("a_max", p.envelope.a_max);
    p.safety = safety;
    p.guidance = guidance;
    p.camera = c.camera;
    s.done();
  }
  int worlds = 4;
  int frames = 16;
  {
    Section s(root, "training");
    s.get("steps", c.training.steps);
    s.get("batch_size", c.training.batch_size);
    s.get("learning_rate", c.training.learning_rate);
    s.get("seed", c.training.seed);
    s.get("worlds", worlds);
    s.get("frames_per_world", frames);
    s.done();
  }
  {
    Section s(root, "bench");
    std::vector<std::string> methods{"sampler", "sampler_no_shield"};
    s.get("methods", methods);
    c.bench.methods.clear();
    for (const auto& m : methods) c.bench.methods.push_back(parse_method(m));
    s.get("tiers", c.bench.tiers);
    s.get("trials", c.bench.trials);
    s.get("seed", c.bench.seed);
    s.get("timeout", c.bench.timeout);
    s.get("min_separation", c.bench.min_separation);
    s.get("start_clearance", c.bench.start_clearance);
    s.get("record_timing", c.bench.record_timing);
    s.get("checkpoint", c.bench.checkpoint);
    s.done();
  }

  c.training.context.camera = c.camera;
  c.training.context.safety = safety;
  c.training.context.guidance = guidance;
  c.training.context.weights = c.losses;
  c.training.context.envelope = c.planner.envelope;
  c.training.context.duration = c.planner.duration;
  c.training.context.waypoints = c.planner.waypoints;

  c.dataset.world = c.world;
  c.dataset.camera = c.camera;
  c.dataset.max_range = c.max_range;
  c.dataset.radius = safety.radius;
  c.dataset.frames_per_world = frames;
  c.dataset.world_seeds.clear();
  for (int i = 0; i < worlds; ++i) c.dataset.world_seeds.push_back(1000 + static_cast<std::uint64_t>(i));

  c.bench.world = c.world;
  c.bench.planner = c.planner;
  c.bench.max_range = c.max_range;
  c.bench.replan_rate = c.planner.replan_rate;

  c.network.image_width = c.camera.intrinsics.width;
  c.network.image_height = c.camera.intrinsics.height;
  c.network.candidates = c.planner.candidates;

  c.world.validate();
  c.planner.validate();
  c.bench.validate();
  return c;
}

AppConfig load_app_config(const std::string& path) { return parse_app_config(read_file(path)); }

}  // namespace kio
