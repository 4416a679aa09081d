#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "kio/world.hpp"

namespace kio {

namespace {

using ojson = nlohmann::ordered_json;

ojson vec_json(const Vec3& v) { return ojson::array({v.x(), v.y(), v.z()}); }

Vec3 json_vec(const ojson& j) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error("expected a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

std::string world_to_json(const World& world) {
  ojson j;
  j["seed"] = world.seed();
  j["extent"] = vec_json(world.extent());
  ojson walls = ojson::array();
  for (const auto& w : world.walls()) {
    ojson wj;
    wj["center"] = vec_json(w.center);
    wj["half_extents"] = vec_json(w.half_extents);
    walls.push_back(std::move(wj));
  }
  j["walls"] = std::move(walls);
  return j.dump(1) + "\n";
}

World world_from_json(const std::string& text) {
  const ojson j = ojson::parse(text);
  std::vector<Wall> walls;
  for (const auto& wj : j.at("walls")) {
    walls.push_back({json_vec(wj.at("center")), json_vec(wj.at("half_extents"))});
  }
  return World(json_vec(j.at("extent")), j.at("seed").get<std::uint64_t>(), std::move(walls));
}

void save_world(const World& world, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write world file " + path);
  out << world_to_json(world);
}

World load_world(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read world file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return world_from_json(ss.str());
}

}  // namespace kio
