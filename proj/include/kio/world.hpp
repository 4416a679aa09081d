#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kio/types.hpp"

namespace kio {

/// Axis-aligned box obstacle.
struct Wall {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Ones();

  Vec3 min_corner() const { return center - half_extents; }
  Vec3 max_corner() const { return center + half_extents; }
};

/// Door-like vertical opening in a formation, recorded for verification.
struct Gap {
  Vec3 center = Vec3::Zero();
  double width = 0.0;
};

/// One continuous wall line. Its boxes are walls[first_wall, first_wall + wall_count).
struct Formation {
  std::size_t first_wall = 0;
  std::size_t wall_count = 0;
  int axis = 0;  // 0: runs along x, 1: runs along y
  std::vector<Gap> gaps;
};

struct WorldGenConfig {
  Vec3 extent{100.0, 100.0, 16.0};
  int wall_count = 300;  // number of formations
  double thickness_min = 0.2;
  double thickness_max = 0.5;
  double length_min = 4.0;
  double length_max = 12.0;
  // Default 2·(r + ε) + 0.2 with r = 0.3, ε = 0.2.
  double gap_width_min = 1.2;
  double gap_width_max = 2.0;
  int gaps_min = 1;
  int gaps_max = 2;
  int max_attempts_per_formation = 200;

  void validate() const;
};

/// Immutable set of axis-aligned walls inside [0, extent].
class World {
 public:
  World() = default;
  World(Vec3 extent, std::uint64_t seed, std::vector<Wall> walls,
        std::vector<Formation> formations = {});

  const Vec3& extent() const { return extent_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Wall>& walls() const { return walls_; }
  // Empty for worlds loaded from file.
  const std::vector<Formation>& formations() const { return formations_; }

  bool contains(const Vec3& p) const;

  /// Distance to the nearest wall surface; negative inside a wall.
  /// Returns `empty_sentinel` when the world has no walls.
  double signed_distance(const Vec3& p, double empty_sentinel = kEmptySentinel) const;

  /// Smallest t in (0, t_max] at which origin + t·dir enters a wall.
  std::optional<double> ray_hit(const Vec3& origin, const Vec3& dir, double t_max) const;

  /// Indices of walls whose box lies within `radius` of `p`.
  std::vector<std::size_t> walls_near(const Vec3& p, double radius) const;

  static constexpr double kEmptySentinel = 5.0;

 private:
  Vec3 extent_{100.0, 100.0, 16.0};
  std::uint64_t seed_ = 0;
  std::vector<Wall> walls_;
  std::vector<Formation> formations_;
};

double box_signed_distance(const Wall& wall, const Vec3& p);

/// Slab test. Returns the entry parameter in (0, t_max], if any.
std::optional<double> box_ray_hit(const Wall& wall, const Vec3& origin, const Vec3& dir,
                                  double t_max);

World generate_world(const WorldGenConfig& config, std::uint64_t seed);

std::string world_to_json(const World& world);
World world_from_json(const std::string& text);
void save_world(const World& world, const std::string& path);
World load_world(const std::string& path);

}  // namespace kio
