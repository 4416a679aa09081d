#include <algorithm>
#include <stdexcept>
#include <string>

#include "kio/rng.hpp"
#include "kio/world.hpp"

namespace kio {

namespace {

constexpr double kMinSegment = 0.5;

struct Box {
  Vec3 lo;
  Vec3 hi;
};

bool overlaps(const Box& a, const Box& b) {
  return (a.lo.array() < b.hi.array()).all() && (b.lo.array() < a.hi.array()).all();
}

Box to_box(const Wall& w) { return {w.min_corner(), w.max_corner()}; }

std::string infeasible(const std::string& why) { return "infeasible packing: " + why; }

}  // namespace

void WorldGenConfig::validate() const {
  if (wall_count < 0) throw std::invalid_argument("wall_count must be >= 0");
  if (!(gap_width_min > 0.0)) throw std::invalid_argument("gap_width_min must be > 0");
  if (gap_width_max < gap_width_min) throw std::invalid_argument("gap_width_max < gap_width_min");
  if (!(thickness_min > 0.0) || thickness_max < thickness_min) {
    throw std::invalid_argument("bad wall thickness range");
  }
  if (gaps_min < 1 || gaps_max < gaps_min) throw std::invalid_argument("bad gap count range");
  if (!(length_min > 0.0) || length_max < length_min) {
    throw std::invalid_argument("bad wall length range");
  }
  if (!(extent.array() > 0.0).all()) throw std::invalid_argument("extent must be positive");
  if (wall_count == 0) return;
  const double needed = gaps_min * gap_width_min + (gaps_min + 1) * kMinSegment;
  if (length_max < needed) {
    throw std::invalid_argument(infeasible("length_max " + std::to_string(length_max) +
                                           " cannot hold the minimum gaps (needs " +
                                           std::to_string(needed) + ")"));
  }
  if (length_min > std::min(extent.x(), extent.y()) || thickness_max > std::min(extent.x(), extent.y())) {
    throw std::invalid_argument(infeasible("walls do not fit in the horizontal extent"));
  }
}

World generate_world(const WorldGenConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);

  std::vector<Wall> walls;
  std::vector<Formation> formations;
  std::vector<Box> wall_boxes;
  std::vector<Box> keepouts;
  const double height = config.extent.z();

  for (int f = 0; f < config.wall_count; ++f) {
    bool placed = false;
    for (int attempt = 0; attempt < config.max_attempts_per_formation && !placed; ++attempt) {
      const int axis = rng.uniform_int(0, 1);
      const int across = 1 - axis;
      const double length =
          std::min(rng.uniform(config.length_min, config.length_max), config.extent[axis]);
      const double thickness = rng.uniform(config.thickness_min, config.thickness_max);
      const int n_gaps = rng.uniform_int(config.gaps_min, config.gaps_max);
      std::vector<double> widths(n_gaps);
      double width_sum = 0.0;
      for (auto& w : widths) {
        w = rng.uniform(config.gap_width_min, config.gap_width_max);
        width_sum += w;
      }
      const double slack = length - width_sum - (n_gaps + 1) * kMinSegment;
      // Draw the placement even when the attempt is discarded so the stream stays aligned.
      const double along_center = rng.uniform(length / 2.0, config.extent[axis] - length / 2.0);
      const double across_center =
          rng.uniform(thickness / 2.0, config.extent[across] - thickness / 2.0);
      std::vector<double> cuts(n_gaps);
      for (auto& c : cuts) c = rng.uniform();
      if (slack < 0.0) continue;
      std::sort(cuts.begin(), cuts.end());

      // Segment lengths: kMinSegment plus a share of the slack.
      std::vector<double> seg(n_gaps + 1);
      double prev = 0.0;
      for (int i = 0; i < n_gaps; ++i) {
        seg[i] = kMinSegment + slack * (cuts[i] - prev);
        prev = cuts[i];
      }
      seg[n_gaps] = kMinSegment + slack * (1.0 - prev);

      std::vector<Wall> new_walls;
      std::vector<Gap> new_gaps;
      std::vector<Box> new_keepouts;
      double cursor = along_center - length / 2.0;
      for (int i = 0; i <= n_gaps; ++i) {
        Wall w;
        w.center[axis] = cursor + seg[i] / 2.0;
        w.center[across] = across_center;
        w.center.z() = height / 2.0;
        w.half_extents[axis] = seg[i] / 2.0;
        w.half_extents[across] = thickness / 2.0;
        w.half_extents.z() = height / 2.0;
        new_walls.push_back(w);
        cursor += seg[i];
        if (i < n_gaps) {
          Gap g;
          g.center[axis] = cursor + widths[i] / 2.0;
          g.center[across] = across_center;
          g.center.z() = height / 2.0;
          g.width = widths[i];
          new_gaps.push_back(g);
          Box k;
          k.lo[axis] = cursor;
          k.hi[axis] = cursor + widths[i];
          k.lo[across] = across_center - thickness / 2.0 - config.gap_width_min;
          k.hi[across] = across_center + thickness / 2.0 + config.gap_width_min;
          k.lo.z() = 0.0;
          k.hi.z() = height;
          new_keepouts.push_back(k);
          cursor += widths[i];
        }
      }

      bool clash = false;
      for (const auto& w : new_walls) {
        const Box b = to_box(w);
        for (const auto& k : keepouts) clash = clash || overlaps(b, k);
      }
      for (const auto& k : new_keepouts) {
        for (const auto& b : wall_boxes) clash = clash || overlaps(b, k);
      }
      if (clash) continue;

      Formation formation;
      formation.first_wall = walls.size();
      formation.wall_count = new_walls.size();
      formation.axis = axis;
      formation.gaps = std::move(new_gaps);
      for (const auto& w : new_walls) {
        walls.push_back(w);
        wall_boxes.push_back(to_box(w));
      }
      keepouts.insert(keepouts.end(), new_keepouts.begin(), new_keepouts.end());
      formations.push_back(std::move(formation));
      placed = true;
    }
    if (!placed) {
      throw std::runtime_error(infeasible("could not place formation " + std::to_string(f) +
                                          " of " + std::to_string(config.wall_count) + " after " +
                                          std::to_string(config.max_attempts_per_formation) +
                                          " attempts"));
    }
  }
  return World(config.extent, seed, std::move(walls), std::move(formations));
}

}  // namespace kio
