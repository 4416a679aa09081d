#include "kio/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace kio {

World::World(Vec3 extent, std::uint64_t seed, std::vector<Wall> walls,
             std::vector<Formation> formations)
    : extent_(std::move(extent)),
      seed_(seed),
      walls_(std::move(walls)),
      formations_(std::move(formations)) {
  for (const auto& w : walls_) {
    if (!(w.half_extents.array() > 0.0).all()) {
      throw std::invalid_argument("wall half extents must be strictly positive");
    }
  }
}

bool World::contains(const Vec3& p) const {
  return (p.array() >= 0.0).all() && (p.array() <= extent_.array()).all();
}

double box_signed_distance(const Wall& wall, const Vec3& p) {
  const Vec3 q = (p - wall.center).cwiseAbs() - wall.half_extents;
  const double outside = q.cwiseMax(0.0).norm();
  const double inside = std::min(q.maxCoeff(), 0.0);
  return outside + inside;
}

std::optional<double> box_ray_hit(const Wall& wall, const Vec3& origin, const Vec3& dir,
                                  double t_max) {
  const Vec3 lo = wall.min_corner();
  const Vec3 hi = wall.max_corner();
  double t_enter = -std::numeric_limits<double>::infinity();
  double t_exit = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (dir[i] == 0.0) {
      if (origin[i] < lo[i] || origin[i] > hi[i]) return std::nullopt;
      continue;
    }
    const double inv = 1.0 / dir[i];
    double t0 = (lo[i] - origin[i]) * inv;
    double t1 = (hi[i] - origin[i]) * inv;
    if (t0 > t1) std::swap(t0, t1);
    t_enter = std::max(t_enter, t0);
    t_exit = std::min(t_exit, t1);
    if (t_enter > t_exit) return std::nullopt;
  }
  // An origin inside the box has t_enter <= 0: the ray never enters.
  if (t_enter <= 0.0 || t_enter > t_max) return std::nullopt;
  return t_enter;
}

double World::signed_distance(const Vec3& p, double empty_sentinel) const {
  if (walls_.empty()) return empty_sentinel;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : walls_) best = std::min(best, box_signed_distance(w, p));
  return best;
}

std::optional<double> World::ray_hit(const Vec3& origin, const Vec3& dir, double t_max) const {
  std::optional<double> best;
  for (const auto& w : walls_) {
    const auto t = box_ray_hit(w, origin, dir, best ? *best : t_max);
    if (t && (!best || *t < *best)) best = t;
  }
  return best;
}

std::vector<std::size_t> World::walls_near(const Vec3& p, double radius) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < walls_.size(); ++i) {
    if (box_signed_distance(walls_[i], p) <= radius) out.push_back(i);
  }
  return out;
}

}  // namespace kio
