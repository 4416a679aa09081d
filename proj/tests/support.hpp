#pragma once

#include <cmath>
#include <functional>

#include "kio/primitives.hpp"
#include "kio/rng.hpp"
#include "kio/world.hpp"

namespace kio::test {

// Composite Simpson rule; `panels` is rounded up to an even count.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels % 2) ++panels;
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double rel_err(double a, double b, double floor = 1e-8) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

inline Vec3 random_vec(Rng& rng, double scale) {
  return Vec3(rng.uniform(-scale, scale), rng.uniform(-scale, scale), rng.uniform(-scale, scale));
}

inline KinodynamicState random_state(Rng& rng) {
  KinodynamicState s;
  s.p = random_vec(rng, 5.0);
  s.v = random_vec(rng, 3.0);
  s.a = random_vec(rng, 4.0);
  return s;
}

// Slab spanning y, z at x ∈ [x0, x0 + thickness]; a camera at the origin facing +x sees it at depth x0.
inline World frontal_wall(double x0, double thickness = 0.2) {
  Wall w;
  w.center = Vec3(x0 + thickness / 2.0, 0.0, 0.0);
  w.half_extents = Vec3(thickness / 2.0, 50.0, 50.0);
  return World(Vec3(100.0, 100.0, 16.0), 0, {w});
}

}  // namespace kio::test
