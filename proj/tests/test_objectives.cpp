#include <doctest.h>

#include <cmath>
#include <functional>

#include "kio/objectives.hpp"
#include "kio/render.hpp"
#include "oracles.hpp"

using namespace kio;

namespace {

PrimitiveSet random_set(Rng& rng, int k, const Vec3& origin = Vec3::Zero()) {
  PrimitiveSet set;
  set.origin.p = origin;
  set.origin.v = Vec3(rng.uniform(0, 1.5), rng.uniform(-0.3, 0.3), 0);
  set.duration = 1.5;
  for (int i = 0; i < k; ++i) {
    KinodynamicState t;
    t.p = origin + Vec3(rng.uniform(1.0, 3.5), rng.uniform(-1.2, 1.2), rng.uniform(-0.6, 0.6));
    t.v = Vec3(rng.uniform(0, 2), rng.uniform(-0.5, 0.5), rng.uniform(-0.2, 0.2));
    t.a = test::random_vec(rng, 1.0);
    set.terminals.push_back(t);
    set.confidences.push_back(rng.uniform(0.1, 0.9));
  }
  return set;
}

const CameraModel kCam;

}  // namespace

TEST_SUITE("objectives") {

TEST_CASE("smoothness loss") {
  PrimitiveSet rest;
  rest.duration = 1.5;
  rest.terminals.assign(3, KinodynamicState{});
  rest.confidences = {0.2, 0.5, 0.9};
  CHECK(smoothness_loss(rest).value == 0.0);

  PrimitiveSet unit;
  unit.duration = 1.0;
  KinodynamicState t;
  t.p = Vec3(1, 0, 0);
  unit.terminals = {t};
  unit.confidences = {1.0};
  CHECK(std::abs(smoothness_loss(unit).value - 720.0) < 1e-9);

  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const test::GradStats st = test::check_loss_gradients(smoothness_loss, random_set(rng, 4), 1e-5);
    CHECK(st.worst < 1e-5);
    CHECK(st.skipped == 0);
  }
}

TEST_CASE("softplus") {
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(softplus(-4.5) == doctest::Approx(std::log1p(std::exp(-4.5))).epsilon(1e-15));
  CHECK(softplus(800.0) == 800.0);
  CHECK(softplus(-800.0) >= 0.0);
  CHECK(sigmoid(0.0) == 0.5);
}

TEST_CASE("safety loss examples") {
  const DepthImage empty = render_depth(World(), BodyPose{}, kCam.intrinsics, kCam.extrinsics, 5.0);
  PrimitiveSet still;
  still.duration = 1.5;
  still.terminals = {KinodynamicState{}};
  still.confidences = {1.0};
  const LossTerm l = safety_loss(still, empty, BodyPose{}, kCam, SafetyParams{}, 20);
  CHECK(l.value == doctest::Approx(20 * softplus(-4.5)).epsilon(1e-12));
  CHECK(softplus(-4.5) == doctest::Approx(0.011).epsilon(0.01));
}

TEST_CASE("safety loss gradients away from kinks") {
  const World world = test::frontal_wall(3.0);
  const BodyPose pose;
  const DepthImage img = render_depth(world, pose, kCam.intrinsics, kCam.extrinsics, 5.0);
  Rng rng(2);
  int checked = 0;
  for (int i = 0; i < 10; ++i) {
    const PrimitiveSet set = random_set(rng, 3);
    const test::GradStats st = test::check_loss_gradients(
        [&](const PrimitiveSet& s) { return safety_loss(s, img, pose, kCam, SafetyParams{}, 20); }, set,
        1e-5);
    CHECK(st.worst < 1e-4);
    checked += st.checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("safety loss properties") {
  const BodyPose pose;
  Rng rng(3);
  const PrimitiveSet set = random_set(rng, 4);
  double previous = 1e300;
  for (double d : {1.0, 2.0, 3.0, 4.0, 4.9}) {
    const DepthImage img = render_depth(test::frontal_wall(d), pose, kCam.intrinsics, kCam.extrinsics, 5.0);
    const double value = safety_loss(set, img, pose, kCam, SafetyParams{}, 20).value;
    CHECK(value >= 0.0);
    CHECK(value < previous);
    previous = value;
  }
  // Raising the confidence of a candidate that runs into the wall raises the loss.
  const DepthImage img = render_depth(test::frontal_wall(1.5), pose, kCam.intrinsics, kCam.extrinsics, 5.0);
  PrimitiveSet more = set;
  more.confidences[0] += 0.3;
  CHECK(safety_loss(more, img, pose, kCam, SafetyParams{}, 20).value >
        safety_loss(set, img, pose, kCam, SafetyParams{}, 20).value);
}

TEST_CASE("guidance loss examples") {
  GuidanceConfig progress_only;
  progress_only.progress_weight = 1.0;
  progress_only.lateral_weight = 0.0;
  progress_only.diversity_weight = 0.0;
  PrimitiveSet set;
  set.duration = 1.5;
  KinodynamicState t;
  t.p = Vec3(1, 0, 0);
  set.terminals = {t};
  set.confidences = {0.7};
  const Vec3 goal(10, 0, 0);
  CHECK(guidance_loss(set, goal, progress_only).value == doctest::Approx(-1.0).epsilon(1e-12));

  GuidanceConfig lateral_only;
  lateral_only.progress_weight = 0.0;
  lateral_only.diversity_weight = 0.0;
  lateral_only.lateral_weight = 0.5;
  lateral_only.lateral_tolerance = 2.0;
  set.terminals[0].p = Vec3(0, 4.0, 0);
  CHECK(guidance_loss(set, goal, lateral_only).value == doctest::Approx(0.5 * 4.0).epsilon(1e-12));

  CHECK_THROWS_AS(guidance_loss(set, Vec3::Zero(), GuidanceConfig{}), std::invalid_argument);
}

TEST_CASE("guidance loss gradients") {
  Rng rng(4);
  GuidanceConfig cfg;
  cfg.lateral_tolerance = 0.6;  // make the hinge active for some candidates
  for (int i = 0; i < 10; ++i) {
    const PrimitiveSet set = random_set(rng, 5);
    const Vec3 goal(rng.uniform(5, 10), rng.uniform(-4, 4), rng.uniform(-1, 1));
    const test::GradStats st =
        test::check_loss_gradients([&](const PrimitiveSet& s) { return guidance_loss(s, goal, cfg); }, set, 1e-6);
    CHECK(st.worst < 1e-5);
  }
}

TEST_CASE("total loss decomposition") {
  Rng rng(5);
  const BodyPose pose;
  const DepthImage img = render_depth(test::frontal_wall(2.5), pose, kCam.intrinsics, kCam.extrinsics, 5.0);
  const PrimitiveSet set = random_set(rng, 5);
  LossContext ctx;
  ctx.image = &img;
  ctx.goal = Vec3(8, 1, 0);

  ctx.weights = {1.0, 0.0, 0.0};
  LossBreakdown b = total_loss(set, ctx);
  CHECK(b.total == b.smooth);

  ctx.weights = {0.0, 0.0, 0.0};
  b = total_loss(set, ctx);
  CHECK(b.total == 0.0);
  for (const auto& g : b.d_terminal) CHECK(g.isZero(0.0));
  for (double g : b.d_confidence) CHECK(g == 0.0);

  for (int i = 0; i < 20; ++i) {
    ctx.weights = {rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2)};
    b = total_loss(set, ctx);
    const double manual = ctx.weights.smooth * b.smooth + ctx.weights.safety * b.safety +
                          ctx.weights.guidance * b.guidance;
    CHECK(std::abs(b.total - manual) <= 1e-12 * std::max(1.0, std::abs(manual)));
    const LossTerm s = smoothness_loss(set);
    const LossTerm c = safety_loss(set, img, pose, kCam, ctx.safety, ctx.waypoints);
    const LossTerm g = guidance_loss(set, ctx.goal, ctx.guidance);
    for (std::size_t k = 0; k < set.size(); ++k) {
      const Vec9 expect = ctx.weights.smooth * s.d_terminal[k] + ctx.weights.safety * c.d_terminal[k] +
                          ctx.weights.guidance * g.d_terminal[k];
      CHECK((b.d_terminal[k] - expect).norm() <= 1e-12 * std::max(1.0, expect.norm()));
    }
  }
}

}  // TEST_SUITE
