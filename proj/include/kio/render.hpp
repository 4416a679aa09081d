#pragma once

#include "kio/camera.hpp"
#include "kio/execution.hpp"
#include "kio/world.hpp"

namespace kio {

/// Ray-cast z-depth image of `world` seen from `pose`. Pixels without a hit within
/// max_range hold max_range. Serial and parallel execution give bit-identical images.
DepthImage render_depth(const World& world, const BodyPose& pose, const Intrinsics& intr,
                        const CameraExtrinsics& extr, double max_range,
                        Execution execution = Execution::Parallel);

}  // namespace kio
