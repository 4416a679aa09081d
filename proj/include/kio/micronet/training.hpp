#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kio/micronet/policy_net.hpp"
#include "kio/objectives.hpp"

namespace kio::nn {

/// Adaptive-moment optimizer. Updated parameters are rounded to float32.
class Adam {
 public:
  explicit Adam(double learning_rate = 1e-3, double beta1 = 0.9, double beta2 = 0.999,
                double epsilon = 1e-8);

  void step(const ParamList& params);
  double learning_rate() const { return lr_; }
  long steps() const { return t_; }

 private:
  double lr_;
  double beta1_;
  double beta2_;
  double eps_;
  long t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

struct TrainingSample {
  DepthImage image;
  KinodynamicState state;
  Vec3 goal = Vec3::Zero();
};

/// Everything the loss needs besides the network output.
struct TrainingContext {
  CameraModel camera;
  SafetyParams safety;
  GuidanceConfig guidance;
  LossWeights weights;
  PhysicalEnvelope envelope;
  double duration = 1.5;
  int waypoints = 20;
};

/// Loss and gradients of one frame; accumulates parameter gradients scaled by `grad_scale`.
LossBreakdown frame_loss(PolicyNet& net, const TrainingSample& sample, const TrainingContext& ctx,
                         double grad_scale);

/// Forward, bound, build primitives, loss, backward, Adam update. Returns the batch-mean
/// loss before the update. Throws std::runtime_error on a non-finite loss.
LossBreakdown train_step(const std::vector<TrainingSample>& batch, PolicyNet& net, Adam& optimizer,
                         const TrainingContext& ctx);

/// "KIO1" checkpoint: u32 version, u32 tensor count, then per tensor a u32-prefixed name,
/// u32 rank, u32 dims and little-endian float32 values.
void save_checkpoint(PolicyNet& net, const std::string& path);
void load_checkpoint(PolicyNet& net, const std::string& path);
PolicyNet load_checkpoint(const std::string& path, const PolicyNetConfig& config);

inline constexpr std::uint32_t kCheckpointVersion = 1;

}  // namespace kio::nn
