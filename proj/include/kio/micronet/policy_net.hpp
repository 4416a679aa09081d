#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "kio/camera.hpp"
#include "kio/micronet/layers.hpp"
#include "kio/primitives.hpp"
#include "kio/shield.hpp"

namespace kio::nn {

struct PolicyNetConfig {
  int image_width = 96;
  int image_height = 72;
  int candidates = 5;  // K
  int stem_channels = 8;
  std::array<int, 3> block_channels{8, 16, 32};
  int reduction = 8;
  int image_features = 64;
  int state_features = 32;
  int fused_features = 64;

  static constexpr int kStateDim = 9;
  static constexpr int kOutputsPerCandidate = 10;  // h_kin (9) + confidence logit
};

/// Raw head output: unbounded h_kin per candidate and confidence logits.
struct PolicyOutput {
  std::vector<Vec9> h_kin;
  std::vector<double> logits;
  std::vector<double> confidences;  // sigmoid(logits)
};

/// Conditioning vector [v_body, a_body, goal_dir_body] in the yaw-aligned frame.
Vec9 conditioning_vector(const KinodynamicState& state, const Vec3& goal);

/// Depth image → input tensor (1, H, W), normalised by max range.
Tensor image_tensor(const DepthImage& image);

/// ResNet-style trunk with CBAM after every block, fused with a state MLP.
class PolicyNet {
 public:
  explicit PolicyNet(PolicyNetConfig config = {}, std::uint64_t seed = 0);

  const PolicyNetConfig& config() const { return config_; }

  /// Returns K × 10 raw outputs; caches activations for backward().
  Tensor forward(const Tensor& image, const Vec9& conditioning);
  /// Accumulates parameter gradients from dL/d(raw outputs).
  void backward(const Tensor& grad_out);

  PolicyOutput predict(const DepthImage& image, const Vec9& conditioning);

  ParamList parameters();
  void zero_grad();
  void set_execution(Execution e);

  Conv2d stem;
  std::array<ResidualBlock, 3> blocks;
  Linear image_fc;
  Linear state_fc;
  Linear fuse_fc;
  Linear head;

 private:
  PolicyNetConfig config_;
  Relu stem_relu_;
  Relu image_relu_;
  Relu state_relu_;
  Relu fuse_relu_;
  std::vector<int> trunk_shape_;
};

PolicyOutput decode_output(const Tensor& raw, int candidates);

/// Maps raw outputs through the tanh envelope into world-frame terminal states. Position
/// is a displacement from the current position; p, v, a are expressed in the yaw frame.
PrimitiveSet candidates_from_output(const PolicyOutput& out, const KinodynamicState& state,
                                    const PhysicalEnvelope& envelope, double duration);

/// Chain rule from loss gradients (w.r.t. world terminals and confidences) to raw outputs.
Tensor output_gradient(const PolicyOutput& out, const KinodynamicState& state,
                       const PhysicalEnvelope& envelope, const std::vector<Vec9>& d_terminal,
                       const std::vector<double>& d_confidence);

}  // namespace kio::nn
