#include "kio/micronet/policy_net.hpp"

#include <cmath>
#include <stdexcept>

namespace kio::nn {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Vec9 conditioning_vector(const KinodynamicState& state, const Vec3& goal) {
  const Mat3 r_t = yaw_rotation(state.yaw).transpose();
  Vec3 dir = goal - state.p;
  const double n = dir.norm();
  dir = n > 0.0 ? Vec3(dir / n) : Vec3::Zero();
  Vec9 s;
  s << r_t * state.v, r_t * state.a, r_t * dir;
  return s;
}

Tensor image_tensor(const DepthImage& image) {
  Tensor t({1, image.height(), image.width()});
  const double scale = 1.0 / image.max_range();
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = image.values()[i] * scale;
  return t;
}

PolicyNet::PolicyNet(PolicyNetConfig config, std::uint64_t seed) : config_(config) {
  stem = Conv2d(1, config.stem_channels, 3, 2, 1);
  int c_in = config.stem_channels;
  int h = conv_output_size(config.image_height, 3, 2, 1);
  int w = conv_output_size(config.image_width, 3, 2, 1);
  for (int b = 0; b < 3; ++b) {
    blocks[b] = ResidualBlock(c_in, config.block_channels[b], 2, config.reduction);
    c_in = config.block_channels[b];
    h = conv_output_size(h, 3, 2, 1);
    w = conv_output_size(w, 3, 2, 1);
  }
  trunk_shape_ = {c_in, h, w};
  image_fc = Linear(c_in * h * w, config.image_features);
  state_fc = Linear(PolicyNetConfig::kStateDim, config.state_features);
  fuse_fc = Linear(config.image_features + config.state_features, config.fused_features);
  head = Linear(config.fused_features, config.candidates * PolicyNetConfig::kOutputsPerCandidate);

  Rng rng(seed);
  stem.init(rng);
  for (auto& b : blocks) b.init(rng);
  image_fc.init(rng);
  state_fc.init(rng);
  fuse_fc.init(rng);
  head.init(rng, 0.1);
}

Tensor PolicyNet::forward(const Tensor& image, const Vec9& conditioning) {
  require_shape(image, {1, config_.image_height, config_.image_width}, "policy input");
  Tensor x = stem_relu_.forward(stem.forward(image));
  for (auto& b : blocks) x = b.forward(x);
  const Tensor img = image_relu_.forward(image_fc.forward(x));

  Tensor cond({PolicyNetConfig::kStateDim});
  for (int i = 0; i < PolicyNetConfig::kStateDim; ++i) cond[i] = conditioning[i];
  const Tensor st = state_relu_.forward(state_fc.forward(cond));

  Tensor fused({config_.image_features + config_.state_features});
  std::copy(img.values().begin(), img.values().end(), fused.values().begin());
  std::copy(st.values().begin(), st.values().end(),
            fused.values().begin() + config_.image_features);
  return head.forward(fuse_relu_.forward(fuse_fc.forward(fused)));
}

void PolicyNet::backward(const Tensor& grad_out) {
  const Tensor g_fused = fuse_fc.backward(fuse_relu_.backward(head.backward(grad_out)));
  Tensor g_img({config_.image_features});
  Tensor g_st({config_.state_features});
  std::copy(g_fused.values().begin(), g_fused.values().begin() + config_.image_features,
            g_img.values().begin());
  std::copy(g_fused.values().begin() + config_.image_features, g_fused.values().end(),
            g_st.values().begin());
  state_fc.backward(state_relu_.backward(g_st));

  Tensor g = image_fc.backward(image_relu_.backward(g_img));
  Tensor g_trunk(trunk_shape_);
  g_trunk.values() = std::move(g.values());
  for (int b = 2; b >= 0; --b) g_trunk = blocks[b].backward(g_trunk);
  stem.backward(stem_relu_.backward(g_trunk));
}

PolicyOutput PolicyNet::predict(const DepthImage& image, const Vec9& conditioning) {
  if (image.width() != config_.image_width || image.height() != config_.image_height) {
    throw std::invalid_argument("policy resolution mismatch: image is " +
                                std::to_string(image.width()) + "x" +
                                std::to_string(image.height()) + ", network expects " +
                                std::to_string(config_.image_width) + "x" +
                                std::to_string(config_.image_height));
  }
  return decode_output(forward(image_tensor(image), conditioning), config_.candidates);
}

ParamList PolicyNet::parameters() {
  ParamList out;
  stem.collect("stem", out);
  for (int b = 0; b < 3; ++b) blocks[b].collect("block" + std::to_string(b), out);
  image_fc.collect("image_fc", out);
  state_fc.collect("state_fc", out);
  fuse_fc.collect("fuse_fc", out);
  head.collect("head", out);
  return out;
}

void PolicyNet::zero_grad() {
  for (auto& p : parameters()) p.tensor->zero_grad();
}

void PolicyNet::set_execution(Execution e) {
  stem.execution = e;
  for (auto& b : blocks) b.set_execution(e);
}

PolicyOutput decode_output(const Tensor& raw, int candidates) {
  if (static_cast<int>(raw.size()) != candidates * PolicyNetConfig::kOutputsPerCandidate) {
    throw std::invalid_argument("policy head size mismatch");
  }
  PolicyOutput out;
  for (int k = 0; k < candidates; ++k) {
    const std::size_t base = static_cast<std::size_t>(k) * PolicyNetConfig::kOutputsPerCandidate;
    Vec9 h;
    for (int i = 0; i < 9; ++i) h[i] = raw[base + i];
    out.h_kin.push_back(h);
    out.logits.push_back(raw[base + 9]);
    out.confidences.push_back(sigmoid(raw[base + 9]));
  }
  return out;
}

PrimitiveSet candidates_from_output(const PolicyOutput& out, const KinodynamicState& state,
                                    const PhysicalEnvelope& envelope, double duration) {
  const Mat3 r = yaw_rotation(state.yaw);
  PrimitiveSet set;
  set.origin = state;
  set.duration = duration;
  for (std::size_t k = 0; k < out.h_kin.size(); ++k) {
    const Vec9 x = bound_activation(out.h_kin[k], envelope);
    KinodynamicState t;
    t.p = state.p + r * x.segment<3>(0);
    t.v = r * x.segment<3>(3);
    t.a = r * x.segment<3>(6);
    t.yaw = state.yaw;
    set.terminals.push_back(t);
    set.confidences.push_back(out.confidences[k]);
  }
  return set;
}

Tensor output_gradient(const PolicyOutput& out, const KinodynamicState& state,
                       const PhysicalEnvelope& envelope, const std::vector<Vec9>& d_terminal,
                       const std::vector<double>& d_confidence) {
  const Mat3 r_t = yaw_rotation(state.yaw).transpose();
  const int k_count = static_cast<int>(out.h_kin.size());
  Tensor g({k_count * PolicyNetConfig::kOutputsPerCandidate});
  for (int k = 0; k < k_count; ++k) {
    Vec9 g_local;
    g_local << r_t * d_terminal[k].segment<3>(0), r_t * d_terminal[k].segment<3>(3),
        r_t * d_terminal[k].segment<3>(6);
    const Vec9 g_h = g_local.cwiseProduct(bound_activation_grad(out.h_kin[k], envelope));
    const std::size_t base = static_cast<std::size_t>(k) * PolicyNetConfig::kOutputsPerCandidate;
    for (int i = 0; i < 9; ++i) g[base + i] = g_h[i];
    const double c = out.confidences[k];
    g[base + 9] = d_confidence[k] * c * (1.0 - c);
  }
  return g;
}

}  // namespace kio::nn
