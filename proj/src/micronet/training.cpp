#include "kio/micronet/training.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kio::nn {

Adam::Adam(double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {}

void Adam::step(const ParamList& params) {
  if (m_.empty()) {
    for (const auto& p : params) {
      m_.emplace_back(p.tensor->size(), 0.0);
      v_.emplace_back(p.tensor->size(), 0.0);
    }
  }
  if (m_.size() != params.size()) throw std::invalid_argument("optimizer parameter list changed");
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor& t = *params[i].tensor;
    const auto& g = t.grad();
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t j = 0; j < t.size(); ++j) {
      m[j] = beta1_ * m[j] + (1.0 - beta1_) * g[j];
      v[j] = beta2_ * v[j] + (1.0 - beta2_) * g[j] * g[j];
      const double update = lr_ * (m[j] / bc1) / (std::sqrt(v[j] / bc2) + eps_);
      t[j] = static_cast<float>(t[j] - update);
    }
  }
}

LossBreakdown frame_loss(PolicyNet& net, const TrainingSample& sample, const TrainingContext& ctx,
                         double grad_scale) {
  const Tensor raw = net.forward(image_tensor(sample.image),
                                 conditioning_vector(sample.state, sample.goal));
  const PolicyOutput out = decode_output(raw, net.config().candidates);
  const PrimitiveSet set = candidates_from_output(out, sample.state, ctx.envelope, ctx.duration);

  LossContext lc;
  lc.image = &sample.image;
  lc.pose = BodyPose::from_yaw(sample.state.p, sample.state.yaw);
  lc.camera = ctx.camera;
  lc.safety = ctx.safety;
  lc.waypoints = ctx.waypoints;
  lc.goal = sample.goal;
  lc.guidance = ctx.guidance;
  lc.weights = ctx.weights;
  LossBreakdown loss = total_loss(set, lc);

  if (grad_scale != 0.0) {
    Tensor g = output_gradient(out, sample.state, ctx.envelope, loss.d_terminal, loss.d_confidence);
    for (auto& v : g.values()) v *= grad_scale;
    net.backward(g);
  }
  return loss;
}

LossBreakdown train_step(const std::vector<TrainingSample>& batch, PolicyNet& net, Adam& optimizer,
                         const TrainingContext& ctx) {
  if (batch.empty()) throw std::invalid_argument("training batch is empty");
  net.zero_grad();
  const double scale = 1.0 / static_cast<double>(batch.size());
  LossBreakdown mean;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const LossBreakdown l = frame_loss(net, batch[i], ctx, scale);
    if (!std::isfinite(l.total)) {
      std::ostringstream msg;
      msg << "non-finite loss at batch element " << i << ": total=" << l.total
          << " smooth=" << l.smooth << " safety=" << l.safety << " guidance=" << l.guidance;
      throw std::runtime_error(msg.str());
    }
    mean.total += scale * l.total;
    mean.smooth += scale * l.smooth;
    mean.safety += scale * l.safety;
    mean.guidance += scale * l.guidance;
  }
  optimizer.step(net.parameters());
  return mean;
}

}  // namespace kio::nn
