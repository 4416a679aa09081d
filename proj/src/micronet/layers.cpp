#include "kio/micronet/layers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kio::nn {

namespace {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Parameters are kept float32-representable so checkpoints round-trip bit-exactly.
void fill_uniform(Tensor& t, Rng& rng, double bound) {
  for (auto& v : t.values()) v = static_cast<float>(rng.uniform(-bound, bound));
}

void add_into(std::vector<double>& dst, const std::vector<double>& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

}  // namespace

// ---- Conv2d -----------------------------------------------------------------

Conv2d::Conv2d(int in_channels, int out_channels, int kernel, int stride, int pad)
    : weight({out_channels, in_channels, kernel, kernel}),
      bias({out_channels}),
      stride_(stride),
      pad_(pad) {}

void Conv2d::init(Rng& rng, double gain) {
  const double fan_in = static_cast<double>(weight.dim(1)) * weight.dim(2) * weight.dim(3);
  fill_uniform(weight, rng, gain * std::sqrt(6.0 / fan_in));
  std::fill(bias.values().begin(), bias.values().end(), 0.0);
}

Tensor Conv2d::forward(const Tensor& x) {
  input_ = x;
  Tensor y;
  conv2d_forward(x, weight, bias, stride_, pad_, y, execution);
  return y;
}

Tensor Conv2d::backward(const Tensor& grad_out) {
  Tensor gx(input_.shape());
  conv2d_backward(input_, weight, grad_out, stride_, pad_, gx.values(), weight.grad(),
                  bias.grad(), execution);
  return gx;
}

void Conv2d::collect(const std::string& prefix, ParamList& out) {
  out.push_back({prefix + ".weight", &weight});
  out.push_back({prefix + ".bias", &bias});
}

// ---- Linear -----------------------------------------------------------------

Linear::Linear(int in_features, int out_features)
    : weight({out_features, in_features}), bias({out_features}) {}

void Linear::init(Rng& rng, double gain) {
  fill_uniform(weight, rng, gain * std::sqrt(6.0 / weight.dim(1)));
  std::fill(bias.values().begin(), bias.values().end(), 0.0);
}

Tensor Linear::forward(const Tensor& x) {
  const int n_out = weight.dim(0);
  const int n_in = weight.dim(1);
  if (static_cast<int>(x.size()) != n_in) {
    throw std::invalid_argument("linear: expected " + std::to_string(n_in) + " inputs, got " +
                                std::to_string(x.size()));
  }
  input_ = x;
  Tensor y({n_out});
  for (int o = 0; o < n_out; ++o) {
    double acc = bias[o];
    const double* row = weight.data() + static_cast<std::size_t>(o) * n_in;
    for (int i = 0; i < n_in; ++i) acc += row[i] * x[i];
    y[o] = acc;
  }
  return y;
}

Tensor Linear::backward(const Tensor& grad_out) {
  const int n_out = weight.dim(0);
  const int n_in = weight.dim(1);
  Tensor gx(input_.shape());
  auto& gw = weight.grad();
  auto& gb = bias.grad();
  for (int o = 0; o < n_out; ++o) {
    const double g = grad_out[o];
    gb[o] += g;
    const double* row = weight.data() + static_cast<std::size_t>(o) * n_in;
    double* grow = gw.data() + static_cast<std::size_t>(o) * n_in;
    for (int i = 0; i < n_in; ++i) {
      grow[i] += g * input_[i];
      gx[i] += g * row[i];
    }
  }
  return gx;
}

void Linear::collect(const std::string& prefix, ParamList& out) {
  out.push_back({prefix + ".weight", &weight});
  out.push_back({prefix + ".bias", &bias});
}

// ---- Relu -------------------------------------------------------------------

Tensor Relu::forward(const Tensor& x) {
  Tensor y = x;
  active_.assign(x.size(), false);
  for (std::size_t i = 0; i < y.size(); ++i) {
    active_[i] = y[i] > 0.0;
    if (!active_[i]) y[i] = 0.0;
  }
  return y;
}

Tensor Relu::backward(const Tensor& grad_out) const {
  Tensor g = grad_out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!active_[i]) g[i] = 0.0;
  }
  return g;
}

// ---- ChannelAttention -------------------------------------------------------

ChannelAttention::ChannelAttention(int channels, int reduction) {
  if (reduction <= 0 || channels % reduction != 0) {
    throw std::invalid_argument("channel attention: reduction " + std::to_string(reduction) +
                                " must divide " + std::to_string(channels) + " channels");
  }
  const int hidden = channels / reduction;
  w0 = Tensor({hidden, channels});
  w1 = Tensor({channels, hidden});
}

void ChannelAttention::init(Rng& rng) {
  fill_uniform(w0, rng, std::sqrt(6.0 / w0.dim(1)));
  fill_uniform(w1, rng, std::sqrt(6.0 / w1.dim(1)));
}

void ChannelAttention::branch_forward(Branch& b) const {
  const int hidden = w0.dim(0);
  const int c = w0.dim(1);
  b.pre.assign(hidden, 0.0);
  b.hidden.assign(hidden, 0.0);
  for (int j = 0; j < hidden; ++j) {
    double acc = 0.0;
    for (int i = 0; i < c; ++i) acc += w0[j * c + i] * b.pooled[i];
    b.pre[j] = acc;
    b.hidden[j] = acc > 0.0 ? acc : 0.0;
  }
}

Tensor ChannelAttention::forward(const Tensor& f) {
  const int c = w0.dim(1);
  const int hidden = w0.dim(0);
  if (f.rank() != 3 || f.dim(0) != c) {
    throw std::invalid_argument("channel attention: expected " + std::to_string(c) +
                                " channels, got " + f.shape_string());
  }
  f_shape_ = f.shape();
  const int hw = f.dim(1) * f.dim(2);
  avg_.pooled.assign(c, 0.0);
  max_.pooled.assign(c, 0.0);
  argmax_.assign(c, 0);
  for (int ch = 0; ch < c; ++ch) {
    const double* p = f.data() + static_cast<std::size_t>(ch) * hw;
    double sum = 0.0;
    int best = 0;
    for (int i = 0; i < hw; ++i) {
      sum += p[i];
      if (p[i] > p[best]) best = i;
    }
    avg_.pooled[ch] = sum / hw;
    max_.pooled[ch] = p[best];
    argmax_[ch] = best;
  }
  branch_forward(avg_);
  branch_forward(max_);

  Tensor mc({c, 1, 1});
  mc_.assign(c, 0.0);
  for (int ch = 0; ch < c; ++ch) {
    double s = 0.0;
    for (int j = 0; j < hidden; ++j) s += w1[ch * hidden + j] * (avg_.hidden[j] + max_.hidden[j]);
    mc_[ch] = sigmoid(s);
    mc[ch] = mc_[ch];
  }
  return mc;
}

void ChannelAttention::branch_backward(const Branch& b, const std::vector<double>& g_s,
                                       std::vector<double>& g_pooled) {
  const int hidden = w0.dim(0);
  const int c = w0.dim(1);
  auto& gw0 = w0.grad();
  auto& gw1 = w1.grad();
  g_pooled.assign(c, 0.0);
  for (int j = 0; j < hidden; ++j) {
    double g_hidden = 0.0;
    for (int ch = 0; ch < c; ++ch) {
      gw1[ch * hidden + j] += g_s[ch] * b.hidden[j];
      g_hidden += w1[ch * hidden + j] * g_s[ch];
    }
    if (b.pre[j] <= 0.0) continue;
    for (int i = 0; i < c; ++i) {
      gw0[j * c + i] += g_hidden * b.pooled[i];
      g_pooled[i] += w0[j * c + i] * g_hidden;
    }
  }
}

Tensor ChannelAttention::backward(const Tensor& grad_mc) {
  const int c = w0.dim(1);
  std::vector<double> g_s(c);
  for (int ch = 0; ch < c; ++ch) g_s[ch] = grad_mc[ch] * mc_[ch] * (1.0 - mc_[ch]);
  std::vector<double> g_avg;
  std::vector<double> g_max;
  branch_backward(avg_, g_s, g_avg);
  branch_backward(max_, g_s, g_max);

  Tensor gf(f_shape_);
  const int hw = f_shape_[1] * f_shape_[2];
  for (int ch = 0; ch < c; ++ch) {
    double* p = gf.data() + static_cast<std::size_t>(ch) * hw;
    const double share = g_avg[ch] / hw;
    for (int i = 0; i < hw; ++i) p[i] = share;
    p[argmax_[ch]] += g_max[ch];
  }
  return gf;
}

void ChannelAttention::collect(const std::string& prefix, ParamList& out) {
  out.push_back({prefix + ".w0", &w0});
  out.push_back({prefix + ".w1", &w1});
}

// ---- SpatialAttention -------------------------------------------------------

SpatialAttention::SpatialAttention() : conv(2, 1, 7, 1, 3) {}

void SpatialAttention::init(Rng& rng) { conv.init(rng); }

Tensor SpatialAttention::forward(const Tensor& f) {
  if (f.rank() != 3) throw std::invalid_argument("spatial attention: expected (C, H, W) input");
  f_shape_ = f.shape();
  const int c = f.dim(0);
  const int h = f.dim(1);
  const int w = f.dim(2);
  Tensor pooled({2, h, w});
  argmax_.assign(static_cast<std::size_t>(h) * w, 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      int best = 0;
      for (int ch = 0; ch < c; ++ch) {
        const double v = f.at(ch, y, x);
        sum += v;
        if (v > f.at(best, y, x)) best = ch;
      }
      pooled.at(0, y, x) = sum / c;
      pooled.at(1, y, x) = f.at(best, y, x);
      argmax_[y * w + x] = best;
    }
  }
  ms_ = conv.forward(pooled);
  for (auto& v : ms_.values()) v = sigmoid(v);
  return ms_;
}

Tensor SpatialAttention::backward(const Tensor& grad_ms) {
  Tensor g_pre(ms_.shape());
  for (std::size_t i = 0; i < g_pre.size(); ++i) g_pre[i] = grad_ms[i] * ms_[i] * (1.0 - ms_[i]);
  const Tensor g_pooled = conv.backward(g_pre);
  const int c = f_shape_[0];
  const int h = f_shape_[1];
  const int w = f_shape_[2];
  Tensor gf(f_shape_);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double g_mean = g_pooled.at(0, y, x) / c;
      for (int ch = 0; ch < c; ++ch) gf.at(ch, y, x) = g_mean;
      gf.at(argmax_[y * w + x], y, x) += g_pooled.at(1, y, x);
    }
  }
  return gf;
}

void SpatialAttention::collect(const std::string& prefix, ParamList& out) {
  conv.collect(prefix + ".conv", out);
}

// ---- Cbam -------------------------------------------------------------------

Cbam::Cbam(int channels, int reduction) : channel(channels, reduction) {}

void Cbam::init(Rng& rng) {
  channel.init(rng);
  spatial.init(rng);
}

void Cbam::zero_init() {
  for (Tensor* t : {&channel.w0, &channel.w1, &spatial.conv.weight, &spatial.conv.bias}) {
    std::fill(t->values().begin(), t->values().end(), 0.0);
  }
}

Tensor Cbam::forward(const Tensor& f) {
  f_ = f;
  mc_ = channel.forward(f);
  f1_ = f;
  const int c = f.dim(0);
  const int hw = f.dim(1) * f.dim(2);
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < hw; ++i) f1_[static_cast<std::size_t>(ch) * hw + i] *= mc_[ch];
  }
  ms_ = spatial.forward(f1_);
  Tensor out = f1_;
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < hw; ++i) out[static_cast<std::size_t>(ch) * hw + i] *= ms_[i];
  }
  return out;
}

Tensor Cbam::backward(const Tensor& grad_out) {
  const int c = f_.dim(0);
  const int hw = f_.dim(1) * f_.dim(2);
  Tensor g_f1(f_.shape());
  Tensor g_ms(ms_.shape());
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < hw; ++i) {
      const std::size_t idx = static_cast<std::size_t>(ch) * hw + i;
      g_f1[idx] = grad_out[idx] * ms_[i];
      g_ms[i] += grad_out[idx] * f1_[idx];
    }
  }
  add_into(g_f1.values(), spatial.backward(g_ms).values());

  Tensor g_f(f_.shape());
  Tensor g_mc(mc_.shape());
  for (int ch = 0; ch < c; ++ch) {
    for (int i = 0; i < hw; ++i) {
      const std::size_t idx = static_cast<std::size_t>(ch) * hw + i;
      g_f[idx] = g_f1[idx] * mc_[ch];
      g_mc[ch] += g_f1[idx] * f_[idx];
    }
  }
  add_into(g_f.values(), channel.backward(g_mc).values());
  return g_f;
}

void Cbam::collect(const std::string& prefix, ParamList& out) {
  channel.collect(prefix + ".channel", out);
  spatial.collect(prefix + ".spatial", out);
}

// ---- ResidualBlock ----------------------------------------------------------

ResidualBlock::ResidualBlock(int in_channels, int out_channels, int stride, int reduction)
    : conv1(in_channels, out_channels, 3, stride, 1),
      conv2(out_channels, out_channels, 3, 1, 1),
      projection(in_channels, out_channels, 1, stride, 0),
      cbam(out_channels, reduction) {}

void ResidualBlock::init(Rng& rng) {
  conv1.init(rng);
  conv2.init(rng);
  projection.init(rng);
  cbam.init(rng);
}

Tensor ResidualBlock::forward(const Tensor& x) {
  Tensor main = conv2.forward(relu1_.forward(conv1.forward(x)));
  const Tensor skip = projection.forward(x);
  add_into(main.values(), skip.values());
  return cbam.forward(relu_out_.forward(main));
}

Tensor ResidualBlock::backward(const Tensor& grad_out) {
  const Tensor g = relu_out_.backward(cbam.backward(grad_out));
  Tensor gx = conv1.backward(relu1_.backward(conv2.backward(g)));
  add_into(gx.values(), projection.backward(g).values());
  return gx;
}

void ResidualBlock::collect(const std::string& prefix, ParamList& out) {
  conv1.collect(prefix + ".conv1", out);
  conv2.collect(prefix + ".conv2", out);
  projection.collect(prefix + ".projection", out);
  cbam.collect(prefix + ".cbam", out);
}

void ResidualBlock::set_execution(Execution e) {
  conv1.execution = e;
  conv2.execution = e;
  projection.execution = e;
  cbam.spatial.conv.execution = e;
}

}  // namespace kio::nn
