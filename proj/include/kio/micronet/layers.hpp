#pragma once

#include <string>
#include <vector>

#include "kio/execution.hpp"
#include "kio/micronet/tensor.hpp"
#include "kio/rng.hpp"

namespace kio::nn {

struct NamedParam {
  std::string name;
  Tensor* tensor = nullptr;
};
using ParamList = std::vector<NamedParam>;

// ---- kernels ---------------------------------------------------------------

int conv_output_size(int input, int kernel, int stride, int pad);

/// y[co] = b[co] + Σ_ci w[co, ci] ⋆ x[ci]; x is (Cin, H, W), w is (Cout, Cin, k, k).
void conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad,
                    Tensor& y, Execution execution);

/// Accumulates weight/bias gradients into gw/gb and writes the input gradient to gx.
void conv2d_backward(const Tensor& x, const Tensor& w, const Tensor& gy, int stride, int pad,
                     std::vector<double>& gx, std::vector<double>& gw, std::vector<double>& gb,
                     Execution execution);

// ---- layers ----------------------------------------------------------------

class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(int in_channels, int out_channels, int kernel, int stride, int pad);

  void init(Rng& rng, double gain = 1.0);
  Tensor forward(const Tensor& x);
  /// Returns the input gradient; accumulates parameter gradients.
  Tensor backward(const Tensor& grad_out);
  void collect(const std::string& prefix, ParamList& out);

  Tensor weight;
  Tensor bias;
  Execution execution = Execution::Parallel;

 private:
  int stride_ = 1;
  int pad_ = 0;
  Tensor input_;
};

class Linear {
 public:
  Linear() = default;
  Linear(int in_features, int out_features);

  void init(Rng& rng, double gain = 1.0);
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& grad_out);
  void collect(const std::string& prefix, ParamList& out);

  Tensor weight;  // (out, in)
  Tensor bias;    // (out)

 private:
  Tensor input_;
};

class Relu {
 public:
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& grad_out) const;

 private:
  std::vector<bool> active_;
};

/// M_c = σ(W1 ρ(W0 avgpool(F)) + W1 ρ(W0 maxpool(F))), shape (C, 1, 1).
class ChannelAttention {
 public:
  ChannelAttention() = default;
  ChannelAttention(int channels, int reduction);

  void init(Rng& rng);
  Tensor forward(const Tensor& f);
  /// Gradient w.r.t. F given the gradient w.r.t. M_c.
  Tensor backward(const Tensor& grad_mc);
  void collect(const std::string& prefix, ParamList& out);

  Tensor w0;  // (C/r, C)
  Tensor w1;  // (C, C/r)

 private:
  struct Branch {
    std::vector<double> pooled;
    std::vector<double> pre;  // W0 · pooled
    std::vector<double> hidden;
  };
  void branch_forward(Branch& b) const;
  void branch_backward(const Branch& b, const std::vector<double>& g_s,
                       std::vector<double>& g_pooled);

  std::vector<int> f_shape_;
  Branch avg_;
  Branch max_;
  std::vector<int> argmax_;
  std::vector<double> mc_;
};

/// M_s = σ(conv7x7([mean_c(F); max_c(F)])), shape (1, H, W).
class SpatialAttention {
 public:
  SpatialAttention();

  void init(Rng& rng);
  Tensor forward(const Tensor& f);
  Tensor backward(const Tensor& grad_ms);
  void collect(const std::string& prefix, ParamList& out);

  Conv2d conv;  // 2 → 1, 7×7, padding 3

 private:
  std::vector<int> f_shape_;
  std::vector<int> argmax_;
  Tensor ms_;
};

/// F' = M_c(F) ⊗ F, F'' = M_s(F') ⊗ F'.
class Cbam {
 public:
  Cbam() = default;
  Cbam(int channels, int reduction);

  void init(Rng& rng);
  void zero_init();
  Tensor forward(const Tensor& f);
  Tensor backward(const Tensor& grad_out);
  void collect(const std::string& prefix, ParamList& out);

  const Tensor& channel_map() const { return mc_; }
  const Tensor& spatial_map() const { return ms_; }

  ChannelAttention channel;
  SpatialAttention spatial;

 private:
  Tensor f_;
  Tensor mc_;
  Tensor f1_;
  Tensor ms_;
};

/// Two 3×3 convs with a strided 1×1 projection skip, followed by CBAM refinement.
class ResidualBlock {
 public:
  ResidualBlock() = default;
  ResidualBlock(int in_channels, int out_channels, int stride, int reduction);

  void init(Rng& rng);
  Tensor forward(const Tensor& x);
  Tensor backward(const Tensor& grad_out);
  void collect(const std::string& prefix, ParamList& out);
  void set_execution(Execution e);

  Conv2d conv1;
  Conv2d conv2;
  Conv2d projection;
  Cbam cbam;

 private:
  Relu relu1_;
  Relu relu_out_;
};

}  // namespace kio::nn
