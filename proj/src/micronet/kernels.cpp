#include <stdexcept>

#include "kio/micronet/layers.hpp"

namespace kio::nn {

int conv_output_size(int input, int kernel, int stride, int pad) {
  return (input + 2 * pad - kernel) / stride + 1;
}

namespace {

struct ConvShape {
  int cin, h, w, cout, k, oh, ow;
};

ConvShape conv_shape(const Tensor& x, const Tensor& w, int stride, int pad) {
  if (x.rank() != 3 || w.rank() != 4 || w.dim(1) != x.dim(0) || w.dim(2) != w.dim(3)) {
    throw std::invalid_argument("conv2d: shape mismatch between input " + x.shape_string() +
                                " and weight " + w.shape_string());
  }
  ConvShape s{x.dim(0), x.dim(1), x.dim(2), w.dim(0), w.dim(2), 0, 0};
  s.oh = conv_output_size(s.h, s.k, stride, pad);
  s.ow = conv_output_size(s.w, s.k, stride, pad);
  return s;
}

void forward_channel(const ConvShape& s, const double* x, const double* w, double bias,
                     int stride, int pad, double* y) {
  for (int oy = 0; oy < s.oh; ++oy) {
    for (int ox = 0; ox < s.ow; ++ox) {
      double acc = bias;
      for (int ci = 0; ci < s.cin; ++ci) {
        const double* xc = x + static_cast<std::size_t>(ci) * s.h * s.w;
        const double* wc = w + static_cast<std::size_t>(ci) * s.k * s.k;
        for (int ky = 0; ky < s.k; ++ky) {
          const int iy = oy * stride - pad + ky;
          if (iy < 0 || iy >= s.h) continue;
          for (int kx = 0; kx < s.k; ++kx) {
            const int ix = ox * stride - pad + kx;
            if (ix < 0 || ix >= s.w) continue;
            acc += xc[iy * s.w + ix] * wc[ky * s.k + kx];
          }
        }
      }
      y[oy * s.ow + ox] = acc;
    }
  }
}

// dL/dw[co] and dL/db[co] for one output channel.
void weight_grad_channel(const ConvShape& s, const double* x, const double* gy, int stride,
                         int pad, double* gw, double& gb) {
  for (int oy = 0; oy < s.oh; ++oy) {
    for (int ox = 0; ox < s.ow; ++ox) {
      const double g = gy[oy * s.ow + ox];
      gb += g;
      for (int ci = 0; ci < s.cin; ++ci) {
        const double* xc = x + static_cast<std::size_t>(ci) * s.h * s.w;
        double* gwc = gw + static_cast<std::size_t>(ci) * s.k * s.k;
        for (int ky = 0; ky < s.k; ++ky) {
          const int iy = oy * stride - pad + ky;
          if (iy < 0 || iy >= s.h) continue;
          for (int kx = 0; kx < s.k; ++kx) {
            const int ix = ox * stride - pad + kx;
            if (ix < 0 || ix >= s.w) continue;
            gwc[ky * s.k + kx] += g * xc[iy * s.w + ix];
          }
        }
      }
    }
  }
}

// dL/dx[ci], gathered over every output position that reads it.
void input_grad_channel(const ConvShape& s, const double* w, const double* gy, int ci,
                        int stride, int pad, double* gx) {
  for (int iy = 0; iy < s.h; ++iy) {
    for (int ix = 0; ix < s.w; ++ix) {
      double acc = 0.0;
      for (int co = 0; co < s.cout; ++co) {
        const double* wc = w + (static_cast<std::size_t>(co) * s.cin + ci) * s.k * s.k;
        const double* gc = gy + static_cast<std::size_t>(co) * s.oh * s.ow;
        for (int ky = 0; ky < s.k; ++ky) {
          const int ny = iy + pad - ky;
          if (ny < 0 || ny % stride != 0) continue;
          const int oy = ny / stride;
          if (oy >= s.oh) continue;
          for (int kx = 0; kx < s.k; ++kx) {
            const int nx = ix + pad - kx;
            if (nx < 0 || nx % stride != 0) continue;
            const int ox = nx / stride;
            if (ox >= s.ow) continue;
            acc += gc[oy * s.ow + ox] * wc[ky * s.k + kx];
          }
        }
      }
      gx[iy * s.w + ix] = acc;
    }
  }
}

}  // namespace

void conv2d_forward(const Tensor& x, const Tensor& w, const Tensor& b, int stride, int pad,
                    Tensor& y, Execution execution) {
  const ConvShape s = conv_shape(x, w, stride, pad);
  if (y.shape() != std::vector<int>{s.cout, s.oh, s.ow}) y = Tensor({s.cout, s.oh, s.ow});
  const std::size_t w_stride = static_cast<std::size_t>(s.cin) * s.k * s.k;
  const std::size_t y_stride = static_cast<std::size_t>(s.oh) * s.ow;
  if (execution == Execution::Parallel) {
#pragma omp parallel for schedule(static)
    for (int co = 0; co < s.cout; ++co) {
      forward_channel(s, x.data(), w.data() + co * w_stride, b[co], stride, pad,
                      y.data() + co * y_stride);
    }
  } else {
    for (int co = 0; co < s.cout; ++co) {
      forward_channel(s, x.data(), w.data() + co * w_stride, b[co], stride, pad,
                      y.data() + co * y_stride);
    }
  }
}

void conv2d_backward(const Tensor& x, const Tensor& w, const Tensor& gy, int stride, int pad,
                     std::vector<double>& gx, std::vector<double>& gw, std::vector<double>& gb,
                     Execution execution) {
  const ConvShape s = conv_shape(x, w, stride, pad);
  require_shape(gy, {s.cout, s.oh, s.ow}, "conv2d backward");
  gx.assign(x.size(), 0.0);
  gw.resize(w.size(), 0.0);
  gb.resize(static_cast<std::size_t>(s.cout), 0.0);
  const std::size_t w_stride = static_cast<std::size_t>(s.cin) * s.k * s.k;
  const std::size_t y_stride = static_cast<std::size_t>(s.oh) * s.ow;
  const std::size_t x_stride = static_cast<std::size_t>(s.h) * s.w;
  if (execution == Execution::Parallel) {
#pragma omp parallel
    {
#pragma omp for schedule(static) nowait
      for (int co = 0; co < s.cout; ++co) {
        weight_grad_channel(s, x.data(), gy.data() + co * y_stride, stride, pad,
                            gw.data() + co * w_stride, gb[co]);
      }
#pragma omp for schedule(static)
      for (int ci = 0; ci < s.cin; ++ci) {
        input_grad_channel(s, w.data(), gy.data(), ci, stride, pad, gx.data() + ci * x_stride);
      }
    }
  } else {
    for (int co = 0; co < s.cout; ++co) {
      weight_grad_channel(s, x.data(), gy.data() + co * y_stride, stride, pad,
                          gw.data() + co * w_stride, gb[co]);
    }
    for (int ci = 0; ci < s.cin; ++ci) {
      input_grad_channel(s, w.data(), gy.data(), ci, stride, pad, gx.data() + ci * x_stride);
    }
  }
}

}  // namespace kio::nn
