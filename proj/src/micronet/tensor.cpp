#include "kio/micronet/tensor.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace kio::nn {

Tensor::Tensor(std::vector<int> shape, double fill) : shape_(std::move(shape)) {
  std::size_t n = 1;
  for (int d : shape_) {
    if (d <= 0) throw std::invalid_argument("tensor dimensions must be positive");
    n *= static_cast<std::size_t>(d);
  }
  values_.assign(n, fill);
}

std::vector<double>& Tensor::grad() {
  if (grad_.size() != values_.size()) grad_.assign(values_.size(), 0.0);
  return grad_;
}

void Tensor::zero_grad() { std::fill(grad_.begin(), grad_.end(), 0.0); }

std::string Tensor::shape_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape_[i]);
  }
  return s + ")";
}

void require_shape(const Tensor& t, const std::vector<int>& shape, const char* what) {
  if (t.shape() != shape) {
    Tensor expected(shape);
    throw std::invalid_argument(std::string(what) + ": shape mismatch, got " + t.shape_string() +
                                " expected " + expected.shape_string());
  }
}

}  // namespace kio::nn
