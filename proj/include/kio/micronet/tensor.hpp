#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace kio::nn {

/// Dense row-major tensor of doubles with an optional gradient buffer of the same shape.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, double fill = 0.0);

  const std::vector<int>& shape() const { return shape_; }
  int dim(std::size_t i) const { return shape_.at(i); }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return values_.size(); }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Rank-3 (C, H, W) access.
  double& at(int c, int h, int w) { return values_[(static_cast<std::size_t>(c) * shape_[1] + h) * shape_[2] + w]; }
  double at(int c, int h, int w) const { return values_[(static_cast<std::size_t>(c) * shape_[1] + h) * shape_[2] + w]; }

  bool has_grad() const { return !grad_.empty(); }
  std::vector<double>& grad();  // allocates zeros on first use
  const std::vector<double>& grad() const { return grad_; }
  void zero_grad();

  std::string shape_string() const;

 private:
  std::vector<int> shape_;
  std::vector<double> values_;
  std::vector<double> grad_;
};

void require_shape(const Tensor& t, const std::vector<int>& shape, const char* what);

}  // namespace kio::nn
