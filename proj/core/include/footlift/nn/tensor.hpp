#pragma once

#include <Eigen/Core>
#include <initializer_list>
#include <vector>

#include "footlift/common.hpp"

namespace footlift::nn {

using MatMap =
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using ConstMatMap = Eigen::Map<
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// Dense row-major tensor of 64-bit reals. Rank is usually 2; rank-3 shapes
// ({L, heads, d_h}) are views over the same contiguous storage.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int rows, int cols) : shape_{rows, cols}, v_(size_of(shape_), 0.0) {}
  explicit Tensor(std::vector<int> shape)
      : shape_(std::move(shape)), v_(size_of(shape_), 0.0) {}

  static Tensor zeros(int rows, int cols) { return Tensor(rows, cols); }
  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Tensor scalar(double v);

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  // Leading/trailing dimension; rank-3 tensors fold middle dims into cols.
  int rows() const { return shape_.empty() ? 0 : shape_[0]; }
  int cols() const {
    int c = 1;
    for (size_t i = 1; i < shape_.size(); ++i) c *= shape_[i];
    return c;
  }
  long size() const { return static_cast<long>(v_.size()); }
  bool empty() const { return v_.empty(); }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double& operator()(int r, int c) { return v_[static_cast<size_t>(r) * cols() + c]; }
  double operator()(int r, int c) const {
    return v_[static_cast<size_t>(r) * cols() + c];
  }
  double& at(long i) { return v_[i]; }
  double at(long i) const { return v_[i]; }

  MatMap map() { return MatMap(v_.data(), rows(), cols()); }
  ConstMatMap map() const { return ConstMatMap(v_.data(), rows(), cols()); }

  void fill(double v) { std::fill(v_.begin(), v_.end(), v); }
  void set_zero() { fill(0.0); }
  bool all_finite() const;
  bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

 private:
  static long size_of(const std::vector<int>& shape) {
    long n = shape.empty() ? 0 : 1;
    for (int d : shape) n *= d;
    return n;
  }

  std::vector<int> shape_;
  std::vector<double> v_;
};

}  // namespace footlift::nn
