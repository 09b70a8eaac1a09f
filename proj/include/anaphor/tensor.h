// Copyright 2026 The Anaphor Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ANAPHOR_TENSOR_H_
#define ANAPHOR_TENSOR_H_

#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace anaphor {

// Raised when an operation produces NaN or Inf, or is fed non-finite input.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using RowMajorMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMajorMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMajorMatrix>;

// Dense rank-2 tensor of doubles in row-major order. Vectors are 1 x n.
class Tensor {
 public:
  Tensor() = default;
  Tensor(int rows, int cols, double fill = 0.0);

  static Tensor RowVector(std::span<const double> values);
  static Tensor FromRows(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  bool SameShape(const Tensor& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  std::string ShapeString() const;

  double& operator()(int r, int c) { return data_[Index(r, c)]; }
  double operator()(int r, int c) const { return data_[Index(r, c)]; }
  double& operator[](size_t i) { return data_[i]; }
  double operator[](size_t i) const { return data_[i]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> row(int r) {
    return std::span<double>(data_).subspan(Index(r, 0), static_cast<size_t>(cols_));
  }
  std::span<const double> row(int r) const {
    return std::span<const double>(data_).subspan(Index(r, 0), static_cast<size_t>(cols_));
  }

  MatrixMap map() { return MatrixMap(data_.data(), rows_, cols_); }
  ConstMatrixMap map() const { return ConstMatrixMap(data_.data(), rows_, cols_); }

  void Fill(double value);
  bool AllFinite() const;

  bool operator==(const Tensor& other) const = default;

 private:
  size_t Index(int r, int c) const {
    return static_cast<size_t>(r) * static_cast<size_t>(cols_) + static_cast<size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  // Aligned so that vectorized kernels take the same code path for every
  // buffer, which keeps results bitwise reproducible.
  std::vector<double, Eigen::aligned_allocator<double>> data_;
};

}  // namespace anaphor

#endif  // ANAPHOR_TENSOR_H_
