#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hoegkit {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  const std::vector<double>& values() const { return data_; }

  std::vector<double> column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> values);
  void fill(double value);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Throws std::invalid_argument naming `what` when shapes differ.
void require_shape(const Matrix& m, std::size_t rows, std::size_t cols, const std::string& what);

/// C += A * B
void gemm_acc(const Matrix& a, const Matrix& b, Matrix& c);
/// C += A^T * B
void gemm_tn_acc(const Matrix& a, const Matrix& b, Matrix& c);
/// C += A * B^T
void gemm_nt_acc(const Matrix& a, const Matrix& b, Matrix& c);

Matrix matmul(const Matrix& a, const Matrix& b);

/// Keeps only the listed columns, in the given order.
Matrix select_columns(const Matrix& m, std::span<const std::size_t> columns);

bool all_finite(const Matrix& m);

}  // namespace hoegkit
