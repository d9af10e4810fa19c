#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace molgen::num {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix row_vector(std::span<const double> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<double> to_vector() const { return data_; }
  void fill(double v);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

std::string shape_string(const Matrix& m);

bool all_finite(const Matrix& m);

// x[a×b] · W[b×c]. Throws ShapeError naming both shapes on mismatch.
Matrix linear(const Matrix& x, const Matrix& w);

// a · bᵀ.
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);
Matrix add(const Matrix& a, const Matrix& b);

// Max-subtracted softmax. Throws DomainError on empty input.
std::vector<double> softmax(std::span<const double> logits);

// Raw kernels shared with the tape. `out` must be pre-sized.
namespace kernel {
// out[a×c] += x[a×b] · w[b×c]
void gemm_nn_acc(const double* x, const double* w, double* out, std::size_t a, std::size_t b,
                 std::size_t c);
// out[a×b] += g[a×c] · w[b×c]ᵀ
void gemm_nt_acc(const double* g, const double* w, double* out, std::size_t a, std::size_t b,
                 std::size_t c);
// out[b×c] += x[a×b]ᵀ · g[a×c]
void gemm_tn_acc(const double* x, const double* g, double* out, std::size_t a, std::size_t b,
                 std::size_t c);
}  // namespace kernel

}  // namespace molgen::num
