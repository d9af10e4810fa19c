#include "molgen/numcore/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "molgen/error.hpp"

namespace molgen::num {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw ShapeError("matrix data length " + std::to_string(data_.size()) + " does not match " +
                     std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw ShapeError("from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::row_vector(std::span<const double> values) {
  return Matrix(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

std::string shape_string(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

bool all_finite(const Matrix& m) {
  return std::all_of(m.data().begin(), m.data().end(), [](double v) { return std::isfinite(v); });
}

namespace kernel {

// Rows are processed four at a time so each row of the right operand is
// loaded once per block. Every output element still accumulates its terms in
// the same order as the one-row loop, so results are bit-identical to it.

void gemm_nn_acc(const double* x, const double* w, double* out, std::size_t a, std::size_t b,
                 std::size_t c) {
  std::size_t i = 0;
  for (; i + 4 <= a; i += 4) {
    double* __restrict o0 = out + i * c;
    double* __restrict o1 = o0 + c;
    double* __restrict o2 = o1 + c;
    double* __restrict o3 = o2 + c;
    const double* x0 = x + i * b;
    for (std::size_t k = 0; k < b; ++k) {
      const double v0 = x0[k], v1 = x0[b + k], v2 = x0[2 * b + k], v3 = x0[3 * b + k];
      if (v0 == 0.0 && v1 == 0.0 && v2 == 0.0 && v3 == 0.0) continue;
      const double* __restrict wrow = w + k * c;
      for (std::size_t j = 0; j < c; ++j) {
        const double wv = wrow[j];
        o0[j] += v0 * wv;
        o1[j] += v1 * wv;
        o2[j] += v2 * wv;
        o3[j] += v3 * wv;
      }
    }
  }
  for (; i < a; ++i) {
    double* __restrict orow = out + i * c;
    const double* xrow = x + i * b;
    for (std::size_t k = 0; k < b; ++k) {
      const double xv = xrow[k];
      if (xv == 0.0) continue;
      const double* __restrict wrow = w + k * c;
      for (std::size_t j = 0; j < c; ++j) orow[j] += xv * wrow[j];
    }
  }
}

void gemm_nt_acc(const double* g, const double* w, double* out, std::size_t a, std::size_t b,
                 std::size_t c) {
  std::size_t i = 0;
  for (; i + 4 <= a; i += 4) {
    const double* g0 = g + i * c;
    const double* g1 = g0 + c;
    const double* g2 = g1 + c;
    const double* g3 = g2 + c;
    double* orow = out + i * b;
    for (std::size_t k = 0; k < b; ++k) {
      const double* wrow = w + k * c;
      double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
      for (std::size_t j = 0; j < c; ++j) {
        const double wv = wrow[j];
        s0 += g0[j] * wv;
        s1 += g1[j] * wv;
        s2 += g2[j] * wv;
        s3 += g3[j] * wv;
      }
      orow[k] += s0;
      orow[b + k] += s1;
      orow[2 * b + k] += s2;
      orow[3 * b + k] += s3;
    }
  }
  for (; i < a; ++i) {
    const double* grow = g + i * c;
    double* orow = out + i * b;
    for (std::size_t k = 0; k < b; ++k) {
      const double* wrow = w + k * c;
      double s = 0.0;
      for (std::size_t j = 0; j < c; ++j) s += grow[j] * wrow[j];
      orow[k] += s;
    }
  }
}

void gemm_tn_acc(const double* x, const double* g, double* out, std::size_t a, std::size_t b,
                 std::size_t c) {
  std::size_t i = 0;
  for (; i + 4 <= a; i += 4) {
    const double* x0 = x + i * b;
    const double* __restrict g0 = g + i * c;
    const double* __restrict g1 = g0 + c;
    const double* __restrict g2 = g1 + c;
    const double* __restrict g3 = g2 + c;
    for (std::size_t k = 0; k < b; ++k) {
      const double v0 = x0[k], v1 = x0[b + k], v2 = x0[2 * b + k], v3 = x0[3 * b + k];
      if (v0 == 0.0 && v1 == 0.0 && v2 == 0.0 && v3 == 0.0) continue;
      double* __restrict orow = out + k * c;
      for (std::size_t j = 0; j < c; ++j) {
        double o = orow[j];
        o += v0 * g0[j];
        o += v1 * g1[j];
        o += v2 * g2[j];
        o += v3 * g3[j];
        orow[j] = o;
      }
    }
  }
  for (; i < a; ++i) {
    const double* xrow = x + i * b;
    const double* __restrict grow = g + i * c;
    for (std::size_t k = 0; k < b; ++k) {
      const double xv = xrow[k];
      if (xv == 0.0) continue;
      double* __restrict orow = out + k * c;
      for (std::size_t j = 0; j < c; ++j) orow[j] += xv * grow[j];
    }
  }
}

}  // namespace kernel

Matrix linear(const Matrix& x, const Matrix& w) {
  if (x.cols() != w.rows()) {
    throw ShapeError("linear: inner dimensions disagree (" + shape_string(x) + " vs " +
                     shape_string(w) + ")");
  }
  Matrix out(x.rows(), w.cols());
  kernel::gemm_nn_acc(x.data().data(), w.data().data(), out.data().data(), x.rows(), x.cols(),
                      w.cols());
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul_nt: column counts disagree (" + shape_string(a) + " vs " +
                     shape_string(b) + ")");
  }
  Matrix out(a.rows(), b.rows());
  kernel::gemm_nt_acc(a.data().data(), b.data().data(), out.data().data(), a.rows(), b.rows(),
                      a.cols());
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c);
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("add: shapes disagree (" + shape_string(a) + " vs " + shape_string(b) + ")");
  }
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw DomainError("softmax: empty input");
  const double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace molgen::num
