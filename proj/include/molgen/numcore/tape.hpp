#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "molgen/numcore/matrix.hpp"

namespace molgen::num {

// A learnable weight block and its accumulated gradient.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  Parameter() = default;
  Parameter(std::string n, Matrix v) : name(std::move(n)), value(std::move(v)) {
    grad = Matrix(value.rows(), value.cols());
  }
  void zero_grad() { grad = Matrix(value.rows(), value.cols()); }
};

using ParamRefs = std::vector<Parameter*>;

class Tape;

// Handle to a node recorded on a Tape.
struct Var {
  Tape* tape = nullptr;
  std::size_t id = 0;

  const Matrix& value() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
};

// Records primitive matrix operations so that a scalar result can be
// differentiated in reverse. One tape per forward pass; not thread-safe.
class Tape {
 public:
  explicit Tape(bool record_gradients = true) : record_(record_gradients) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return record_; }

  Var constant(Matrix value);
  // Leaf bound to a parameter; backward() adds into p.grad.
  Var parameter(Parameter& p);

  const Matrix& value(Var v) const { return nodes_[v.id].value; }
  // Gradient of the last backward() seed with respect to v (empty if unreached).
  const Matrix& grad(Var v) const { return nodes_[v.id].grad; }

  // Seeds d(out)/d(out) = 1 for a 1×1 node and propagates to every parameter leaf.
  void backward(Var out);

  std::size_t size() const { return nodes_.size(); }

  // Primitive operations.
  Var matmul(Var a, Var b);      // a · b
  Var matmul_nt(Var a, Var b);   // a · bᵀ
  Var add(Var a, Var b);         // elementwise, same shape
  Var add_row(Var a, Var row);   // row (1×c) broadcast over every row of a
  Var scale(Var a, double s);
  Var softmax_rows(Var a, bool causal);
  Var layer_norm_rows(Var x, Var gain, Var bias, double eps);
  Var gelu(Var x);
  Var gather_rows(Var table, std::span<const int> indices);  // row-select
  Var slice_cols(Var a, std::size_t start, std::size_t count);
  Var concat_cols(std::span<const Var> parts);
  Var concat_rows(std::span<const Var> parts);
  // Mean over positions whose target != ignore_index of -log softmax(logits)[target].
  Var cross_entropy(Var logits, std::span<const int> targets, int ignore_index);
  Var sum_squares(Var a);

 private:
  using Backward = std::function<void(Tape&, std::size_t)>;
  struct Node {
    Matrix value;
    Matrix grad;
    Backward backward;
    Parameter* param = nullptr;
  };

  Var push(Matrix value, Backward backward);
  Matrix& grad_ref(std::size_t id);
  const Matrix& grad_of(std::size_t id) const { return nodes_[id].grad; }

  bool record_;
  std::vector<Node> nodes_;
};

// Free-function spellings so model code reads naturally.
inline Var matmul(Var a, Var b) { return a.tape->matmul(a, b); }
inline Var matmul_nt(Var a, Var b) { return a.tape->matmul_nt(a, b); }
inline Var operator+(Var a, Var b) { return a.tape->add(a, b); }
inline Var add_row(Var a, Var row) { return a.tape->add_row(a, row); }
inline Var scale(Var a, double s) { return a.tape->scale(a, s); }
inline Var softmax_rows(Var a, bool causal = false) { return a.tape->softmax_rows(a, causal); }
inline Var gelu(Var a) { return a.tape->gelu(a); }
inline Var slice_cols(Var a, std::size_t start, std::size_t count) {
  return a.tape->slice_cols(a, start, count);
}
inline Var sum_squares(Var a) { return a.tape->sum_squares(a); }

}  // namespace molgen::num
