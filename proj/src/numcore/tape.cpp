#include "molgen/numcore/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "molgen/error.hpp"

namespace molgen::num {

const Matrix& Var::value() const { return tape->value(*this); }

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": shapes disagree (" + shape_string(a) + " vs " +
                     shape_string(b) + ")");
  }
}

}  // namespace

Var Tape::push(Matrix value, Backward backward) {
  Node n;
  n.value = std::move(value);
  if (record_) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return Var{this, nodes_.size() - 1};
}

Matrix& Tape::grad_ref(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty() && !n.value.empty()) n.grad = Matrix(n.value.rows(), n.value.cols());
  return n.grad;
}

Var Tape::constant(Matrix value) { return push(std::move(value), nullptr); }

Var Tape::parameter(Parameter& p) {
  Var v = push(p.value, nullptr);
  nodes_[v.id].param = &p;
  return v;
}

void Tape::backward(Var out) {
  if (!record_) throw Error("backward: tape was created without gradient recording");
  const Matrix& ov = nodes_[out.id].value;
  if (ov.rows() != 1 || ov.cols() != 1) {
    throw ShapeError("backward: output must be 1x1, got " + shape_string(ov));
  }
  for (Node& n : nodes_) n.grad = Matrix();
  grad_ref(out.id)[0] = 1.0;
  for (std::size_t i = out.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad.empty()) continue;
    if (n.backward) n.backward(*this, i);
    if (n.param != nullptr) {
      Matrix& pg = n.param->grad;
      if (pg.rows() != n.grad.rows() || pg.cols() != n.grad.cols()) {
        pg = Matrix(n.grad.rows(), n.grad.cols());
      }
      for (std::size_t k = 0; k < pg.size(); ++k) pg[k] += nodes_[i].grad[k];
    }
  }
}

Var Tape::matmul(Var a, Var b) {
  Matrix out = linear(value(a), value(b));
  const std::size_t ia = a.id;
  const std::size_t ib = b.id;
  return push(std::move(out), [ia, ib](Tape& t, std::size_t self) {
    const Matrix& A = t.nodes_[ia].value;
    const Matrix& B = t.nodes_[ib].value;
    const std::size_t n = A.rows();
    const std::size_t k = A.cols();
    const std::size_t m = B.cols();
    if (t.nodes_[ia].backward || t.nodes_[ia].param) {
      Matrix& ga = t.grad_ref(ia);
      kernel::gemm_nt_acc(t.nodes_[self].grad.data().data(), B.data().data(), ga.data().data(), n,
                          k, m);
    }
    if (t.nodes_[ib].backward || t.nodes_[ib].param) {
      Matrix& gb = t.grad_ref(ib);
      kernel::gemm_tn_acc(A.data().data(), t.nodes_[self].grad.data().data(), gb.data().data(), n,
                          k, m);
    }
  });
}

Var Tape::matmul_nt(Var a, Var b) {
  Matrix out = num::matmul_nt(value(a), value(b));
  const std::size_t ia = a.id;
  const std::size_t ib = b.id;
  return push(std::move(out), [ia, ib](Tape& t, std::size_t self) {
    const Matrix& A = t.nodes_[ia].value;  // n×k
    const Matrix& B = t.nodes_[ib].value;  // m×k
    const std::size_t n = A.rows();
    const std::size_t k = A.cols();
    const std::size_t m = B.rows();
    if (t.nodes_[ia].backward || t.nodes_[ia].param) {
      Matrix& ga = t.grad_ref(ia);
      kernel::gemm_nn_acc(t.nodes_[self].grad.data().data(), B.data().data(), ga.data().data(), n,
                          m, k);
    }
    if (t.nodes_[ib].backward || t.nodes_[ib].param) {
      Matrix& gb = t.grad_ref(ib);
      kernel::gemm_tn_acc(t.nodes_[self].grad.data().data(), A.data().data(), gb.data().data(), n,
                          m, k);
    }
  });
}

Var Tape::add(Var a, Var b) {
  require_same_shape(value(a), value(b), "add");
  Matrix out = value(a);
  const Matrix& bv = value(b);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += bv[i];
  const std::size_t ia = a.id;
  const std::size_t ib = b.id;
  return push(std::move(out), [ia, ib](Tape& t, std::size_t self) {
    for (std::size_t src : {ia, ib}) {
      Matrix& g = t.grad_ref(src);
      const Matrix& go = t.nodes_[self].grad;
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[i];
    }
  });
}

Var Tape::add_row(Var a, Var row) {
  const Matrix& av = value(a);
  const Matrix& rv = value(row);
  if (rv.rows() != 1 || rv.cols() != av.cols()) {
    throw ShapeError("add_row: row " + shape_string(rv) + " does not broadcast over " +
                     shape_string(av));
  }
  Matrix out = av;
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) += rv[c];
  const std::size_t ia = a.id;
  const std::size_t ir = row.id;
  return push(std::move(out), [ia, ir](Tape& t, std::size_t self) {
    const Matrix& go = t.nodes_[self].grad;
    Matrix& ga = t.grad_ref(ia);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += go[i];
    Matrix& gr = t.grad_ref(ir);
    for (std::size_t r = 0; r < go.rows(); ++r)
      for (std::size_t c = 0; c < go.cols(); ++c) gr[c] += go(r, c);
  });
}

Var Tape::scale(Var a, double s) {
  Matrix out = value(a);
  for (double& v : out.data()) v *= s;
  const std::size_t ia = a.id;
  return push(std::move(out), [ia, s](Tape& t, std::size_t self) {
    const Matrix& go = t.nodes_[self].grad;
    Matrix& ga = t.grad_ref(ia);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += s * go[i];
  });
}

Var Tape::softmax_rows(Var a, bool causal) {
  const Matrix& av = value(a);
  if (av.cols() == 0) throw DomainError("softmax_rows: empty rows");
  Matrix out(av.rows(), av.cols());
  for (std::size_t r = 0; r < av.rows(); ++r) {
    const std::size_t n = causal ? std::min(av.cols(), r + 1) : av.cols();
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n; ++c) mx = std::max(mx, av(r, c));
    double sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      out(r, c) = std::exp(av(r, c) - mx);
      sum += out(r, c);
    }
    for (std::size_t c = 0; c < n; ++c) out(r, c) /= sum;
  }
  const std::size_t ia = a.id;
  return push(std::move(out), [ia](Tape& t, std::size_t self) {
    const Matrix& p = t.nodes_[self].value;
    const Matrix& go = t.nodes_[self].grad;
    Matrix& ga = t.grad_ref(ia);
    for (std::size_t r = 0; r < p.rows(); ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < p.cols(); ++c) dot += p(r, c) * go(r, c);
      for (std::size_t c = 0; c < p.cols(); ++c) ga(r, c) += p(r, c) * (go(r, c) - dot);
    }
  });
}

Var Tape::layer_norm_rows(Var x, Var gain, Var bias, double eps) {
  const Matrix& xv = value(x);
  const Matrix& gv = value(gain);
  const Matrix& bv = value(bias);
  if (gv.rows() != 1 || gv.cols() != xv.cols() || bv.rows() != 1 || bv.cols() != xv.cols()) {
    throw ShapeError("layer_norm_rows: gain/bias must be 1x" + std::to_string(xv.cols()));
  }
  const std::size_t rows = xv.rows();
  const std::size_t cols = xv.cols();
  Matrix xhat(rows, cols);
  std::vector<double> rstd(rows);
  Matrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    double mean = 0.0;
    for (std::size_t c = 0; c < cols; ++c) mean += xv(r, c);
    mean /= static_cast<double>(cols);
    double var = 0.0;
    for (std::size_t c = 0; c < cols; ++c) var += (xv(r, c) - mean) * (xv(r, c) - mean);
    var /= static_cast<double>(cols);
    rstd[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < cols; ++c) {
      xhat(r, c) = (xv(r, c) - mean) * rstd[r];
      out(r, c) = xhat(r, c) * gv[c] + bv[c];
    }
  }
  const std::size_t ix = x.id;
  const std::size_t ig = gain.id;
  const std::size_t ib = bias.id;
  return push(std::move(out), [ix, ig, ib, xhat = std::move(xhat), rstd = std::move(rstd)](
                                  Tape& t, std::size_t self) {
    const Matrix& go = t.nodes_[self].grad;
    const Matrix& gv = t.nodes_[ig].value;
    const std::size_t rows = go.rows();
    const std::size_t cols = go.cols();
    Matrix& gg = t.grad_ref(ig);
    Matrix& gb = t.grad_ref(ib);
    Matrix& gx = t.grad_ref(ix);
    std::vector<double> dxhat(cols);
    for (std::size_t r = 0; r < rows; ++r) {
      double mean_d = 0.0;
      double mean_dx = 0.0;
      for (std::size_t c = 0; c < cols; ++c) {
        gg[c] += go(r, c) * xhat(r, c);
        gb[c] += go(r, c);
        dxhat[c] = go(r, c) * gv[c];
        mean_d += dxhat[c];
        mean_dx += dxhat[c] * xhat(r, c);
      }
      mean_d /= static_cast<double>(cols);
      mean_dx /= static_cast<double>(cols);
      for (std::size_t c = 0; c < cols; ++c) {
        gx(r, c) += rstd[r] * (dxhat[c] - mean_d - xhat(r, c) * mean_dx);
      }
    }
  });
}

namespace {
constexpr double kGeluK = 0.7978845608028654;  // sqrt(2/pi)
constexpr double kGeluC = 0.044715;
}  // namespace

Var Tape::gelu(Var x) {
  Matrix out = value(x);
  for (double& v : out.data()) {
    const double th = std::tanh(kGeluK * (v + kGeluC * v * v * v));
    v = 0.5 * v * (1.0 + th);
  }
  const std::size_t ix = x.id;
  return push(std::move(out), [ix](Tape& t, std::size_t self) {
    const Matrix& xv = t.nodes_[ix].value;
    const Matrix& go = t.nodes_[self].grad;
    Matrix& gx = t.grad_ref(ix);
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const double v = xv[i];
      const double th = std::tanh(kGeluK * (v + kGeluC * v * v * v));
      const double d =
          0.5 * (1.0 + th) + 0.5 * v * (1.0 - th * th) * kGeluK * (1.0 + 3.0 * kGeluC * v * v);
      gx[i] += go[i] * d;
    }
  });
}

Var Tape::gather_rows(Var table, std::span<const int> indices) {
  const Matrix& tv = value(table);
  Matrix out(indices.size(), tv.cols());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const int idx = indices[r];
    if (idx < 0 || static_cast<std::size_t>(idx) >= tv.rows()) {
      throw DomainError("gather_rows: index " + std::to_string(idx) + " out of range for " +
                        shape_string(tv));
    }
    std::copy(tv.row(idx).begin(), tv.row(idx).end(), out.row(r).begin());
  }
  const std::size_t it = table.id;
  std::vector<int> idx(indices.begin(), indices.end());
  return push(std::move(out), [it, idx = std::move(idx)](Tape& t, std::size_t self) {
    const Matrix& go = t.nodes_[self].grad;
    Matrix& gt = t.grad_ref(it);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      auto dst = gt.row(idx[r]);
      auto src = go.row(r);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += src[c];
    }
  });
}

Var Tape::slice_cols(Var a, std::size_t start, std::size_t count) {
  const Matrix& av = value(a);
  if (start + count > av.cols()) {
    throw ShapeError("slice_cols: [" + std::to_string(start) + ", " +
                     std::to_string(start + count) + ") exceeds " + shape_string(av));
  }
  Matrix out(av.rows(), count);
  for (std::size_t r = 0; r < av.rows(); ++r)
    for (std::size_t c = 0; c < count; ++c) out(r, c) = av(r, start + c);
  const std::size_t ia = a.id;
  return push(std::move(out), [ia, start, count](Tape& t, std::size_t self) {
    const Matrix& go = t.nodes_[self].grad;
    Matrix& ga = t.grad_ref(ia);
    for (std::size_t r = 0; r < go.rows(); ++r)
      for (std::size_t c = 0; c < count; ++c) ga(r, start + c) += go(r, c);
  });
}

Var Tape::concat_cols(std::span<const Var> parts) {
  if (parts.empty()) throw DomainError("concat_cols: no inputs");
  const std::size_t rows = value(parts[0]).rows();
  std::size_t cols = 0;
  for (Var p : parts) {
    if (value(p).rows() != rows) throw ShapeError("concat_cols: row counts disagree");
    cols += value(p).cols();
  }
  Matrix out(rows, cols);
  std::size_t off = 0;
  std::vector<std::size_t> ids;
  for (Var p : parts) {
    const Matrix& pv = value(p);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < pv.cols(); ++c) out(r, off + c) = pv(r, c);
    off += pv.cols();
    ids.push_back(p.id);
  }
  return push(std::move(out), [ids = std::move(ids)](Tape& t, std::size_t self) {
    const Matrix& go = t.nodes_[self].grad;
    std::size_t off = 0;
    for (std::size_t id : ids) {
      Matrix& g = t.grad_ref(id);
      for (std::size_t r = 0; r < g.rows(); ++r)
        for (std::size_t c = 0; c < g.cols(); ++c) g(r, c) += go(r, off + c);
      off += g.cols();
    }
  });
}

Var Tape::concat_rows(std::span<const Var> parts) {
  if (parts.empty()) throw DomainError("concat_rows: no inputs");
  const std::size_t cols = value(parts[0]).cols();
  std::vector<double> data;
  std::size_t rows = 0;
  std::vector<std::size_t> ids;
  for (Var p : parts) {
    const Matrix& pv = value(p);
    if (pv.cols() != cols) throw ShapeError("concat_rows: column counts disagree");
    data.insert(data.end(), pv.data().begin(), pv.data().end());
    rows += pv.rows();
    ids.push_back(p.id);
  }
  return push(Matrix(rows, cols, std::move(data)), [ids = std::move(ids)](Tape& t,
                                                                          std::size_t self) {
    const Matrix& go = t.nodes_[self].grad;
    std::size_t off = 0;
    for (std::size_t id : ids) {
      Matrix& g = t.grad_ref(id);
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += go[off + i];
      off += g.size();
    }
  });
}

Var Tape::cross_entropy(Var logits, std::span<const int> targets, int ignore_index) {
  const Matrix& lv = value(logits);
  if (targets.size() != lv.rows()) {
    throw ShapeError("cross_entropy: " + std::to_string(targets.size()) + " targets for " +
                     shape_string(lv) + " logits");
  }
  Matrix probs(lv.rows(), lv.cols());
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < lv.rows(); ++r) {
    const auto row = lv.row(r);
    const double mx = *std::max_element(row.begin(), row.end());
    double sum = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) {
      probs(r, c) = std::exp(row[c] - mx);
      sum += probs(r, c);
    }
    for (std::size_t c = 0; c < row.size(); ++c) probs(r, c) /= sum;
    const int tgt = targets[r];
    if (tgt == ignore_index) continue;
    if (tgt < 0 || static_cast<std::size_t>(tgt) >= lv.cols()) {
      throw DomainError("cross_entropy: target " + std::to_string(tgt) + " out of range");
    }
    total += -(row[tgt] - mx - std::log(sum));
    ++count;
  }
  if (count == 0) throw DomainError("cross_entropy: every target position is padding");
  Matrix out(1, 1, total / static_cast<double>(count));
  const std::size_t il = logits.id;
  std::vector<int> tg(targets.begin(), targets.end());
  return push(std::move(out), [il, tg = std::move(tg), probs = std::move(probs), count,
                               ignore_index](Tape& t, std::size_t self) {
    const double g = t.nodes_[self].grad[0] / static_cast<double>(count);
    Matrix& gl = t.grad_ref(il);
    for (std::size_t r = 0; r < probs.rows(); ++r) {
      if (tg[r] == ignore_index) continue;
      for (std::size_t c = 0; c < probs.cols(); ++c) gl(r, c) += g * probs(r, c);
      gl(r, tg[r]) -= g;
    }
  });
}

Var Tape::sum_squares(Var a) {
  const Matrix& av = value(a);
  double s = 0.0;
  for (double v : av.data()) s += v * v;
  const std::size_t ia = a.id;
  return push(Matrix(1, 1, s), [ia](Tape& t, std::size_t self) {
    const double g = t.nodes_[self].grad[0];
    const Matrix& av = t.nodes_[ia].value;
    Matrix& ga = t.grad_ref(ia);
    for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += 2.0 * av[i] * g;
  });
}

}  // namespace molgen::num
