#include "molgen/fusion/fusion.hpp"

#include <cmath>

#include "molgen/error.hpp"
#include "molgen/numcore/optim.hpp"

namespace molgen::fusion {
namespace {

using num::Matrix;
using num::Parameter;
using num::Tape;
using num::Var;

Parameter make(const std::string& name, std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  num::glorot_uniform(m, rng);
  return Parameter(name, std::move(m));
}

StreamWeights make_stream(const std::string& stream, const FusionDims& dims, Rng& rng) {
  const std::size_t w = dims.heads * dims.head_dim;
  return {make("fusion." + stream + ".wq", dims.d, w, rng), make("fusion." + stream + ".wk", dims.d, w, rng),
          make("fusion." + stream + ".wv", dims.d, w, rng)};
}

BoundStream bind_stream(Tape& tape, StreamWeights& s) {
  return {tape.parameter(s.wq), tape.parameter(s.wk), tape.parameter(s.wv)};
}

std::vector<double> row_of(const Tape& tape, Var v) { return tape.value(v).to_vector(); }

}  // namespace

void validate(const FusionDims& dims) {
  if (dims.d == 0 || dims.heads == 0 || dims.head_dim == 0) {
    throw ConfigError("fusion dimensions d, heads and head_dim must be positive");
  }
  if (dims.heads * dims.head_dim != dims.d) {
    throw ConfigError("heads * head_dim must equal d (" + std::to_string(dims.heads) + " * " +
                      std::to_string(dims.head_dim) + " != " + std::to_string(dims.d) + ")");
  }
}

void validate(const AblationFlags& flags) {
  if (flags.drop_exp && flags.drop_org) {
    throw ConfigError("drop_exp and drop_org together leave no text stream to fuse");
  }
}

FusionParams FusionParams::init(const FusionDims& dims, Rng& rng) {
  validate(dims);
  FusionParams p;
  p.dims = dims;
  const std::size_t d = dims.d;
  p.u = make("fusion.u", 1, d, rng);
  p.v = make("fusion.v", 1, d, rng);
  p.org = make_stream("org", dims, rng);
  p.exp = make_stream("exp", dims, rng);
  p.pred = make_stream("pred", dims, rng);
  p.uni = make_stream("uni", dims, rng);
  p.wo_uni = make("fusion.wo_uni", dims.heads * dims.head_dim, d, rng);
  p.wo_cross = make("fusion.wo_cross", dims.heads * dims.head_dim, d, rng);
  if (p.has_pred()) p.w_pred = make("fusion.w_pred", dims.r * dims.c, d, rng);
  p.lin_uni_w = make("fusion.lin_uni_w", 2 * d, d, rng);
  p.lin_uni_b = Parameter("fusion.lin_uni_b", Matrix(1, d));
  p.lin_cross_w = make("fusion.lin_cross_w", 2 * d, d, rng);
  p.lin_cross_b = Parameter("fusion.lin_cross_b", Matrix(1, d));
  return p;
}

num::ParamRefs FusionParams::refs() {
  num::ParamRefs out = {&u, &v};
  for (StreamWeights* s : {&org, &exp, &pred, &uni}) {
    out.push_back(&s->wq);
    out.push_back(&s->wk);
    out.push_back(&s->wv);
  }
  out.push_back(&wo_uni);
  out.push_back(&wo_cross);
  if (has_pred()) out.push_back(&w_pred);
  for (Parameter* q : {&lin_uni_w, &lin_uni_b, &lin_cross_w, &lin_cross_b}) out.push_back(q);
  return out;
}

BoundFusion bind(Tape& tape, FusionParams& p) {
  BoundFusion b;
  b.params = &p;
  b.u = tape.parameter(p.u);
  b.v = tape.parameter(p.v);
  b.org = bind_stream(tape, p.org);
  b.exp = bind_stream(tape, p.exp);
  b.pred = bind_stream(tape, p.pred);
  b.uni = bind_stream(tape, p.uni);
  b.wo_uni = tape.parameter(p.wo_uni);
  b.wo_cross = tape.parameter(p.wo_cross);
  if (p.has_pred()) b.w_pred = tape.parameter(p.w_pred);
  b.lin_uni_w = tape.parameter(p.lin_uni_w);
  b.lin_uni_b = tape.parameter(p.lin_uni_b);
  b.lin_cross_w = tape.parameter(p.lin_cross_w);
  b.lin_cross_b = tape.parameter(p.lin_cross_b);
  return b;
}

Var pool(Var tokens, Var w) {
  if (tokens.rows() == 0) throw DomainError("pool: no token rows");
  if (tokens.cols() != w.cols() || w.rows() != 1) {
    throw ShapeError("pool: tokens " + num::shape_string(tokens.value()) + " vs weight " +
                     num::shape_string(w.value()));
  }
  const Var alpha = softmax_rows(matmul_nt(w, tokens));  // 1×m
  return matmul(alpha, tokens);
}

Var mha_fuse(Var a, Var b, const BoundStream& sa, const BoundStream& sb, Var wo, std::size_t heads,
             std::size_t head_dim, std::vector<std::array<double, 2>>* trace, bool single_stream) {
  Tape& tape = *a.tape;
  if (a.rows() != 1 || b.rows() != 1 || a.cols() != b.cols()) {
    throw ShapeError("mha_fuse: inputs " + num::shape_string(a.value()) + " and " + num::shape_string(b.value()));
  }
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim));
  const Var va = matmul(a, sa.wv);
  if (single_stream) {
    // One key: every head's weight is exactly 1, so the output is v_a.
    for (std::size_t h = 0; h < heads; ++h) {
      if (trace) trace->push_back({1.0, 0.0});
    }
    return matmul(va, wo);
  }
  const Var q = matmul(a, sa.wq) + matmul(b, sb.wq);
  const Var ka = matmul(a, sa.wk);
  const Var kb = matmul(b, sb.wk);
  const Var vb = matmul(b, sb.wv);
  std::vector<Var> outs;
  outs.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    const std::size_t c0 = h * head_dim;
    const Var keys[] = {slice_cols(ka, c0, head_dim), slice_cols(kb, c0, head_dim)};
    const Var values[] = {slice_cols(va, c0, head_dim), slice_cols(vb, c0, head_dim)};
    const Var attn = softmax_rows(scale(matmul_nt(slice_cols(q, c0, head_dim), tape.concat_rows(keys)), inv_sqrt));
    if (trace) trace->push_back({attn.value()[0], attn.value()[1]});
    outs.push_back(matmul(attn, tape.concat_rows(values)));
  }
  return matmul(tape.concat_cols(outs), wo);
}

std::vector<std::size_t> symbolize(const std::string& s, const std::vector<std::string>& symbols,
                                   std::size_t* oov) {
  std::vector<std::size_t> out;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t best = symbols.size(), best_len = 0;
    for (std::size_t k = 0; k < symbols.size(); ++k) {
      const std::string& sym = symbols[k];
      if (sym.size() > best_len && s.compare(i, sym.size(), sym) == 0) {
        best = k;
        best_len = sym.size();
      }
    }
    if (best == symbols.size()) {
      if (oov) ++*oov;
      ++i;
    } else {
      out.push_back(best);
      i += best_len;
    }
  }
  return out;
}

PredictionEncoding encode_predictions(const std::vector<std::string>& ranked_smiles,
                                      const std::vector<std::string>& symbols, std::size_t r) {
  const std::size_t c = symbols.size();
  PredictionEncoding enc{Matrix(1, r * c), 0};
  for (std::size_t slot = 0; slot < r && slot < ranked_smiles.size(); ++slot) {
    for (std::size_t k : symbolize(ranked_smiles[slot], symbols, &enc.oov)) enc.multi_hot[slot * c + k] = 1.0;
  }
  return enc;
}

FusionVars fuse(const BoundFusion& b, Var y_org, Var y_exp, Var y_pred, const AblationFlags& flags,
                AttentionTrace* trace) {
  validate(flags);
  Tape& tape = *y_org.tape;
  const FusionDims& dims = b.params->dims;
  FusionVars out{y_org, y_exp, y_pred, {}, {}};
  auto* t1 = trace ? &trace->layer1 : nullptr;
  auto* t2 = trace ? &trace->layer2 : nullptr;

  if (flags.linear_fuse) {
    const Var zero = tape.constant(Matrix(1, dims.d));
    const Var parts[] = {flags.drop_org ? zero : y_org, flags.drop_exp ? zero : y_exp};
    out.y_uni = add_row(matmul(tape.concat_cols(parts), b.lin_uni_w), b.lin_uni_b);
  } else if (flags.drop_exp) {
    out.y_uni = mha_fuse(y_org, y_org, b.org, b.org, b.wo_uni, dims.heads, dims.head_dim, t1, true);
  } else if (flags.drop_org) {
    const std::size_t first = t1 ? t1->size() : 0;
    out.y_uni = mha_fuse(y_exp, y_exp, b.exp, b.exp, b.wo_uni, dims.heads, dims.head_dim, t1, true);
    if (t1) {
      for (std::size_t i = first; i < t1->size(); ++i) (*t1)[i] = {0.0, 1.0};
    }
  } else {
    out.y_uni = mha_fuse(y_org, y_exp, b.org, b.exp, b.wo_uni, dims.heads, dims.head_dim, t1);
  }

  if (!b.params->has_pred() || flags.drop_pred) {
    out.y_cross = out.y_uni;
  } else if (flags.linear_fuse) {
    const Var parts[] = {out.y_uni, y_pred};
    out.y_cross = add_row(matmul(tape.concat_cols(parts), b.lin_cross_w), b.lin_cross_b);
  } else {
    out.y_cross = mha_fuse(out.y_uni, y_pred, b.uni, b.pred, b.wo_cross, dims.heads, dims.head_dim, t2);
  }
  return out;
}

FusionVars forward(Tape& tape, const BoundFusion& b, const FusionInput& input, const AblationFlags& flags,
                   AttentionTrace* trace) {
  const FusionDims& dims = b.params->dims;
  const Var y_org = pool(tape.constant(input.h_org), b.v);
  const Var y_exp = pool(tape.constant(input.h_exp), b.u);
  Var y_pred;
  if (b.params->has_pred()) {
    if (input.pred_multi_hot.rows() != 1 || input.pred_multi_hot.cols() != dims.r * dims.c) {
      throw ShapeError("prediction encoding is " + num::shape_string(input.pred_multi_hot) + ", expected 1x" +
                       std::to_string(dims.r * dims.c));
    }
    y_pred = matmul(tape.constant(input.pred_multi_hot), b.w_pred);
  } else {
    y_pred = tape.constant(Matrix(1, dims.d));
  }
  return fuse(b, y_org, y_exp, y_pred, flags, trace);
}

FusionOutput cross_modal(FusionParams& params, const FusionInput& input, const AblationFlags& flags) {
  Tape tape(false);
  const BoundFusion b = bind(tape, params);
  FusionOutput out;
  const FusionVars v = forward(tape, b, input, flags, &out.trace);
  out.y_org = row_of(tape, v.y_org);
  out.y_exp = row_of(tape, v.y_exp);
  out.y_pred = row_of(tape, v.y_pred);
  out.y_uni = row_of(tape, v.y_uni);
  out.y_cross = row_of(tape, v.y_cross);
  return out;
}

FusionOutput cross_modal_vectors(FusionParams& params, const std::vector<double>& y_org,
                                 const std::vector<double>& y_exp, const std::vector<double>& y_pred,
                                 const AblationFlags& flags) {
  Tape tape(false);
  const BoundFusion b = bind(tape, params);
  FusionOutput out;
  const FusionVars v = fuse(b, tape.constant(Matrix::row_vector(y_org)), tape.constant(Matrix::row_vector(y_exp)),
                            tape.constant(Matrix::row_vector(y_pred)), flags, &out.trace);
  out.y_org = y_org;
  out.y_exp = y_exp;
  out.y_pred = y_pred;
  out.y_uni = row_of(tape, v.y_uni);
  out.y_cross = row_of(tape, v.y_cross);
  return out;
}

std::vector<double> pool_values(const Matrix& tokens, const std::vector<double>& w) {
  Tape tape(false);
  return row_of(tape, pool(tape.constant(tokens), tape.constant(Matrix::row_vector(w))));
}

}  // namespace molgen::fusion
