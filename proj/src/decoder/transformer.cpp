#include "molgen/decoder/transformer.hpp"

#include <cmath>

#include "molgen/error.hpp"
#include "molgen/numcore/optim.hpp"

namespace molgen::decoder {
namespace {

using num::Matrix;
using num::Parameter;
using num::Tape;
using num::Var;

constexpr double kLayerNormEps = 1e-5;

Parameter glorot(const std::string& name, std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  num::glorot_uniform(m, rng);
  return Parameter(name, std::move(m));
}

Parameter filled(const std::string& name, std::size_t rows, std::size_t cols, double value) {
  return Parameter(name, Matrix(rows, cols, value));
}

}  // namespace

void validate(const DecoderDims& dims) {
  if (dims.d == 0 || dims.heads == 0 || dims.head_dim == 0 || dims.layers == 0 || dims.ffn_mult == 0) {
    throw ConfigError("decoder dimensions must be positive");
  }
  if (dims.heads * dims.head_dim != dims.d) {
    throw ConfigError("decoder heads * head_dim must equal d (" + std::to_string(dims.heads) + " * " +
                      std::to_string(dims.head_dim) + " != " + std::to_string(dims.d) + ")");
  }
  if (dims.vocab < 5) throw ConfigError("decoder vocabulary must hold the reserved symbols and at least one more");
  if (dims.max_len < 2) throw ConfigError("decoder max_len must be at least 2");
}

DecoderParams DecoderParams::init(const DecoderDims& dims, Rng& rng) {
  validate(dims);
  DecoderParams p;
  p.dims = dims;
  const std::size_t d = dims.d, f = dims.ffn_mult * dims.d;
  p.tok_emb = glorot("decoder.tok_emb", dims.vocab, d, rng);
  for (std::size_t l = 0; l < dims.layers; ++l) {
    const std::string pre = "decoder.block" + std::to_string(l) + ".";
    Block b;
    b.ln1_g = filled(pre + "ln1_g", 1, d, 1.0);
    b.ln1_b = filled(pre + "ln1_b", 1, d, 0.0);
    b.wq = glorot(pre + "wq", d, d, rng);
    b.wk = glorot(pre + "wk", d, d, rng);
    b.wv = glorot(pre + "wv", d, d, rng);
    b.wo = glorot(pre + "wo", d, d, rng);
    b.cross_wv = glorot(pre + "cross_wv", d, d, rng);
    b.cross_wo = glorot(pre + "cross_wo", d, d, rng);
    b.ln2_g = filled(pre + "ln2_g", 1, d, 1.0);
    b.ln2_b = filled(pre + "ln2_b", 1, d, 0.0);
    b.w1 = glorot(pre + "w1", d, f, rng);
    b.b1 = filled(pre + "b1", 1, f, 0.0);
    b.w2 = glorot(pre + "w2", f, d, rng);
    b.b2 = filled(pre + "b2", 1, d, 0.0);
    p.blocks.push_back(std::move(b));
  }
  p.lnf_g = filled("decoder.lnf_g", 1, d, 1.0);
  p.lnf_b = filled("decoder.lnf_b", 1, d, 0.0);
  p.w_out = glorot("decoder.w_out", d, dims.vocab, rng);
  p.b_out = filled("decoder.b_out", 1, dims.vocab, 0.0);
  return p;
}

num::ParamRefs DecoderParams::refs() {
  num::ParamRefs out = {&tok_emb};
  for (Block& b : blocks) {
    for (Parameter* q : {&b.ln1_g, &b.ln1_b, &b.wq, &b.wk, &b.wv, &b.wo, &b.cross_wv, &b.cross_wo, &b.ln2_g,
                         &b.ln2_b, &b.w1, &b.b1, &b.w2, &b.b2}) {
      out.push_back(q);
    }
  }
  for (Parameter* q : {&lnf_g, &lnf_b, &w_out, &b_out}) out.push_back(q);
  return out;
}

Matrix positional_encoding(std::size_t rows, std::size_t d) {
  Matrix pe(rows, d);
  for (std::size_t t = 0; t < rows; ++t) {
    for (std::size_t i = 0; i < d; ++i) {
      const double angle =
          static_cast<double>(t) * std::pow(10000.0, -static_cast<double>(i - i % 2) / static_cast<double>(d));
      pe(t, i) = i % 2 == 0 ? std::sin(angle) : std::cos(angle);
    }
  }
  return pe;
}

BoundDecoder bind(Tape& tape, DecoderParams& p) {
  BoundDecoder b;
  b.params = &p;
  b.tok_emb = tape.parameter(p.tok_emb);
  for (Block& blk : p.blocks) {
    b.blocks.push_back({tape.parameter(blk.ln1_g), tape.parameter(blk.ln1_b), tape.parameter(blk.wq),
                        tape.parameter(blk.wk), tape.parameter(blk.wv), tape.parameter(blk.wo),
                        tape.parameter(blk.cross_wv), tape.parameter(blk.cross_wo), tape.parameter(blk.ln2_g),
                        tape.parameter(blk.ln2_b), tape.parameter(blk.w1), tape.parameter(blk.b1),
                        tape.parameter(blk.w2), tape.parameter(blk.b2)});
  }
  b.lnf_g = tape.parameter(p.lnf_g);
  b.lnf_b = tape.parameter(p.lnf_b);
  b.w_out = tape.parameter(p.w_out);
  b.b_out = tape.parameter(p.b_out);
  b.positions = positional_encoding(p.dims.max_len, p.dims.d);
  return b;
}

Var forward(const BoundDecoder& b, Var memory, std::span<const int> prefix) {
  const DecoderDims& dims = b.params->dims;
  Tape& tape = *memory.tape;
  const std::size_t t = prefix.size();
  if (t == 0) throw DomainError("decoder prefix is empty");
  for (int idx : prefix) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= dims.vocab) {
      throw DomainError("decoder prefix index " + std::to_string(idx) + " outside vocabulary");
    }
  }
  if (t > dims.max_len) {
    throw DomainError("decoder prefix of " + std::to_string(t) + " tokens exceeds max_len " +
                      std::to_string(dims.max_len));
  }
  if (memory.rows() != 1 || memory.cols() != dims.d) {
    throw ShapeError("decoder memory is " + num::shape_string(memory.value()) + ", expected 1x" +
                     std::to_string(dims.d));
  }
  Matrix pos(t, dims.d);
  std::copy(b.positions.data().begin(), b.positions.data().begin() + static_cast<std::ptrdiff_t>(t * dims.d),
            pos.data().begin());
  Var x = tape.add(tape.gather_rows(b.tok_emb, prefix), tape.constant(std::move(pos)));
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(dims.head_dim));
  std::vector<Var> heads(dims.heads);
  for (const BoundBlock& blk : b.blocks) {
    const Var h = tape.layer_norm_rows(x, blk.ln1_g, blk.ln1_b, kLayerNormEps);
    const Var q = tape.matmul(h, blk.wq), k = tape.matmul(h, blk.wk), v = tape.matmul(h, blk.wv);
    for (std::size_t i = 0; i < dims.heads; ++i) {
      const std::size_t c0 = i * dims.head_dim;
      const Var scores = tape.scale(
          tape.matmul_nt(tape.slice_cols(q, c0, dims.head_dim), tape.slice_cols(k, c0, dims.head_dim)), inv_sqrt);
      heads[i] = tape.matmul(tape.softmax_rows(scores, true), tape.slice_cols(v, c0, dims.head_dim));
    }
    x = tape.add(x, tape.matmul(tape.concat_cols(heads), blk.wo));
    x = tape.add_row(x, tape.matmul(tape.matmul(memory, blk.cross_wv), blk.cross_wo));
    const Var h2 = tape.layer_norm_rows(x, blk.ln2_g, blk.ln2_b, kLayerNormEps);
    const Var ff = tape.gelu(tape.add_row(tape.matmul(h2, blk.w1), blk.b1));
    x = tape.add(x, tape.add_row(tape.matmul(ff, blk.w2), blk.b2));
  }
  return tape.add_row(tape.matmul(tape.layer_norm_rows(x, b.lnf_g, b.lnf_b, kLayerNormEps), b.w_out), b.b_out);
}

Var ce_loss(Var logits, std::span<const int> targets) {
  return logits.tape->cross_entropy(logits, targets, /*ignore_index=*/0);
}

Generation generate(DecoderParams& params, const std::vector<double>& memory, std::size_t max_len) {
  Tape tape(false);
  const BoundDecoder b = bind(tape, params);
  const Var mem = tape.constant(Matrix::row_vector(memory));
  const std::size_t limit = std::min(max_len, params.dims.max_len - 1);
  std::vector<int> prefix = {1};  // BOS
  Generation g;
  while (true) {
    if (g.tokens.size() >= limit) {
      g.truncated = true;
      break;
    }
    const Var logits = forward(b, mem, prefix);
    const auto last = logits.value().row(prefix.size() - 1);
    int best = 0;
    for (std::size_t c = 1; c < last.size(); ++c) {
      if (last[c] > last[best]) best = static_cast<int>(c);
    }
    if (best == 2) break;  // EOS
    g.tokens.push_back(best);
    prefix.push_back(best);
  }
  return g;
}

}  // namespace molgen::decoder
