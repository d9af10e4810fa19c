#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "molgen/numcore/tape.hpp"
#include "molgen/rng.hpp"

namespace molgen::decoder {

struct DecoderDims {
  std::size_t d = 128;
  std::size_t heads = 4;
  std::size_t head_dim = 32;
  std::size_t layers = 2;
  std::size_t ffn_mult = 4;
  std::size_t vocab = 0;
  std::size_t max_len = 128;  // longest prefix, BOS included

  bool operator==(const DecoderDims&) const = default;
};

void validate(const DecoderDims& dims);

// Pre-norm block: causal self-attention, cross-attention over the one-slot
// memory, feed-forward d -> ffn_mult*d -> d, each on a residual branch.
//
// With a single memory slot the cross-attention weight is exactly 1 for every
// query, so its output is mem·Wv·Wo at every position. The query and key
// projections (and the norm feeding the query) cannot affect the result and
// are not materialized.
struct Block {
  num::Parameter ln1_g, ln1_b;
  num::Parameter wq, wk, wv, wo;  // d×d, heads split by columns
  num::Parameter cross_wv, cross_wo;
  num::Parameter ln2_g, ln2_b;
  num::Parameter w1, b1, w2, b2;
};

struct DecoderParams {
  DecoderDims dims;
  num::Parameter tok_emb;  // vocab×d
  std::vector<Block> blocks;
  num::Parameter lnf_g, lnf_b;
  num::Parameter w_out, b_out;  // d×vocab, 1×vocab

  static DecoderParams init(const DecoderDims& dims, Rng& rng);
  num::ParamRefs refs();
};

// Fixed sinusoidal table, rows = positions.
num::Matrix positional_encoding(std::size_t rows, std::size_t d);

struct BoundBlock {
  num::Var ln1_g, ln1_b, wq, wk, wv, wo, cross_wv, cross_wo, ln2_g, ln2_b, w1, b1, w2, b2;
};

struct BoundDecoder {
  const DecoderParams* params;
  num::Var tok_emb, lnf_g, lnf_b, w_out, b_out;
  std::vector<BoundBlock> blocks;
  num::Matrix positions;
};

BoundDecoder bind(num::Tape& tape, DecoderParams& params);

// Logits (|prefix|×vocab); row t scores the token after prefix[t]. memory is
// the 1×d conditioning vector. DomainError for an empty or over-long prefix
// or an index outside the vocabulary.
num::Var forward(const BoundDecoder& bound, num::Var memory, std::span<const int> prefix);

// Mean of -log p(target) over positions whose target is not PAD.
// DomainError when every target is PAD.
num::Var ce_loss(num::Var logits, std::span<const int> targets);

struct Generation {
  std::vector<int> tokens;  // without BOS and EOS
  bool truncated = false;   // hit max_len before EOS
};

// Greedy decoding from BOS until EOS or max_len; ties go to the lowest index.
Generation generate(DecoderParams& params, const std::vector<double>& memory, std::size_t max_len);

}  // namespace molgen::decoder
