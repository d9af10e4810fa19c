#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "molgen/numcore/tape.hpp"
#include "molgen/rng.hpp"

namespace molgen::fusion {

struct FusionDims {
  std::size_t d = 128;
  std::size_t heads = 4;
  std::size_t head_dim = 32;
  std::size_t r = 4;  // prediction slots; 0 disables the prediction stream
  std::size_t c = 0;  // symbols per slot

  bool operator==(const FusionDims&) const = default;
};

// ConfigError unless every size is positive (r and c may both be 0) and
// heads * head_dim == d.
void validate(const FusionDims& dims);

struct AblationFlags {
  bool drop_exp = false;
  bool drop_org = false;
  bool drop_pred = false;
  bool linear_fuse = false;

  bool operator==(const AblationFlags&) const = default;
};

// ConfigError when both text streams are dropped.
void validate(const AblationFlags& flags);

// Per-head projections for one stream. Head h owns columns
// [h*head_dim, (h+1)*head_dim) of each d×(heads*head_dim) block, so a block is
// the column-wise concatenation of the per-head matrices.
struct StreamWeights {
  num::Parameter wq, wk, wv;
};

struct FusionParams {
  FusionDims dims;
  num::Parameter u;  // 1×d, pools the explanation tokens
  num::Parameter v;  // 1×d, pools the original-text tokens
  StreamWeights org, exp, pred, uni;
  num::Parameter wo_uni, wo_cross;  // (heads*head_dim)×d
  num::Parameter w_pred;            // (r*c)×d, absent when r*c == 0
  // Two-stage affine replacement used by the linear_fuse ablation.
  num::Parameter lin_uni_w, lin_uni_b, lin_cross_w, lin_cross_b;

  static FusionParams init(const FusionDims& dims, Rng& rng);
  bool has_pred() const { return dims.r * dims.c > 0; }
  num::ParamRefs refs();
};

// Per-head attention rows of both layers. Layer 2 is empty when the
// prediction stream is not used. A dropped stream gets weight 0.
struct AttentionTrace {
  std::vector<std::array<double, 2>> layer1;
  std::vector<std::array<double, 2>> layer2;
};

// Parameters bound as leaves of one tape, so a batch shares them.
struct BoundStream {
  num::Var wq, wk, wv;
};

struct BoundFusion {
  const FusionParams* params;
  num::Var u, v;
  BoundStream org, exp, pred, uni;
  num::Var wo_uni, wo_cross, w_pred;
  num::Var lin_uni_w, lin_uni_b, lin_cross_w, lin_cross_b;
};

BoundFusion bind(num::Tape& tape, FusionParams& params);

// softmax(w·h_iᵀ) weighted sum of the rows of tokens (m×d) with w (1×d).
num::Var pool(num::Var tokens, num::Var w);

// Two-key multi-head attention fusing a and b (each 1×d). Each head uses the
// summed query (q_a + q_b) against keys [k_a; k_b] scaled by 1/sqrt(head_dim),
// mixes [v_a; v_b], and the concatenated heads are projected by wo.
// With single_stream set, a attends over its own key alone.
num::Var mha_fuse(num::Var a, num::Var b, const BoundStream& sa, const BoundStream& sb, num::Var wo,
                  std::size_t heads, std::size_t head_dim, std::vector<std::array<double, 2>>* trace,
                  bool single_stream = false);

struct PredictionEncoding {
  num::Matrix multi_hot;  // 1×(r*c)
  std::size_t oov = 0;    // characters matching no symbol
};

// Splits s into symbols by greedy longest match. Characters matching no
// symbol are skipped and counted.
std::vector<std::size_t> symbolize(const std::string& s, const std::vector<std::string>& symbols,
                                   std::size_t* oov = nullptr);

// Slot k (k < r) holds the multi-hot bag of symbols of candidate k; missing
// candidates leave their slot zero.
PredictionEncoding encode_predictions(const std::vector<std::string>& ranked_smiles,
                                      const std::vector<std::string>& symbols, std::size_t r);

struct FusionInput {
  num::Matrix h_org;           // n×d
  num::Matrix h_exp;           // m×d
  num::Matrix pred_multi_hot;  // 1×(r*c); ignored without a prediction stream
};

struct FusionVars {
  num::Var y_org, y_exp, y_pred, y_uni, y_cross;
};

// Full composition on the tape. Without a prediction stream (r*c == 0, as in
// mol2text) or with drop_pred, y_cross is the same node as y_uni.
FusionVars forward(num::Tape& tape, const BoundFusion& bound, const FusionInput& input,
                   const AblationFlags& flags, AttentionTrace* trace = nullptr);

struct FusionOutput {
  std::vector<double> y_org, y_exp, y_pred, y_uni, y_cross;
  AttentionTrace trace;
};

// Both attention layers on already pooled vectors.
FusionVars fuse(const BoundFusion& bound, num::Var y_org, num::Var y_exp, num::Var y_pred,
                const AblationFlags& flags, AttentionTrace* trace = nullptr);

// Evaluation-only spelling of forward(): no gradients are recorded.
FusionOutput cross_modal(FusionParams& params, const FusionInput& input, const AblationFlags& flags);

// Same as cross_modal but starting from pooled vectors.
FusionOutput cross_modal_vectors(FusionParams& params, const std::vector<double>& y_org,
                                 const std::vector<double>& y_exp, const std::vector<double>& y_pred,
                                 const AblationFlags& flags);

// Evaluation-only pooling of a token matrix.
std::vector<double> pool_values(const num::Matrix& tokens, const std::vector<double>& w);

}  // namespace molgen::fusion
