#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "molgen/decoder/transformer.hpp"
#include "molgen/decoder/vocab.hpp"
#include "molgen/fusion/fusion.hpp"

namespace molgen::decoder {

enum class Direction { kText2Mol, kMol2Text };

std::string to_string(Direction direction);
// ConfigError for anything but "text2mol" or "mol2text".
Direction parse_direction(const std::string& name);

struct ModelDims {
  std::size_t d = 128;
  std::size_t heads = 4;
  std::size_t head_dim = 32;
  std::size_t layers = 2;
  std::size_t ffn_mult = 4;
  std::size_t max_len = 128;
  std::size_t r = 4;  // ignored for mol2text, which has no prediction stream
};

// Fusion encoder plus conditioned decoder. For text2mol the prediction
// encoder reads candidates against the content symbols of `vocab`, so
// c = vocab.symbols().size().
struct Model {
  Direction direction = Direction::kText2Mol;
  Vocab vocab;
  fusion::AblationFlags flags;
  fusion::FusionParams fusion;
  DecoderParams decoder;

  static Model init(Direction direction, Vocab vocab, const ModelDims& dims, const fusion::AblationFlags& flags,
                    std::uint64_t seed);
  ModelDims dims() const;
  num::ParamRefs refs();
};

struct Example {
  std::string id;
  fusion::FusionInput input;
  std::vector<int> target;  // content tokens, then EOS unless truncated
};

// Encodes a target string and appends EOS. A target of max_len or more
// symbols is cut to max_len with no EOS. Unknown symbols are counted.
std::vector<int> encode_target(const Vocab& vocab, const std::string& text, std::size_t max_len,
                               std::size_t* unknown = nullptr, bool* truncated = nullptr);

struct BoundModel {
  Model* model;
  fusion::BoundFusion fusion;
  BoundDecoder decoder;
};

BoundModel bind(num::Tape& tape, Model& model);

// Teacher-forced logits of one example (|target|×vocab).
num::Var example_logits(const BoundModel& bound, const Example& example);

// Cross-entropy over the stacked target positions of every example, so each
// token carries equal weight. Empty batches are a DomainError.
num::Var batch_loss(const BoundModel& bound, std::span<const Example* const> batch);

// Token-weighted mean loss without recording gradients.
double mean_loss(Model& model, std::span<const Example> examples, std::size_t batch_size = 32);

struct Prediction {
  std::string text;
  bool truncated = false;
  fusion::AttentionTrace trace;
};

Prediction predict(Model& model, const fusion::FusionInput& input);

// Checkpoint blocks are the parameter blocks by name; metadata records the
// direction, vocabulary, decoder shape and ablation flags.
void save_model(const std::filesystem::path& path, Model& model);
// DataError for a malformed file or a block whose shape disagrees.
Model load_model(const std::filesystem::path& path);

}  // namespace molgen::decoder
