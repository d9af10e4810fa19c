#include "molgen/decoder/model.hpp"

#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "molgen/error.hpp"
#include "molgen/numcore/checkpoint.hpp"

namespace molgen::decoder {
namespace {

using num::Matrix;
using num::Tape;
using num::Var;

std::size_t to_count(const std::map<std::string, std::string>& meta, const std::string& key) {
  const auto it = meta.find(key);
  if (it == meta.end()) throw DataError("checkpoint metadata lacks '" + key + "'");
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
    throw DataError("checkpoint metadata '" + key + "' is not a count: " + it->second);
  }
}

bool to_flag(const std::map<std::string, std::string>& meta, const std::string& key) {
  const std::size_t v = to_count(meta, key);
  if (v > 1) throw DataError("checkpoint metadata '" + key + "' must be 0 or 1");
  return v == 1;
}

}  // namespace

std::string to_string(Direction direction) {
  return direction == Direction::kText2Mol ? "text2mol" : "mol2text";
}

Direction parse_direction(const std::string& name) {
  if (name == "text2mol") return Direction::kText2Mol;
  if (name == "mol2text") return Direction::kMol2Text;
  throw ConfigError("unknown task direction '" + name + "' (expected text2mol or mol2text)");
}

Model Model::init(Direction direction, Vocab vocab, const ModelDims& dims, const fusion::AblationFlags& flags,
                  std::uint64_t seed) {
  fusion::validate(flags);
  Model m;
  m.direction = direction;
  m.flags = flags;
  fusion::FusionDims fd{dims.d, dims.heads, dims.head_dim, 0, 0};
  if (direction == Direction::kText2Mol) {
    fd.r = dims.r;
    fd.c = dims.r > 0 ? vocab.symbols().size() : 0;
  }
  const DecoderDims dd{dims.d, dims.heads, dims.head_dim, dims.layers, dims.ffn_mult, vocab.size(), dims.max_len};
  m.vocab = std::move(vocab);
  Rng rng(seed);
  m.fusion = fusion::FusionParams::init(fd, rng);
  m.decoder = DecoderParams::init(dd, rng);
  return m;
}

ModelDims Model::dims() const {
  const DecoderDims& dd = decoder.dims;
  return {dd.d, dd.heads, dd.head_dim, dd.layers, dd.ffn_mult, dd.max_len, fusion.dims.r};
}

num::ParamRefs Model::refs() {
  num::ParamRefs out = fusion.refs();
  for (num::Parameter* p : decoder.refs()) out.push_back(p);
  return out;
}

std::vector<int> encode_target(const Vocab& vocab, const std::string& text, std::size_t max_len,
                               std::size_t* unknown, bool* truncated) {
  std::vector<int> out = vocab.encode(text, unknown);
  // BOS plus all but the last target token must fit in max_len positions.
  const bool cut = out.size() >= max_len;
  if (cut) {
    out.resize(max_len);
  } else {
    out.push_back(Vocab::kEos);
  }
  if (truncated) *truncated = cut;
  return out;
}

BoundModel bind(Tape& tape, Model& model) {
  return {&model, fusion::bind(tape, model.fusion), bind(tape, model.decoder)};
}

Var example_logits(const BoundModel& bound, const Example& example) {
  if (example.target.empty()) throw DomainError("example '" + example.id + "' has an empty target");
  Tape& tape = *bound.decoder.tok_emb.tape;
  const fusion::FusionVars fv = fusion::forward(tape, bound.fusion, example.input, bound.model->flags);
  std::vector<int> prefix = {Vocab::kBos};
  prefix.insert(prefix.end(), example.target.begin(), example.target.end() - 1);
  return forward(bound.decoder, fv.y_cross, prefix);
}

Var batch_loss(const BoundModel& bound, std::span<const Example* const> batch) {
  if (batch.empty()) throw DomainError("batch is empty");
  Tape& tape = *bound.decoder.tok_emb.tape;
  std::vector<Var> logits;
  std::vector<int> targets;
  for (const Example* ex : batch) {
    logits.push_back(example_logits(bound, *ex));
    targets.insert(targets.end(), ex->target.begin(), ex->target.end());
  }
  const Var stacked = logits.size() == 1 ? logits.front() : tape.concat_rows(logits);
  return ce_loss(stacked, targets);
}

double mean_loss(Model& model, std::span<const Example> examples, std::size_t batch_size) {
  if (examples.empty()) throw DomainError("mean_loss over no examples");
  double total = 0.0;
  std::size_t tokens = 0;
  for (std::size_t start = 0; start < examples.size(); start += batch_size) {
    const std::size_t end = std::min(examples.size(), start + batch_size);
    Tape tape(false);
    const BoundModel bound = bind(tape, model);
    std::vector<const Example*> batch;
    std::size_t n = 0;
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(&examples[i]);
      for (int t : examples[i].target) n += t != Vocab::kPad;
    }
    total += batch_loss(bound, batch).value()[0] * static_cast<double>(n);
    tokens += n;
  }
  return total / static_cast<double>(tokens);
}

Prediction predict(Model& model, const fusion::FusionInput& input) {
  fusion::FusionOutput out = fusion::cross_modal(model.fusion, input, model.flags);
  const Generation g = generate(model.decoder, out.y_cross, model.decoder.dims.max_len - 1);
  return {model.vocab.decode(g.tokens), g.truncated, std::move(out.trace)};
}

void save_model(const std::filesystem::path& path, Model& model) {
  const ModelDims dims = model.dims();
  num::Checkpoint ck;
  ck.header.d = static_cast<std::uint32_t>(dims.d);
  ck.header.heads = static_cast<std::uint32_t>(dims.heads);
  ck.header.head_dim = static_cast<std::uint32_t>(dims.head_dim);
  ck.header.vocab_size = static_cast<std::uint32_t>(model.vocab.size());
  std::ostringstream meta;
  meta << "direction=" << to_string(model.direction) << "\n"
       << "vocab=" << nlohmann::json(model.vocab.symbols()).dump() << "\n"
       << "layers=" << dims.layers << "\n"
       << "ffn_mult=" << dims.ffn_mult << "\n"
       << "max_len=" << dims.max_len << "\n"
       << "r=" << dims.r << "\n"
       << "drop_exp=" << model.flags.drop_exp << "\n"
       << "drop_org=" << model.flags.drop_org << "\n"
       << "drop_pred=" << model.flags.drop_pred << "\n"
       << "linear_fuse=" << model.flags.linear_fuse << "\n";
  ck.metadata = meta.str();
  for (num::Parameter* p : model.refs()) ck.blocks.push_back({p->name, p->value});
  num::save_checkpoint(path, ck);
}

Model load_model(const std::filesystem::path& path) {
  const num::Checkpoint ck = num::load_checkpoint(path);
  std::map<std::string, std::string> meta;
  std::istringstream in(ck.metadata);
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw DataError(path.string() + ": metadata line without '=': " + line);
    meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (!meta.count("direction") || !meta.count("vocab")) {
    throw DataError(path.string() + ": checkpoint metadata lacks direction or vocab");
  }
  Direction direction;
  try {
    direction = parse_direction(meta["direction"]);
  } catch (const ConfigError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  std::vector<std::string> symbols;
  try {
    symbols = nlohmann::json::parse(meta["vocab"]).get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": unreadable vocabulary: " + e.what());
  }
  ModelDims dims;
  dims.d = ck.header.d;
  dims.heads = ck.header.heads;
  dims.head_dim = ck.header.head_dim;
  dims.layers = to_count(meta, "layers");
  dims.ffn_mult = to_count(meta, "ffn_mult");
  dims.max_len = to_count(meta, "max_len");
  dims.r = to_count(meta, "r");
  const fusion::AblationFlags flags{to_flag(meta, "drop_exp"), to_flag(meta, "drop_org"), to_flag(meta, "drop_pred"),
                                    to_flag(meta, "linear_fuse")};
  Model m;
  try {
    m = Model::init(direction, Vocab::from_symbols(std::move(symbols)), dims, flags, 0);
  } catch (const ConfigError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  if (m.vocab.size() != ck.header.vocab_size) {
    throw DataError(path.string() + ": header vocabulary size " + std::to_string(ck.header.vocab_size) +
                    " disagrees with the stored vocabulary of " + std::to_string(m.vocab.size()));
  }
  const num::ParamRefs refs = m.refs();
  if (refs.size() != ck.blocks.size()) {
    throw DataError(path.string() + ": expected " + std::to_string(refs.size()) + " weight blocks, found " +
                    std::to_string(ck.blocks.size()));
  }
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const num::NamedBlock& b = ck.blocks[i];
    if (b.name != refs[i]->name) {
      throw DataError(path.string() + ": block " + std::to_string(i) + " is '" + b.name + "', expected '" +
                      refs[i]->name + "'");
    }
    if (b.value.rows() != refs[i]->value.rows() || b.value.cols() != refs[i]->value.cols()) {
      throw DataError(path.string() + ": block '" + b.name + "' is " + num::shape_string(b.value) +
                      ", expected " + num::shape_string(refs[i]->value));
    }
    refs[i]->value = b.value;
  }
  return m;
}

}  // namespace molgen::decoder
