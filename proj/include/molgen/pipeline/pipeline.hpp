#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "molgen/dataset/corpus.hpp"
#include "molgen/decoder/model.hpp"
#include "molgen/embeddings/embeddings.hpp"
#include "molgen/llmclient/client.hpp"
#include "molgen/pipeline/config.hpp"

namespace molgen::pipeline {

// One line of a predictions file. A failed query or an unparseable response
// keeps its id with no candidates and a non-empty `warning`.
struct PredictionRecord {
  std::string id;
  std::vector<std::string> ranked_smiles;
  std::string explanation;
  std::string warning;

  bool operator==(const PredictionRecord&) const = default;
};

std::string prediction_to_json(const PredictionRecord& record);
PredictionRecord prediction_from_json(const std::string& line);  // DataError when malformed
void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRecord>& records);
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);
std::map<std::string, PredictionRecord> by_id(const std::vector<PredictionRecord>& records);

const std::vector<data::TextMoleculePair>& split_records(const data::Corpus& corpus, const std::string& split);
std::filesystem::path predictions_path(const RunConfig& rc, const std::string& split);

// Provider chosen by the config. Live mode reads the credential here, before
// any request. Replay and stub never open a connection.
std::unique_ptr<llm::LlmProvider> make_provider(const RunConfig& rc);
std::unique_ptr<emb::EmbeddingProvider> make_embedding_provider(const RunConfig& rc);

struct LlmRun {
  std::vector<PredictionRecord> records;
  std::size_t warnings = 0;
  std::size_t requests = 0;
};

// Samples demonstrations from the train split for every query, builds the
// prompts, queries the provider and parses the answers. Queries from the
// train split never see themselves as a demonstration.
LlmRun run_llm(const RunConfig& rc, const data::Corpus& corpus, const std::vector<data::TextMoleculePair>& queries,
               llm::LlmProvider& provider, llm::ReplayLog* log = nullptr);

// Output vocabulary for the direction, built from the train split.
decoder::Vocab build_vocab(decoder::Direction direction, const std::vector<data::TextMoleculePair>& train);

struct ExampleStats {
  std::size_t missing_predictions = 0;
  std::size_t empty_explanations = 0;
  std::size_t unknown_symbols = 0;
  std::size_t truncated_targets = 0;
  std::size_t prediction_oov = 0;
};

// Inputs and targets for each pair. For text2mol the original stream embeds
// the description and the target is the SMILES; for mol2text it is the other
// way round and the prediction stream is unused. An explanation without word
// tokens becomes a single zero row.
std::vector<decoder::Example> build_examples(const decoder::Model& model,
                                             const std::vector<data::TextMoleculePair>& pairs,
                                             const std::map<std::string, PredictionRecord>& predictions,
                                             const emb::EmbeddingProvider& embeddings, ExampleStats* stats = nullptr);

std::string reference_of(decoder::Direction direction, const data::TextMoleculePair& pair);

}  // namespace molgen::pipeline
