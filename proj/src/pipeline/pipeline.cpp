#include "molgen/pipeline/pipeline.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "molgen/error.hpp"
#include "molgen/hash.hpp"
#include "molgen/llmclient/response.hpp"
#include "molgen/prompting/prompt.hpp"

namespace molgen::pipeline {

using nlohmann::json;

std::string prediction_to_json(const PredictionRecord& r) {
  json j = {{"id", r.id}, {"ranked_smiles", r.ranked_smiles}, {"explanation", r.explanation}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j.dump();
}

PredictionRecord prediction_from_json(const std::string& line) {
  try {
    const json j = json::parse(line);
    PredictionRecord r;
    r.id = j.at("id").get<std::string>();
    r.ranked_smiles = j.at("ranked_smiles").get<std::vector<std::string>>();
    r.explanation = j.at("explanation").get<std::string>();
    if (j.contains("warning")) r.warning = j.at("warning").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed prediction record: ") + e.what());
  }
}

void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  for (const auto& r : records) out << prediction_to_json(r) << "\n";
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read predictions file " + path.string() + " (run run-llm first)");
  std::vector<PredictionRecord> out;
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (line.empty()) continue;
    try {
      out.push_back(prediction_from_json(line));
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::map<std::string, PredictionRecord> by_id(const std::vector<PredictionRecord>& records) {
  std::map<std::string, PredictionRecord> out;
  for (const auto& r : records) out[r.id] = r;
  return out;
}

const std::vector<data::TextMoleculePair>& split_records(const data::Corpus& corpus, const std::string& split) {
  if (split == "train") return corpus.train;
  if (split == "validation") return corpus.validation;
  if (split == "test") return corpus.test;
  throw ConfigError("unknown split '" + split + "'");
}

std::filesystem::path predictions_path(const RunConfig& rc, const std::string& split) {
  return rc.out_dir / ("predictions." + split + ".jsonl");
}

std::unique_ptr<llm::LlmProvider> make_provider(const RunConfig& rc) {
  switch (rc.llm) {
    case LlmMode::kReplay:
      return std::make_unique<llm::ReplayProvider>(rc.replay_log);
    case LlmMode::kLive:
      return std::make_unique<llm::HttpProvider>(rc.provider);
    case LlmMode::kStub:
      break;
  }
  if (rc.llm_stub == "canned") return std::make_unique<llm::CannedProvider>(rc.canned_response);
  return std::make_unique<llm::EchoDemonstrationProvider>(rc.dims.r > 0 ? rc.dims.r : 1);
}

std::unique_ptr<emb::EmbeddingProvider> make_embedding_provider(const RunConfig& rc) {
  if (rc.embeddings == EmbeddingMode::kFile) return std::make_unique<emb::FileProvider>(rc.embedding_dir, rc.dims.d);
  return std::make_unique<emb::StubProvider>(rc.dims.d, rc.embedding_seed);
}

LlmRun run_llm(const RunConfig& rc, const data::Corpus& corpus, const std::vector<data::TextMoleculePair>& queries,
               llm::LlmProvider& provider, llm::ReplayLog* log) {
  const auto& train = corpus.train;
  const bool text2mol = rc.direction == decoder::Direction::kText2Mol;
  const prompting::Direction pdir = text2mol ? prompting::Direction::Text2Mol : prompting::Direction::Mol2Text;
  std::set<std::string> train_ids;
  for (const auto& p : train) train_ids.insert(p.id);

  std::unique_ptr<prompting::TextEmbedder> embedder;
  std::unique_ptr<prompting::TextScaffoldIndex> text_index;
  std::unique_ptr<prompting::MolScaffoldIndex> mol_index;
  if (rc.scaffold && text2mol) {
    if (rc.live_scaffold_embedder) {
      embedder = std::make_unique<llm::HttpTextEmbedder>(rc.embedding_service, rc.embedding_service_dim);
    } else {
      std::vector<std::string> docs;
      for (const auto& p : train) docs.push_back(p.description);
      embedder = std::make_unique<prompting::TfidfEmbedder>(docs);
    }
    text_index = std::make_unique<prompting::TextScaffoldIndex>(train, *embedder);
  } else if (rc.scaffold) {
    mol_index = std::make_unique<prompting::MolScaffoldIndex>(train);
  }

  std::vector<std::string> prompts;
  for (const auto& q : queries) {
    const std::size_t pool = train.size() - train_ids.count(q.id);
    const std::size_t k = std::min(rc.k, pool);
    std::vector<prompting::Demonstration> demos;
    if (text_index) {
      demos = prompting::order_for_prompt(text_index->top_k(q.description, k, q.id));
    } else if (mol_index) {
      demos = prompting::order_for_prompt(mol_index->top_k(q.smiles, k, q.id));
    } else {
      demos = prompting::sample_random(train, k, mix_seed(rc.sample_seed, fnv1a64(q.id)), q.id);
    }
    prompting::check_no_leakage(demos, q.id);
    const std::string& query = text2mol ? q.description : q.smiles;
    prompts.push_back(prompting::build_prompt(demos, query, pdir, {rc.dims.r, rc.prompt_budget}).rendered);
  }

  llm::RetryPolicy policy;
  policy.max_retries = rc.provider.max_retries;
  llm::LlmClient client(provider, policy, log);
  const std::vector<llm::QueryResult> results = client.query_all(prompts, rc.concurrency);

  LlmRun run;
  run.requests = client.requests();
  for (std::size_t i = 0; i < queries.size(); ++i) {
    PredictionRecord rec;
    rec.id = queries[i].id;
    const llm::QueryResult& res = results[i];
    if (!res.raw) {
      try {
        std::rethrow_exception(res.error);
      } catch (const CredentialError&) {
        throw;  // every later query would fail the same way
      } catch (const std::exception& e) {
        rec.warning = std::string("provider failed: ") + e.what();
      }
    } else if (text2mol) {
      try {
        const llm::LlmPrediction p = llm::parse_response(*res.raw, rc.dims.r > 0 ? rc.dims.r : 1);
        rec.ranked_smiles = p.ranked_smiles;
        rec.explanation = p.explanation;
      } catch (const llm::ParseEmptyError&) {
        rec.explanation = llm::extract_explanation(*res.raw);
        rec.warning = "no candidate SMILES in response";
      }
    } else {
      rec.explanation = llm::extract_explanation(*res.raw);
      if (rec.explanation.empty()) rec.warning = "empty response";
    }
    run.warnings += !rec.warning.empty();
    run.records.push_back(std::move(rec));
  }
  return run;
}

decoder::Vocab build_vocab(decoder::Direction direction, const std::vector<data::TextMoleculePair>& train) {
  std::vector<std::string> targets;
  for (const auto& p : train) targets.push_back(reference_of(direction, p));
  return direction == decoder::Direction::kText2Mol ? decoder::Vocab::smiles(targets)
                                                    : decoder::Vocab::characters(targets);
}

std::string reference_of(decoder::Direction direction, const data::TextMoleculePair& pair) {
  return direction == decoder::Direction::kText2Mol ? pair.smiles : pair.description;
}

std::vector<decoder::Example> build_examples(const decoder::Model& model,
                                             const std::vector<data::TextMoleculePair>& pairs,
                                             const std::map<std::string, PredictionRecord>& predictions,
                                             const emb::EmbeddingProvider& embeddings, ExampleStats* stats) {
  ExampleStats local;
  ExampleStats& st = stats ? *stats : local;
  const std::size_t d = model.fusion.dims.d;
  const bool text2mol = model.direction == decoder::Direction::kText2Mol;
  static const PredictionRecord kEmpty;
  std::vector<decoder::Example> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    const auto it = predictions.find(p.id);
    if (it == predictions.end()) ++st.missing_predictions;
    const PredictionRecord& pred = it == predictions.end() ? kEmpty : it->second;

    decoder::Example ex;
    ex.id = p.id;
    const std::string& source = text2mol ? p.description : p.smiles;
    ex.input.h_org = emb::embed_tokens(source, embeddings, d).matrix;
    if (emb::tokenize(pred.explanation).empty()) {
      ++st.empty_explanations;
      ex.input.h_exp = num::Matrix(1, d);
    } else {
      ex.input.h_exp = emb::embed_tokens(pred.explanation, embeddings, d).matrix;
    }
    if (model.fusion.has_pred()) {
      fusion::PredictionEncoding enc =
          fusion::encode_predictions(pred.ranked_smiles, model.vocab.symbols(), model.fusion.dims.r);
      st.prediction_oov += enc.oov;
      ex.input.pred_multi_hot = std::move(enc.multi_hot);
    }
    bool cut = false;
    ex.target = decoder::encode_target(model.vocab, reference_of(model.direction, p), model.decoder.dims.max_len,
                                       &st.unknown_symbols, &cut);
    st.truncated_targets += cut;
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace molgen::pipeline
