#include "molgen/cli/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "molgen/dataset/corpus.hpp"
#include "molgen/decoder/train.hpp"
#include "molgen/error.hpp"
#include "molgen/metrics/report.hpp"
#include "molgen/pipeline/pipeline.hpp"

namespace molgen::cli {
namespace {

namespace fs = std::filesystem;
using pipeline::RunConfig;

struct Variant {
  std::string name;
  std::string slug;
  fusion::AblationFlags flags;
};

std::vector<Variant> variants(decoder::Direction direction) {
  std::vector<Variant> v = {{"full", "full", {}},
                            {"w/o y_exp", "no_exp", {true, false, false, false}},
                            {"w/o y_org", "no_org", {false, true, false, false}}};
  if (direction == decoder::Direction::kText2Mol) {
    v.push_back({"w/o y_pred", "no_pred", {false, false, true, false}});
    v.push_back({"w/o HMHA", "linear", {false, false, false, true}});
  }
  return v;
}

fusion::AblationFlags merge(fusion::AblationFlags a, const fusion::AblationFlags& b) {
  a.drop_exp |= b.drop_exp;
  a.drop_org |= b.drop_org;
  a.drop_pred |= b.drop_pred;
  a.linear_fuse |= b.linear_fuse;
  return a;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

data::Corpus load_prepared(const RunConfig& rc) {
  data::LoadOptions opts;
  opts.write_quarantine_reports = false;
  return data::load_corpus(rc.corpus_dir / "train.tsv", rc.corpus_dir / "validation.tsv", rc.corpus_dir / "test.tsv",
                           opts)
      .corpus;
}

std::vector<std::string> selected_splits(const RunConfig& rc) {
  if (rc.split == "all") return {"train", "validation", "test"};
  return {rc.split};
}

const std::string& single_split(const RunConfig& rc, const std::string& command) {
  if (rc.split == "all") throw ConfigError(command + " needs a single split, not 'all'");
  return rc.split;
}

std::map<std::string, pipeline::PredictionRecord> load_predictions(const RunConfig& rc, const std::string& split) {
  return pipeline::by_id(pipeline::read_predictions(pipeline::predictions_path(rc, split)));
}

// The checkpoint must describe the model the config asks for.
void check_compatible(const decoder::Model& model, const RunConfig& rc) {
  const decoder::ModelDims m = model.dims();
  const decoder::ModelDims& c = rc.dims;
  std::ostringstream why;
  if (model.direction != rc.direction) why << " direction " << decoder::to_string(model.direction);
  if (m.d != c.d) why << " d=" << m.d;
  if (m.heads != c.heads) why << " heads=" << m.heads;
  if (m.head_dim != c.head_dim) why << " head_dim=" << m.head_dim;
  if (m.layers != c.layers) why << " layers=" << m.layers;
  if (m.ffn_mult != c.ffn_mult) why << " ffn_mult=" << m.ffn_mult;
  if (m.max_len != c.max_len) why << " max_len=" << m.max_len;
  if (rc.direction == decoder::Direction::kText2Mol && m.r != c.r) why << " r=" << m.r;
  if (!why.str().empty()) {
    throw DataError("checkpoint " + rc.checkpoint.string() + " does not match the config:" + why.str());
  }
}

struct Evaluation {
  std::vector<std::string> generated;
  std::vector<bool> truncated;
  std::vector<fusion::AttentionTrace> traces;
  metrics::MetricsReport smiles;
  metrics::TextMetricsReport text;
};

Evaluation evaluate(decoder::Model& model, const std::vector<decoder::Example>& examples,
                    const std::vector<data::TextMoleculePair>& pairs) {
  if (pairs.empty()) throw DataError("evaluation split is empty");
  Evaluation ev;
  std::vector<metrics::SmilesPair> sp;
  std::vector<metrics::TextPair> tp;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    decoder::Prediction p = decoder::predict(model, examples[i].input);
    const std::string ref = pipeline::reference_of(model.direction, pairs[i]);
    sp.push_back({p.text, ref});
    tp.push_back({p.text, ref});
    ev.generated.push_back(std::move(p.text));
    ev.truncated.push_back(p.truncated);
    ev.traces.push_back(std::move(p.trace));
  }
  if (model.direction == decoder::Direction::kText2Mol) {
    ev.smiles = metrics::evaluate_text2mol(sp);
  } else {
    ev.text = metrics::evaluate_mol2text(tp);
  }
  return ev;
}

nlohmann::json trace_json(const std::vector<std::array<double, 2>>& layer) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& w : layer) out.push_back({w[0], w[1]});
  return out;
}

void write_generations(const fs::path& path, const std::vector<data::TextMoleculePair>& pairs,
                       decoder::Direction direction, const Evaluation& ev) {
  std::ostringstream s;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const nlohmann::json j = {{"id", pairs[i].id},
                              {"reference", pipeline::reference_of(direction, pairs[i])},
                              {"generated", ev.generated[i]},
                              {"truncated", static_cast<bool>(ev.truncated[i])}};
    s << j.dump() << "\n";
  }
  write_text(path, s.str());
}

void write_attention(const fs::path& path, const std::vector<data::TextMoleculePair>& pairs, const Evaluation& ev) {
  std::ostringstream s;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const nlohmann::json j = {
        {"id", pairs[i].id}, {"layer1", trace_json(ev.traces[i].layer1)}, {"layer2", trace_json(ev.traces[i].layer2)}};
    s << j.dump() << "\n";
  }
  write_text(path, s.str());
}

struct Rows {
  std::vector<metrics::Text2MolRow> smiles;
  std::vector<metrics::Mol2TextRow> text;

  void add(const std::string& name, const Evaluation& ev) {
    smiles.emplace_back(name, ev.smiles);
    text.emplace_back(name, ev.text);
  }
  std::string table(decoder::Direction d) const {
    return d == decoder::Direction::kText2Mol ? metrics::format_text2mol_table(smiles)
                                              : metrics::format_mol2text_table(text);
  }
  std::string jsonl(decoder::Direction d) const {
    return d == decoder::Direction::kText2Mol ? metrics::format_text2mol_jsonl(smiles)
                                              : metrics::format_mol2text_jsonl(text);
  }
};

void write_rows(const RunConfig& rc, const std::string& stem, const Rows& rows, std::ostream& out) {
  const std::string table = rows.table(rc.direction);
  write_text(rc.out_dir / (stem + ".txt"), table);
  write_text(rc.out_dir / (stem + ".jsonl"), rows.jsonl(rc.direction));
  out << table;
}

// ---- commands ----

int cmd_prepare(const RunConfig& rc, std::ostream& out) {
  data::Corpus corpus;
  std::size_t quarantined = 0;
  if (rc.synthetic_n > 0) {
    corpus = data::make_synthetic_corpus(rc.synthetic_n, rc.synthetic_seed);
  } else if (!rc.source_dir.empty()) {
    data::CorpusLoad load = data::load_corpus(rc.source_dir / "train.tsv", rc.source_dir / "validation.tsv",
                                              rc.source_dir / "test.tsv");
    corpus = std::move(load.corpus);
    quarantined = load.quarantined;
  } else {
    throw ConfigError("prepare needs synthetic_n > 0 or a source_dir with train/validation/test.tsv");
  }
  fs::create_directories(rc.corpus_dir);
  data::write_corpus(rc.corpus_dir, corpus);
  out << "train " << corpus.train.size() << "\n"
      << "validation " << corpus.validation.size() << "\n"
      << "test " << corpus.test.size() << "\n"
      << "quarantined " << quarantined << "\n";
  return kExitOk;
}

int cmd_run_llm(const RunConfig& rc, std::ostream& out) {
  // Construct the provider first: live mode fails here on a missing credential.
  std::unique_ptr<llm::LlmProvider> provider = pipeline::make_provider(rc);
  const data::Corpus corpus = load_prepared(rc);
  std::unique_ptr<llm::ReplayLog> log;
  if (!rc.record_log.empty()) log = std::make_unique<llm::ReplayLog>(rc.record_log);
  for (const std::string& split : selected_splits(rc)) {
    const pipeline::LlmRun run =
        pipeline::run_llm(rc, corpus, pipeline::split_records(corpus, split), *provider, log.get());
    pipeline::write_predictions(pipeline::predictions_path(rc, split), run.records);
    out << split << ": " << run.records.size() << " queries, " << run.requests << " requests, " << run.warnings
        << " warnings\n";
  }
  return kExitOk;
}

struct Trained {
  decoder::Model model;
  decoder::TrainResult result;
};

Trained train_variant(const RunConfig& rc, const data::Corpus& corpus, const fusion::AblationFlags& flags,
                      const fs::path& log_path, std::ostream& out) {
  const auto embeddings = pipeline::make_embedding_provider(rc);
  Trained t;
  t.model = decoder::Model::init(rc.direction, pipeline::build_vocab(rc.direction, corpus.train), rc.dims, flags,
                                 rc.train.seed);
  pipeline::ExampleStats stats;
  const auto train_set =
      pipeline::build_examples(t.model, corpus.train, load_predictions(rc, "train"), *embeddings, &stats);
  const auto val_set =
      pipeline::build_examples(t.model, corpus.validation, load_predictions(rc, "validation"), *embeddings, &stats);
  out << "examples: " << train_set.size() << " train, " << val_set.size() << " validation; "
      << stats.missing_predictions << " without predictions, " << stats.truncated_targets << " truncated targets, "
      << stats.unknown_symbols << " unknown symbols\n";
  std::ofstream log(log_path, std::ios::binary | std::ios::trunc);
  if (!log) throw DataError("cannot write " + log_path.string());
  t.result = decoder::train(t.model, train_set, val_set, rc.train, {}, &log);
  return t;
}

void report_training(const decoder::TrainResult& r, std::ostream& out) {
  out << "epochs " << r.history.size() << ", steps " << r.steps << ", best epoch " << r.best_epoch;
  if (r.best_epoch > 0) {
    const decoder::EpochRecord& b = r.history[r.best_epoch - 1];
    out << " (train_loss " << b.train_loss << ", val_loss " << b.val_loss << ")";
  }
  if (r.early_stopped) out << ", early stop";
  out << "\n";
}

int cmd_train(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const data::Corpus corpus = load_prepared(rc);
  Trained t = train_variant(rc, corpus, rc.flags, rc.out_dir / "train_log.jsonl", out);
  decoder::save_model(rc.checkpoint, t.model);
  report_training(t.result, out);
  if (t.result.diverged) {
    err << "error: training diverged (non-finite loss); saved the last best parameters to " << rc.checkpoint.string()
        << "\n";
    return kExitDiverged;
  }
  return kExitOk;
}

int cmd_evaluate(const RunConfig& rc, bool ablate, std::ostream& out) {
  const std::string& split = single_split(rc, "evaluate");
  decoder::Model model = decoder::load_model(rc.checkpoint);
  check_compatible(model, rc);
  const data::Corpus corpus = load_prepared(rc);
  const auto& pairs = pipeline::split_records(corpus, split);
  const auto embeddings = pipeline::make_embedding_provider(rc);
  const auto examples = pipeline::build_examples(model, pairs, load_predictions(rc, split), *embeddings);

  const Evaluation ev = evaluate(model, examples, pairs);
  write_generations(rc.out_dir / ("generations." + split + ".jsonl"), pairs, model.direction, ev);
  if (rc.dump_attention) write_attention(rc.out_dir / ("attention." + split + ".jsonl"), pairs, ev);
  Rows rows;
  rows.add("model", ev);
  write_rows(rc, "report." + split, rows, out);

  if (ablate) {
    // Same weights with each stream switched off at inference time.
    const fusion::AblationFlags trained = model.flags;
    Rows ab;
    for (const Variant& v : variants(model.direction)) {
      model.flags = merge(trained, v.flags);
      fusion::validate(model.flags);
      ab.add(v.name, v.slug == "full" ? ev : evaluate(model, examples, pairs));
    }
    model.flags = trained;
    write_rows(rc, "ablation." + split, ab, out);
  }
  return kExitOk;
}

int cmd_ablate(const RunConfig& rc, std::ostream& out, std::ostream& err) {
  const std::string& split = single_split(rc, "ablate");
  const data::Corpus corpus = load_prepared(rc);
  const auto& pairs = pipeline::split_records(corpus, split);
  const auto embeddings = pipeline::make_embedding_provider(rc);
  const auto predictions = load_predictions(rc, split);
  Rows rows;
  bool diverged = false;
  for (const Variant& v : variants(rc.direction)) {
    const fusion::AblationFlags flags = merge(rc.flags, v.flags);
    fusion::validate(flags);
    out << "== " << v.name << "\n";
    Trained t = train_variant(rc, corpus, flags, rc.out_dir / ("train_log." + v.slug + ".jsonl"), out);
    report_training(t.result, out);
    diverged |= t.result.diverged;
    decoder::save_model(rc.out_dir / ("model." + v.slug + ".ckpt"), t.model);
    const auto examples = pipeline::build_examples(t.model, pairs, predictions, *embeddings);
    rows.add(v.name, evaluate(t.model, examples, pairs));
  }
  write_rows(rc, "ablation." + split, rows, out);
  if (diverged) {
    err << "error: at least one variant diverged\n";
    return kExitDiverged;
  }
  return kExitOk;
}

int cmd_generate(const RunConfig& rc, const std::string& query, std::ostream& out) {
  if (query.empty()) throw ConfigError("generate needs --query");
  std::unique_ptr<llm::LlmProvider> provider = pipeline::make_provider(rc);
  decoder::Model model = decoder::load_model(rc.checkpoint);
  check_compatible(model, rc);
  const data::Corpus corpus = load_prepared(rc);
  data::TextMoleculePair pair;
  pair.id = "query";
  (rc.direction == decoder::Direction::kText2Mol ? pair.description : pair.smiles) = query;
  std::unique_ptr<llm::ReplayLog> log;
  if (!rc.record_log.empty()) log = std::make_unique<llm::ReplayLog>(rc.record_log);
  const pipeline::LlmRun run = pipeline::run_llm(rc, corpus, {pair}, *provider, log.get());
  const auto embeddings = pipeline::make_embedding_provider(rc);
  const auto examples = pipeline::build_examples(model, {pair}, pipeline::by_id(run.records), *embeddings);
  const decoder::Prediction p = decoder::predict(model, examples[0].input);
  out << p.text << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"molgen: knowledge-augmented molecule generation pipeline"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::map<std::string, CLI::Option*> override_opts;
  std::string query;
  bool ablate = false;
  bool dump_attention = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"prepare", "Write a corpus (synthetic or loaded) into corpus_dir"},
      {"run-llm", "Query the LLM for every pair of a split and write predictions"},
      {"train", "Train fusion and decoder end to end and save a checkpoint"},
      {"evaluate", "Generate for a split and write metric reports"},
      {"generate", "Generate for a single query"},
      {"ablate", "Retrain and evaluate every ablation variant"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key=value config file");
    for (const std::string& key : pipeline::Config::keys()) {
      std::string names = "--" + key;
      std::string dashed = key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      if (dashed != key && key != "dump_attention") names += ",--" + dashed;
      override_opts[name + ":" + key] = sub->add_option(names, overrides[key], "override " + key);
    }
    if (name == "generate") sub->add_option("--query", query, "description (text2mol) or SMILES (mol2text)");
    if (name == "evaluate") {
      sub->add_flag("--ablate", ablate, "also evaluate each ablation flag on the same checkpoint");
      sub->add_flag("--dump-attention", dump_attention, "write per-query attention weights");
    }
  }

  std::vector<const char*> argv = {"molgen"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    pipeline::Config cfg = config_path.empty() ? pipeline::Config() : pipeline::Config::from_file(config_path);
    for (const std::string& key : pipeline::Config::keys()) {
      if (override_opts[command + ":" + key]->count() > 0) cfg.set(key, overrides[key]);
    }
    if (dump_attention) cfg.set("dump_attention", "true");
    const RunConfig rc = pipeline::resolve(cfg);
    fs::create_directories(rc.out_dir);
    write_text(rc.out_dir / "run.config", "# command=" + command + "\n" + cfg.render());

    if (command == "prepare") return cmd_prepare(rc, out);
    if (command == "run-llm") return cmd_run_llm(rc, out);
    if (command == "train") return cmd_train(rc, out, err);
    if (command == "evaluate") return cmd_evaluate(rc, ablate, out);
    if (command == "generate") return cmd_generate(rc, query, out);
    return cmd_ablate(rc, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ProviderError& e) {
    err << "provider error: " << e.what() << "\n";
    return kExitProvider;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << "\n";
    return kExitDiverged;
  } catch (const Error& e) {
    // Data, shape and domain errors all come from inputs or files.
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace molgen::cli
