#include "molgen/prompting/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "molgen/error.hpp"
#include "molgen/hash.hpp"
#include "molgen/metrics/sequence.hpp"
#include "molgen/rng.hpp"
#include "molgen/smiles/parse.hpp"
#include "molgen/text.hpp"

namespace molgen::prompting {
namespace {

using Pairs = std::vector<data::TextMoleculePair>;

Demonstration demo_of(const data::TextMoleculePair& p, double similarity) {
  return {p.id, p.description, p.smiles, similarity};
}

std::vector<Demonstration> rank(const Pairs& train, const std::vector<double>& scores, std::size_t k,
                                const std::optional<std::string>& exclude_id) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (!exclude_id || train[i].id != *exclude_id) pool.push_back(i);
  }
  if (k > pool.size()) {
    throw DomainError("cannot sample " + std::to_string(k) + " demonstrations from " +
                      std::to_string(pool.size()) + " training pairs");
  }
  std::stable_sort(pool.begin(), pool.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<Demonstration> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(demo_of(train[pool[i]], scores[pool[i]]));
  return out;
}

}  // namespace

TfidfEmbedder::TfidfEmbedder(const std::vector<std::string>& documents, std::size_t dim)
    : dim_(dim), documents_(static_cast<double>(documents.size())) {
  if (dim == 0) throw DomainError("TfidfEmbedder: dim must be positive");
  std::map<std::string, double> df;
  for (const auto& doc : documents) {
    auto words = text::word_tokens(doc);
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    for (auto& w : words) df[std::move(w)] += 1.0;
  }
  df_.assign(df.begin(), df.end());
}

std::vector<double> TfidfEmbedder::embed(std::string_view text) const {
  std::map<std::string, double> tf;
  for (auto& w : text::word_tokens(text)) tf[std::move(w)] += 1.0;
  std::vector<double> v(dim_, 0.0);
  for (const auto& [word, count] : tf) {
    const auto it = std::lower_bound(df_.begin(), df_.end(), word,
                                     [](const auto& e, const std::string& w) { return e.first < w; });
    const double df = it != df_.end() && it->first == word ? it->second : 0.0;
    const double idf = std::log((1.0 + documents_) / (1.0 + df)) + 1.0;
    v[fnv1a64(word) % dim_] += count * idf;
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw ShapeError("cosine: vector lengths differ (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<Demonstration> sample_random(const Pairs& train, std::size_t k, std::uint64_t seed,
                                         const std::optional<std::string>& exclude_id) {
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (!exclude_id || train[i].id != *exclude_id) pool.push_back(i);
  }
  if (k > pool.size()) {
    throw DomainError("cannot sample " + std::to_string(k) + " demonstrations from " +
                      std::to_string(pool.size()) + " training pairs");
  }
  Rng rng(seed);
  // Partial Fisher-Yates: the first k slots end up a uniform k-subset in random order.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_index(pool.size() - i);
    std::swap(pool[i], pool[j]);
  }
  std::vector<Demonstration> out;
  for (std::size_t i = 0; i < k; ++i) out.push_back(demo_of(train[pool[i]], 0.0));
  return out;
}

TextScaffoldIndex::TextScaffoldIndex(const Pairs& train, const TextEmbedder& embedder)
    : train_(train), embedder_(embedder) {
  vectors_.reserve(train.size());
  for (const auto& p : train) {
    try {
      vectors_.push_back(embedder.embed(p.description));
    } catch (const ProviderError& e) {
      throw ProviderError("embedding provider failed on pair " + p.id + ": " + e.what());
    }
    if (vectors_.back().size() != embedder.dim()) {
      throw ShapeError("embedding provider returned " + std::to_string(vectors_.back().size()) +
                       " values for pair " + p.id + ", expected " + std::to_string(embedder.dim()));
    }
  }
}

std::vector<Demonstration> TextScaffoldIndex::top_k(std::string_view query_description, std::size_t k,
                                                    const std::optional<std::string>& exclude_id) const {
  std::vector<double> q;
  try {
    q = embedder_.embed(query_description);
  } catch (const ProviderError& e) {
    throw ProviderError(std::string("embedding provider failed on the query: ") + e.what());
  }
  std::vector<double> scores;
  scores.reserve(vectors_.size());
  for (const auto& v : vectors_) scores.push_back(cosine(q, v));
  return rank(train_, scores, k, exclude_id);
}

MolScaffoldIndex::MolScaffoldIndex(const Pairs& train) : train_(train) {
  fps_.reserve(train.size());
  for (const auto& p : train) {
    fps_.push_back(smiles::morgan_fingerprint(smiles::parse_smiles(p.smiles), 2, 2048));
  }
}

std::vector<Demonstration> MolScaffoldIndex::top_k(std::string_view query_smiles, std::size_t k,
                                                   const std::optional<std::string>& exclude_id) const {
  const auto q = smiles::morgan_fingerprint(smiles::parse_smiles(query_smiles), 2, 2048);
  std::vector<double> scores;
  scores.reserve(fps_.size());
  for (const auto& fp : fps_) scores.push_back(metrics::tanimoto(q, fp));
  return rank(train_, scores, k, exclude_id);
}

std::vector<Demonstration> sample_scaffold_text(const Pairs& train, std::string_view query_description,
                                                std::size_t k, const TextEmbedder& embedder) {
  return TextScaffoldIndex(train, embedder).top_k(query_description, k);
}

std::vector<Demonstration> sample_scaffold_mol(const Pairs& train, std::string_view query_smiles,
                                               std::size_t k) {
  return MolScaffoldIndex(train).top_k(query_smiles, k);
}

void check_no_leakage(const std::vector<Demonstration>& demos, const std::string& query_id) {
  for (const auto& d : demos) {
    if (d.id == query_id) {
      throw DataError("demonstration leakage: query " + query_id + " appears among its own demonstrations");
    }
  }
}

}  // namespace molgen::prompting
