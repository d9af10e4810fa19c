#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "molgen/dataset/corpus.hpp"
#include "molgen/smiles/fingerprint.hpp"

namespace molgen::prompting {

struct Demonstration {
  std::string id;
  std::string description;
  std::string smiles;
  double similarity = 0.0;  // 0 for random sampling

  bool operator==(const Demonstration&) const = default;
};

// Text in, one fixed-length vector out.
class TextEmbedder {
 public:
  virtual ~TextEmbedder() = default;
  virtual std::string id() const = 0;
  virtual std::size_t dim() const = 0;
  virtual std::vector<double> embed(std::string_view text) const = 0;
};

// Hashed bag-of-words TF-IDF. Document frequencies come from the corpus given
// at construction; idf = ln((1 + N) / (1 + df)) + 1, unseen words get df = 0.
// Each word adds tf * idf to bucket fnv1a64(word) mod dim; the result is
// L2-normalized (all zeros for text without words).
class TfidfEmbedder final : public TextEmbedder {
 public:
  explicit TfidfEmbedder(const std::vector<std::string>& documents, std::size_t dim = 256);

  std::string id() const override { return "tfidf-" + std::to_string(dim_); }
  std::size_t dim() const override { return dim_; }
  std::vector<double> embed(std::string_view text) const override;

 private:
  std::size_t dim_;
  double documents_;
  std::vector<std::pair<std::string, double>> df_;  // sorted by word
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

// Uniform sample of k distinct pairs without replacement, in sampled order.
// `exclude_id` removes one pair (the query itself) from the pool first.
// Throws DomainError when k exceeds the pool.
std::vector<Demonstration> sample_random(const std::vector<data::TextMoleculePair>& train,
                                         std::size_t k, std::uint64_t seed,
                                         const std::optional<std::string>& exclude_id = std::nullopt);

// Precomputed description embeddings for repeated text-scaffold queries.
class TextScaffoldIndex {
 public:
  // Provider failures are rethrown as ProviderError naming the pair id.
  TextScaffoldIndex(const std::vector<data::TextMoleculePair>& train, const TextEmbedder& embedder);

  // Top k by cosine similarity, descending, ties in corpus order.
  std::vector<Demonstration> top_k(std::string_view query_description, std::size_t k,
                                   const std::optional<std::string>& exclude_id = std::nullopt) const;

 private:
  const std::vector<data::TextMoleculePair>& train_;
  const TextEmbedder& embedder_;
  std::vector<std::vector<double>> vectors_;
};

// Precomputed Morgan fingerprints (radius 2, 2048 bits) for molecule queries.
class MolScaffoldIndex {
 public:
  explicit MolScaffoldIndex(const std::vector<data::TextMoleculePair>& train);

  // Top k by Tanimoto similarity, descending, ties in corpus order. An
  // invalid query throws the parser's SmilesError.
  std::vector<Demonstration> top_k(std::string_view query_smiles, std::size_t k,
                                   const std::optional<std::string>& exclude_id = std::nullopt) const;

 private:
  const std::vector<data::TextMoleculePair>& train_;
  std::vector<smiles::BitFingerprint> fps_;
};

std::vector<Demonstration> sample_scaffold_text(const std::vector<data::TextMoleculePair>& train,
                                                std::string_view query_description, std::size_t k,
                                                const TextEmbedder& embedder);

std::vector<Demonstration> sample_scaffold_mol(const std::vector<data::TextMoleculePair>& train,
                                               std::string_view query_smiles, std::size_t k);

// Throws DataError if any demonstration carries the query's id.
void check_no_leakage(const std::vector<Demonstration>& demos, const std::string& query_id);

}  // namespace molgen::prompting
