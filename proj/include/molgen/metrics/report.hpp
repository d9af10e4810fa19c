#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace molgen::metrics {

struct SmilesPair {
  std::string candidate;
  std::string reference;
};

struct MetricsReport {
  double bleu = 0.0;
  double exact = 0.0;
  // Over mutually valid pairs.
  double canonical_match = 0.0;
  double levenshtein_mean = 0.0;
  double validity = 0.0;
  // Over mutually valid pairs.
  double morgan_fts_mean = 0.0;
  // Over mutually valid pairs where at least one side has a path (molecules
  // with no bonds have an empty path fingerprint).
  double path_fts_mean = 0.0;

  struct Counts {
    std::size_t total = 0;
    std::size_t valid_candidates = 0;
    std::size_t mutually_valid = 0;
    std::size_t path_fts_pairs = 0;
    bool operator==(const Counts&) const = default;
  } counts;

  bool operator==(const MetricsReport&) const = default;
};

struct TextPair {
  std::string candidate;
  std::string reference;
};

struct TextMetricsReport {
  double bleu2 = 0.0;
  double bleu4 = 0.0;
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double rougeL = 0.0;
  double meteor_simplified = 0.0;
  std::size_t total = 0;

  bool operator==(const TextMetricsReport&) const = default;
};

// Throws DomainError for empty input.
MetricsReport evaluate_text2mol(const std::vector<SmilesPair>& pairs);
TextMetricsReport evaluate_mol2text(const std::vector<TextPair>& pairs);

// Mean that does not depend on the order of `values`: values are sorted and
// then summed, so any permutation of the pairs yields identical bits.
double order_free_mean(std::vector<double> values);

using Text2MolRow = std::pair<std::string, MetricsReport>;
using Mol2TextRow = std::pair<std::string, TextMetricsReport>;

// Plain-text table in the column order BLEU, Exact, Levenshtein, Validity,
// RDK-style path FTS, Morgan FTS, FCD, followed by the canonical-match column
// and denominators. Header lines start with '#'.
std::string format_text2mol_table(const std::vector<Text2MolRow>& rows);
std::string format_mol2text_table(const std::vector<Mol2TextRow>& rows);

// One JSON object per row.
std::string format_text2mol_jsonl(const std::vector<Text2MolRow>& rows);
std::string format_mol2text_jsonl(const std::vector<Mol2TextRow>& rows);

}  // namespace molgen::metrics
