#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "molgen/smiles/fingerprint.hpp"

namespace molgen::metrics {

// Unit-cost edit distance over Unicode scalar values.
std::size_t levenshtein(std::string_view a, std::string_view b);
std::size_t levenshtein(const std::u32string& a, const std::u32string& b);

// One token per Unicode scalar value (character-level BLEU for SMILES).
std::vector<std::string> char_tokens(std::string_view s);

inline constexpr double kBleuSmoothing = 1e-9;

// Geometric mean of clipped n-gram precisions times the brevity penalty.
// A zero match count is replaced by kBleuSmoothing. Orders above the candidate
// length have no n-grams; they are dropped and the remaining weights
// renormalized, so bleu(x, x) = 1 for any nonempty x. Empty input scores 0.
// weights.size() must equal max_n and sum to 1.
double bleu(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
            std::size_t max_n, const std::vector<double>& weights);

// Uniform weights 1/max_n.
double bleu(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
            std::size_t max_n);

// |A ∩ B| / |A ∪ B|; 0 when both are empty. Throws DomainError on nbits mismatch.
double tanimoto(const smiles::BitFingerprint& a, const smiles::BitFingerprint& b);

}  // namespace molgen::metrics
