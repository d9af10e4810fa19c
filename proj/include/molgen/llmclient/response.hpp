#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "molgen/error.hpp"

namespace molgen::llm {

struct LlmPrediction {
  std::vector<std::string> ranked_smiles;  // response order, trimmed, deduplicated
  std::string explanation;
  std::string raw;
  std::string provider_id;

  bool operator==(const LlmPrediction&) const = default;
};

// No candidate could be extracted. Carries the raw response.
class ParseEmptyError : public DataError {
 public:
  explicit ParseEmptyError(std::string raw)
      : DataError("no candidate SMILES found in response"), raw_(std::move(raw)) {}
  const std::string& raw() const { return raw_; }

 private:
  std::string raw_;
};

// Candidates come from lines before the explanation that look like
// "<rank>. <candidate>" or "<rank>) <candidate>", "SMILES: <candidate>", or
// any nonblank line inside a ``` fence. The candidate is the first
// whitespace-separated token with wrapping quotes, backticks and asterisks
// removed. A line starting with "Explanation" (any case) begins the
// explanation; everything after the word and an optional colon is kept.
// Candidates are not checked for validity here.
LlmPrediction parse_response(const std::string& raw, std::size_t r_max);

// Inverse of parse_response for well-formed predictions.
std::string render_response(const LlmPrediction& prediction);

// Text after the explanation marker, or the whole trimmed response when the
// marker is missing. Used for mol2text, where the answer is prose.
std::string extract_explanation(const std::string& raw);

}  // namespace molgen::llm
