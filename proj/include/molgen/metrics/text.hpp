#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace molgen::metrics {

enum class RougeVariant { One, Two, L };

// ROUGE-1/2: clipped n-gram matches over reference n-gram count (recall).
// ROUGE-L: F1 of the longest common subsequence. Empty reference scores 0.
double rouge(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
             RougeVariant variant);

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Porter (1980) suffix-stripping stemmer for lowercase ASCII words.
std::string porter_stem(std::string_view word);

// Unigram alignment, exact matches first then Porter-stem matches, scored as
// Fmean = 10PR / (R + 9P) times (1 - 0.5 (chunks / matches)^3). No synonymy.
double meteor_simplified(const std::vector<std::string>& candidate,
                         const std::vector<std::string>& reference);

}  // namespace molgen::metrics
