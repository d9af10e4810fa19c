#include <algorithm>
#include <cmath>
#include <map>

#include "molgen/metrics/text.hpp"

namespace molgen::metrics {
namespace {

using Gram = std::vector<std::string>;

std::map<Gram, std::size_t> ngrams(const std::vector<std::string>& toks, std::size_t n) {
  std::map<Gram, std::size_t> counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    ++counts[Gram(toks.begin() + static_cast<std::ptrdiff_t>(i),
                  toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

double rouge_n(const std::vector<std::string>& cand, const std::vector<std::string>& ref, std::size_t n) {
  const auto r = ngrams(ref, n);
  if (r.empty()) return 0.0;
  const auto c = ngrams(cand, n);
  std::size_t matches = 0;
  std::size_t total = 0;
  for (const auto& [gram, count] : r) {
    total += count;
    const auto it = c.find(gram);
    if (it != c.end()) matches += std::min(count, it->second);
  }
  return static_cast<double>(matches) / static_cast<double>(total);
}

}  // namespace

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double rouge(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
             RougeVariant variant) {
  if (reference.empty()) return 0.0;
  switch (variant) {
    case RougeVariant::One: return rouge_n(candidate, reference, 1);
    case RougeVariant::Two: return rouge_n(candidate, reference, 2);
    case RougeVariant::L: {
      const std::size_t lcs = lcs_length(candidate, reference);
      if (lcs == 0) return 0.0;
      const double p = static_cast<double>(lcs) / static_cast<double>(candidate.size());
      const double r = static_cast<double>(lcs) / static_cast<double>(reference.size());
      return 2.0 * p * r / (p + r);
    }
  }
  return 0.0;
}

double meteor_simplified(const std::vector<std::string>& candidate,
                         const std::vector<std::string>& reference) {
  if (candidate.empty() || reference.empty()) return 0.0;
  std::vector<int> align(candidate.size(), -1);
  std::vector<char> ref_used(reference.size(), 0);
  auto stage = [&](auto&& same) {
    for (std::size_t i = 0; i < candidate.size(); ++i) {
      if (align[i] >= 0) continue;
      for (std::size_t j = 0; j < reference.size(); ++j) {
        if (!ref_used[j] && same(i, j)) {
          align[i] = static_cast<int>(j);
          ref_used[j] = 1;
          break;
        }
      }
    }
  };
  stage([&](std::size_t i, std::size_t j) { return candidate[i] == reference[j]; });
  std::vector<std::string> cstem, rstem;
  for (const auto& w : candidate) cstem.push_back(porter_stem(w));
  for (const auto& w : reference) rstem.push_back(porter_stem(w));
  stage([&](std::size_t i, std::size_t j) { return cstem[i] == rstem[j]; });

  std::size_t matches = 0;
  std::size_t chunks = 0;
  int last = -2;
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    if (align[i] < 0) {
      last = -2;
      continue;
    }
    ++matches;
    if (align[i] != last + 1) ++chunks;
    last = align[i];
  }
  if (matches == 0) return 0.0;
  const double m = static_cast<double>(matches);
  const double p = m / static_cast<double>(candidate.size());
  const double r = m / static_cast<double>(reference.size());
  const double fmean = 10.0 * p * r / (r + 9.0 * p);
  const double penalty = 0.5 * std::pow(static_cast<double>(chunks) / m, 3.0);
  return fmean * (1.0 - penalty);
}

}  // namespace molgen::metrics
