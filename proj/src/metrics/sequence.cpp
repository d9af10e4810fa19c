#include "molgen/metrics/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "molgen/error.hpp"
#include "molgen/text.hpp"

namespace molgen::metrics {
namespace {

using Gram = std::vector<std::string>;

std::map<Gram, std::size_t> ngram_counts(const std::vector<std::string>& toks, std::size_t n) {
  std::map<Gram, std::size_t> counts;
  if (toks.size() < n) return counts;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    ++counts[Gram(toks.begin() + static_cast<std::ptrdiff_t>(i),
                  toks.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

}  // namespace

std::size_t levenshtein(const std::u32string& a, const std::u32string& b) {
  const std::u32string& s = a.size() < b.size() ? b : a;
  const std::u32string& t = a.size() < b.size() ? a : b;
  std::vector<std::size_t> row(t.size() + 1);
  for (std::size_t j = 0; j <= t.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({up + 1, row[j - 1] + 1, diag + (s[i - 1] == t[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[t.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(text::utf8_to_u32(a), text::utf8_to_u32(b));
}

std::vector<std::string> char_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    if (c >= 0xF0) {
      len = 4;
    } else if (c >= 0xE0) {
      len = 3;
    } else if (c >= 0xC0) {
      len = 2;
    }
    len = std::min(len, s.size() - i);
    out.emplace_back(s.substr(i, len));
    i += len;
  }
  return out;
}

double bleu(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
            std::size_t max_n, const std::vector<double>& weights) {
  if (max_n == 0) throw DomainError("bleu: max_n must be at least 1");
  if (weights.size() != max_n) throw DomainError("bleu: need one weight per n-gram order");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("bleu: weights must be nonnegative");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw DomainError("bleu: weights must sum to 1");
  if (candidate.empty() || reference.empty()) return 0.0;

  const std::size_t orders = std::min(max_n, candidate.size());
  double used_weight = 0.0;
  for (std::size_t n = 1; n <= orders; ++n) used_weight += weights[n - 1];
  if (used_weight <= 0.0) return 0.0;

  double log_sum = 0.0;
  for (std::size_t n = 1; n <= orders; ++n) {
    const auto cand = ngram_counts(candidate, n);
    const auto ref = ngram_counts(reference, n);
    std::size_t matches = 0;
    std::size_t total = 0;
    for (const auto& [gram, count] : cand) {
      total += count;
      const auto it = ref.find(gram);
      if (it != ref.end()) matches += std::min(count, it->second);
    }
    const double p = (matches == 0 ? kBleuSmoothing : static_cast<double>(matches)) /
                     static_cast<double>(total);
    log_sum += weights[n - 1] / used_weight * std::log(p);
  }
  const double c = static_cast<double>(candidate.size());
  const double r = static_cast<double>(reference.size());
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return std::clamp(bp * std::exp(log_sum), 0.0, 1.0);
}

double bleu(const std::vector<std::string>& candidate, const std::vector<std::string>& reference,
            std::size_t max_n) {
  if (max_n == 0) throw DomainError("bleu: max_n must be at least 1");
  return bleu(candidate, reference, max_n, std::vector<double>(max_n, 1.0 / static_cast<double>(max_n)));
}

double tanimoto(const smiles::BitFingerprint& a, const smiles::BitFingerprint& b) {
  if (a.nbits != b.nbits) {
    throw DomainError("tanimoto: fingerprint sizes differ (" + std::to_string(a.nbits) + " vs " +
                      std::to_string(b.nbits) + ")");
  }
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t common = 0;
  while (i < a.bits.size() && j < b.bits.size()) {
    if (a.bits[i] == b.bits[j]) {
      ++common;
      ++i;
      ++j;
    } else if (a.bits[i] < b.bits[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  const std::size_t uni = a.bits.size() + b.bits.size() - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
}

}  // namespace molgen::metrics
