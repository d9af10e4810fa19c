#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "molgen/error.hpp"
#include "molgen/metrics/report.hpp"
#include "molgen/metrics/sequence.hpp"
#include "molgen/metrics/text.hpp"
#include "molgen/rng.hpp"
#include "molgen/smiles/parse.hpp"
#include "molgen/text.hpp"
#include "support/fixtures.hpp"

namespace molgen::metrics {
namespace {

constexpr char kAlphabet[] = {'C', 'O', '=', '(', ')'};

// Top-down recursion straight from the definition, memoized in a fixed table.
struct EditOracle {
  std::string a, b;
  int memo[9][9];

  int d(int i, int j) {
    if (i == 0) return j;
    if (j == 0) return i;
    int& m = memo[i][j];
    if (m >= 0) return m;
    m = std::min({d(i - 1, j) + 1, d(i, j - 1) + 1,
                  d(i - 1, j - 1) + (a[static_cast<std::size_t>(i - 1)] != b[static_cast<std::size_t>(j - 1)])});
    return m;
  }

  int operator()(const std::string& x, const std::string& y) {
    a = x;
    b = y;
    for (auto& row : memo) std::fill(std::begin(row), std::end(row), -1);
    return d(static_cast<int>(a.size()), static_cast<int>(b.size()));
  }
};

std::vector<std::string> all_strings(std::size_t max_len) {
  std::vector<std::string> out = {""};
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    const std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (char c : kAlphabet) out.push_back(out[i] + c);
    }
    begin = end;
  }
  return out;
}

std::string random_string(Rng& rng, std::size_t max_len) {
  std::string s(rng.uniform_index(max_len + 1), ' ');
  for (char& c : s) c = kAlphabet[rng.uniform_index(5)];
  return s;
}

std::vector<std::string> words(const std::string& s) { return text::word_punct_tokens(s); }

smiles::BitFingerprint fp(std::vector<std::uint32_t> bits, std::uint32_t nbits = 64) {
  return smiles::make_fingerprint(nbits, std::move(bits));
}

TEST(Levenshtein, Examples) {
  EXPECT_EQ(levenshtein("CCO", "CCO"), 0u);
  EXPECT_EQ(levenshtein("CCO", "CC=O"), 1u);
  EXPECT_EQ(levenshtein("", "CCO"), 3u);
  EXPECT_EQ(levenshtein("kitten", "sitting"), 3u);
  // Scalar values, not bytes.
  EXPECT_EQ(levenshtein("caf\xc3\xa9", "cafe"), 1u);
}

TEST(Levenshtein, ExhaustiveShortPairs) {
  EditOracle oracle;
  // Every pair whose combined length is at most 8.
  const auto strings = all_strings(8);
  std::size_t checked = 0;
  for (const auto& a : strings) {
    for (const auto& b : strings) {
      if (a.size() + b.size() > 8) break;  // strings are ordered by length
      ASSERT_EQ(levenshtein(a, b), static_cast<std::size_t>(oracle(a, b))) << a << " | " << b;
      ++checked;
    }
  }
  EXPECT_GT(checked, 3'000'000u);
}

TEST(Levenshtein, RandomPairsUpToEight) {
  EditOracle oracle;
  Rng rng(11);
  for (int t = 0; t < 200000; ++t) {
    const std::string a = random_string(rng, 8);
    const std::string b = random_string(rng, 8);
    ASSERT_EQ(levenshtein(a, b), static_cast<std::size_t>(oracle(a, b))) << a << " | " << b;
  }
}

TEST(Levenshtein, MetricProperties) {
  Rng rng(5);
  for (int t = 0; t < 2000; ++t) {
    const std::string a = random_string(rng, 12);
    const std::string b = random_string(rng, 12);
    const std::string c = random_string(rng, 12);
    EXPECT_EQ(levenshtein(a, a), 0u);
    EXPECT_EQ(levenshtein(a, b), levenshtein(b, a));
    EXPECT_LE(levenshtein(a, c), levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST(Bleu, HandComputed) {
  const auto t = [](const char* s) { return char_tokens(s); };
  // p1 = 2/2, p2 = 1/1, BP = exp(1 - 3/2).
  EXPECT_NEAR(bleu(t("CC"), t("CCO"), 2), std::exp(-0.5), 1e-9);
  // p1 = 4/4, p2 = 2/3 (AB, BA, AB vs AB, BB, BA).
  EXPECT_NEAR(bleu(t("ABAB"), t("ABBA"), 2), std::sqrt(2.0 / 3.0), 1e-9);
  // Zero matches: p1 = 1e-9 / 2.
  EXPECT_NEAR(bleu(t("NN"), t("CC"), 1), 5e-10, 1e-18);
  // p1 = 2/4 (clipped), p2 = 1/3, no brevity penalty.
  EXPECT_NEAR(bleu(t("CCCC"), t("CC"), 2), std::sqrt(1.0 / 6.0), 1e-9);
  // Word level with explicit weights. Bigram matches: "the cat", "on the", "the mat";
  // trigram: "on the mat"; no 4-gram matches.
  const double expected = std::exp(0.4 * std::log(5.0 / 6.0) + 0.3 * std::log(3.0 / 5.0) +
                                   0.2 * std::log(1.0 / 4.0) + 0.1 * std::log(1e-9 / 3.0));
  EXPECT_NEAR(bleu(words("the cat sat on the mat"), words("the cat is on the mat"), 4,
                   {0.4, 0.3, 0.2, 0.1}),
              expected, 1e-9);
}

TEST(Bleu, EdgeCases) {
  EXPECT_EQ(bleu({}, char_tokens("CC"), 4), 0.0);
  EXPECT_EQ(bleu(char_tokens("CC"), {}, 4), 0.0);
  EXPECT_LE(bleu(char_tokens("NNNN"), char_tokens("CCCC"), 4), 1e-4);
  EXPECT_THROW(bleu(char_tokens("C"), char_tokens("C"), 0), DomainError);
  EXPECT_THROW(bleu(char_tokens("C"), char_tokens("C"), 2, {0.5}), DomainError);
  EXPECT_THROW(bleu(char_tokens("C"), char_tokens("C"), 2, {0.5, 0.6}), DomainError);
}

TEST(Bleu, SelfScoreAndOovReplacement) {
  Rng rng(21);
  for (int t = 0; t < 500; ++t) {
    std::string s = random_string(rng, 16);
    if (s.empty()) s = "C";
    const std::string r = random_string(rng, 16);
    const auto cand = char_tokens(s);
    const auto ref = char_tokens(r);
    EXPECT_NEAR(bleu(cand, cand, 4), 1.0, 1e-12) << s;
    auto replaced = cand;
    replaced[rng.uniform_index(replaced.size())] = "#";  // outside the alphabet
    EXPECT_LE(bleu(replaced, ref, 4), bleu(cand, ref, 4)) << s << " | " << r;
  }
}

TEST(Tanimoto, Examples) {
  EXPECT_EQ(tanimoto(fp({1, 2, 3}), fp({1, 2, 3})), 1.0);
  EXPECT_EQ(tanimoto(fp({1, 2, 3}), fp({2, 3, 4})), 0.5);
  EXPECT_EQ(tanimoto(fp({1}), fp({})), 0.0);
  EXPECT_EQ(tanimoto(fp({}), fp({})), 0.0);
  EXPECT_THROW(tanimoto(fp({1}, 64), fp({1}, 128)), DomainError);
}

TEST(Tanimoto, MatchesSetArithmetic) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    std::set<std::uint32_t> a, b;
    const auto na = rng.uniform_index(60);
    const auto nb = rng.uniform_index(60);
    for (std::uint64_t i = 0; i < na; ++i) a.insert(static_cast<std::uint32_t>(rng.uniform_index(128)));
    for (std::uint64_t i = 0; i < nb; ++i) b.insert(static_cast<std::uint32_t>(rng.uniform_index(128)));
    std::vector<std::uint32_t> inter, uni;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(uni));
    const double expected =
        uni.empty() ? 0.0 : static_cast<double>(inter.size()) / static_cast<double>(uni.size());
    const auto fa = fp({a.begin(), a.end()}, 128);
    const auto fb = fp({b.begin(), b.end()}, 128);
    EXPECT_EQ(tanimoto(fa, fb), expected);
    EXPECT_EQ(tanimoto(fa, fb), tanimoto(fb, fa));
    if (!a.empty()) {
      EXPECT_EQ(tanimoto(fa, fa), 1.0);
    }
  }
}

TEST(Rouge, Examples) {
  EXPECT_EQ(rouge(words("a b c"), words("a c"), RougeVariant::One), 1.0);
  EXPECT_EQ(rouge(words("a b c"), words("a c"), RougeVariant::Two), 0.0);
  EXPECT_EQ(lcs_length(words("a b d c"), words("a b c")), 3u);
  EXPECT_NEAR(rouge(words("a b d c"), words("a b c"), RougeVariant::L), 6.0 / 7.0, 1e-12);
  for (auto v : {RougeVariant::One, RougeVariant::Two, RougeVariant::L}) {
    EXPECT_EQ(rouge(words("the acid is polar"), words("the acid is polar"), v), 1.0);
    EXPECT_EQ(rouge(words("a b"), {}, v), 0.0);
  }
}

TEST(Porter, ReferenceVectors) {
  const auto rows = testing::read_tsv_fixture("porter_vectors.tsv");
  ASSERT_GT(rows.size(), 100u);
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 2u);
    EXPECT_EQ(porter_stem(row[0]), row[1]) << row[0];
  }
  EXPECT_EQ(porter_stem("Cats"), "Cats");
  EXPECT_EQ(porter_stem(""), "");
}

TEST(Meteor, IdenticalTexts) {
  const auto w = words("the molecule is an aromatic alcohol");
  const double m = static_cast<double>(w.size());
  EXPECT_NEAR(meteor_simplified(w, w), 1.0 - 0.5 * std::pow(1.0 / m, 3.0), 1e-12);
}

TEST(Meteor, NoOverlapAndStemMatch) {
  EXPECT_EQ(meteor_simplified(words("red blue"), words("green yellow")), 0.0);
  // One stem match: P = R = 1, one chunk of one match.
  EXPECT_NEAR(meteor_simplified(words("cats"), words("cat")), 0.5, 1e-12);
}

TEST(Meteor, ChunkPenalty) {
  // Matches "a" -> 0 and "b" -> 2 are not adjacent in the reference: 2 chunks.
  const double p = 2.0 / 2.0;
  const double r = 2.0 / 3.0;
  const double fmean = 10 * p * r / (r + 9 * p);
  EXPECT_NEAR(meteor_simplified(words("a b"), words("a x b")), fmean * (1 - 0.5 * std::pow(1.0, 3)),
              1e-12);
}

std::vector<SmilesPair> fixture_pairs() {
  std::vector<SmilesPair> pairs;
  for (const auto& row : testing::read_tsv_fixture("text2mol_pairs.tsv")) {
    pairs.push_back({row.at(0), row.at(1)});
  }
  return pairs;
}

TEST(Text2Mol, MatchesIndependentFixture) {
  const auto expected = nlohmann::json::parse(testing::read_fixture("text2mol_expected.json"));
  const auto pairs = fixture_pairs();
  ASSERT_EQ(pairs.size(), 10u);
  const MetricsReport rep = evaluate_text2mol(pairs);
  EXPECT_NEAR(rep.bleu, expected["bleu"].get<double>(), 1e-9);
  EXPECT_NEAR(rep.exact, expected["exact"].get<double>(), 1e-9);
  EXPECT_NEAR(rep.canonical_match, expected["canonical_match"].get<double>(), 1e-9);
  EXPECT_NEAR(rep.levenshtein_mean, expected["levenshtein_mean"].get<double>(), 1e-9);
  EXPECT_NEAR(rep.validity, expected["validity"].get<double>(), 1e-9);
  EXPECT_NEAR(rep.morgan_fts_mean, expected["morgan_fts_mean"].get<double>(), 1e-9);
  EXPECT_NEAR(rep.path_fts_mean, expected["path_fts_mean"].get<double>(), 1e-9);
  const auto& c = expected["counts"];
  EXPECT_EQ(rep.counts.total, c["total"].get<std::size_t>());
  EXPECT_EQ(rep.counts.valid_candidates, c["valid_candidates"].get<std::size_t>());
  EXPECT_EQ(rep.counts.mutually_valid, c["mutually_valid"].get<std::size_t>());
  EXPECT_EQ(rep.counts.path_fts_pairs, c["path_fts_pairs"].get<std::size_t>());

  for (const auto& row : expected["pairs"]) {
    const auto cand = row["candidate"].get<std::string>();
    const auto ref = row["reference"].get<std::string>();
    EXPECT_NEAR(bleu(char_tokens(cand), char_tokens(ref), 4), row["bleu"].get<double>(), 1e-9) << cand;
    EXPECT_EQ(levenshtein(cand, ref), row["levenshtein"].get<std::size_t>()) << cand;
    if (row.contains("morgan_fts")) {
      const MetricsReport one = evaluate_text2mol({{cand, ref}});
      EXPECT_NEAR(one.morgan_fts_mean, row["morgan_fts"].get<double>(), 1e-9) << cand;
      EXPECT_EQ(one.canonical_match, row["canonical_match"].get<bool>() ? 1.0 : 0.0) << cand;
      if (row.contains("path_fts")) {
        EXPECT_NEAR(one.path_fts_mean, row["path_fts"].get<double>(), 1e-9) << cand;
      }
    }
  }
}

TEST(Text2Mol, GroundTruthRow) {
  std::vector<SmilesPair> pairs;
  for (const auto& p : fixture_pairs()) {
    if (smiles::is_valid_smiles(p.reference)) pairs.push_back({p.reference, p.reference});
  }
  const MetricsReport rep = evaluate_text2mol(pairs);
  EXPECT_EQ(rep.bleu, 1.0);
  EXPECT_EQ(rep.exact, 1.0);
  EXPECT_EQ(rep.levenshtein_mean, 0.0);
  EXPECT_EQ(rep.validity, 1.0);
  EXPECT_EQ(rep.morgan_fts_mean, 1.0);
  EXPECT_EQ(rep.path_fts_mean, 1.0);
  EXPECT_EQ(rep.canonical_match, 1.0);
}

TEST(Text2Mol, ExactIsRawStringRate) {
  EXPECT_EQ(evaluate_text2mol({{"CCO", "CCO"}, {"CC", "CO"}}).exact, 0.5);
  // Same molecule, different string: not exact, but a canonical match.
  const MetricsReport rep = evaluate_text2mol({{"OCC", "CCO"}});
  EXPECT_EQ(rep.exact, 0.0);
  EXPECT_EQ(rep.canonical_match, 1.0);
}

TEST(Text2Mol, EmptyInputIsDomainError) {
  EXPECT_THROW(evaluate_text2mol({}), DomainError);
  EXPECT_THROW(evaluate_mol2text({}), DomainError);
}

TEST(Text2Mol, PermutationInvariant) {
  auto pairs = fixture_pairs();
  const MetricsReport base = evaluate_text2mol(pairs);
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    rng.shuffle(pairs);
    EXPECT_EQ(evaluate_text2mol(pairs), base);
  }
}

TEST(Text2Mol, FuzzedFieldsInRange) {
  const std::vector<std::string> pool = {"C", "O", "N", "c", "1", "(", ")", "=", "#", "[", "]", "+", "Cl"};
  Rng rng(99);
  for (int t = 0; t < 200; ++t) {
    std::vector<SmilesPair> pairs(1 + rng.uniform_index(6));
    for (auto& p : pairs) {
      for (std::string* s : {&p.candidate, &p.reference}) {
        const auto n = rng.uniform_index(10);
        for (std::uint64_t i = 0; i < n; ++i) *s += pool[rng.uniform_index(pool.size())];
      }
    }
    const MetricsReport r = evaluate_text2mol(pairs);
    for (double v : {r.bleu, r.exact, r.canonical_match, r.validity, r.morgan_fts_mean, r.path_fts_mean}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    EXPECT_GE(r.levenshtein_mean, 0.0);
    EXPECT_LE(r.counts.mutually_valid, r.counts.valid_candidates);
    EXPECT_LE(r.counts.path_fts_pairs, r.counts.mutually_valid);
  }
}

TEST(Mol2Text, IdenticalAndRanges) {
  const TextMetricsReport same =
      evaluate_mol2text({{"The molecule is a diol.", "The molecule is a diol."}});
  EXPECT_EQ(same.bleu2, 1.0);
  EXPECT_EQ(same.bleu4, 1.0);
  EXPECT_EQ(same.rouge1, 1.0);
  EXPECT_EQ(same.rouge2, 1.0);
  EXPECT_EQ(same.rougeL, 1.0);
  EXPECT_GT(same.meteor_simplified, 0.99);
  const TextMetricsReport r = evaluate_mol2text(
      {{"an acid", "The molecule is a carboxylic acid."}, {"", "A ketone."}, {"ketones", "A ketone."}});
  EXPECT_EQ(r.total, 3u);
  for (double v : {r.bleu2, r.bleu4, r.rouge1, r.rouge2, r.rougeL, r.meteor_simplified}) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Report, TableColumnOrder) {
  const MetricsReport rep = evaluate_text2mol({{"CCO", "CCO"}});
  const std::string table = format_text2mol_table({{"ground truth", rep}});
  const std::vector<std::string> cols = {"BLEU", "Exact", "Levenshtein", "Validity",
                                         "RDK-path FTS", "Morgan FTS", "FCD"};
  std::string header;
  for (const auto& line : text::split(table, '\n')) {
    if (!line.empty() && line[0] != '#') {
      header = line;
      break;
    }
  }
  std::size_t pos = 0;
  for (const auto& c : cols) {
    const auto at = header.find(c, pos);
    ASSERT_NE(at, std::string::npos) << c;
    pos = at + c.size();
  }
  EXPECT_NE(table.find("n/a (requires pretrained activity model)"), std::string::npos);
}

TEST(Report, JsonlRoundTrip) {
  const MetricsReport rep = evaluate_text2mol(fixture_pairs());
  const std::string line = format_text2mol_jsonl({{"m", rep}});
  const auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["method"], "m");
  EXPECT_EQ(j["bleu"].get<double>(), rep.bleu);
  EXPECT_TRUE(j["fcd"].is_null());
  EXPECT_EQ(j["counts"]["path_fts_pairs"].get<std::size_t>(), rep.counts.path_fts_pairs);
}

}  // namespace
}  // namespace molgen::metrics
