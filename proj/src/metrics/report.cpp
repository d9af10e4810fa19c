#include "molgen/metrics/report.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>

#include <nlohmann/json.hpp>

#include "molgen/error.hpp"
#include "molgen/metrics/sequence.hpp"
#include "molgen/metrics/text.hpp"
#include "molgen/smiles/canonical.hpp"
#include "molgen/smiles/fingerprint.hpp"
#include "molgen/smiles/parse.hpp"
#include "molgen/text.hpp"

namespace molgen::metrics {
namespace {

constexpr const char* kFcdCell = "n/a (requires pretrained activity model)";

double rate(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& body) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : body) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      out += c + 1 == cells.size() ? cells[c] : pad(cells[c], width[c]) + "  ";
    }
    return out + "\n";
  };
  std::string out = line(header);
  for (const auto& row : body) out += line(row);
  return out;
}

}  // namespace

double order_free_mean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

MetricsReport evaluate_text2mol(const std::vector<SmilesPair>& pairs) {
  if (pairs.empty()) throw DomainError("evaluate_text2mol: no pairs to evaluate");
  MetricsReport rep;
  rep.counts.total = pairs.size();
  std::vector<double> bleus, edits, morgan, path;
  std::size_t exact = 0;
  std::size_t canonical = 0;
  for (const SmilesPair& p : pairs) {
    if (p.candidate == p.reference) ++exact;
    bleus.push_back(bleu(char_tokens(p.candidate), char_tokens(p.reference), 4));
    edits.push_back(static_cast<double>(levenshtein(p.candidate, p.reference)));
    const auto cand = smiles::try_parse_smiles(p.candidate);
    if (!cand) continue;
    ++rep.counts.valid_candidates;
    const auto ref = smiles::try_parse_smiles(p.reference);
    if (!ref) continue;
    ++rep.counts.mutually_valid;
    if (smiles::canonical_smiles(*cand) == smiles::canonical_smiles(*ref)) ++canonical;
    morgan.push_back(tanimoto(smiles::morgan_fingerprint(*cand, 2, 2048),
                              smiles::morgan_fingerprint(*ref, 2, 2048)));
    const auto pc = smiles::path_fingerprint(*cand, 7, 2048);
    const auto pr = smiles::path_fingerprint(*ref, 7, 2048);
    if (pc.bits.empty() && pr.bits.empty()) continue;
    path.push_back(tanimoto(pc, pr));
  }
  rep.counts.path_fts_pairs = path.size();
  rep.exact = rate(exact, rep.counts.total);
  rep.validity = rate(rep.counts.valid_candidates, rep.counts.total);
  rep.canonical_match = rate(canonical, rep.counts.mutually_valid);
  rep.bleu = order_free_mean(bleus);
  rep.levenshtein_mean = order_free_mean(edits);
  rep.morgan_fts_mean = order_free_mean(morgan);
  rep.path_fts_mean = order_free_mean(path);
  return rep;
}

TextMetricsReport evaluate_mol2text(const std::vector<TextPair>& pairs) {
  if (pairs.empty()) throw DomainError("evaluate_mol2text: no pairs to evaluate");
  std::vector<double> b2, b4, r1, r2, rl, met;
  for (const TextPair& p : pairs) {
    const auto c = text::word_punct_tokens(p.candidate);
    const auto r = text::word_punct_tokens(p.reference);
    b2.push_back(bleu(c, r, 2));
    b4.push_back(bleu(c, r, 4));
    r1.push_back(rouge(c, r, RougeVariant::One));
    r2.push_back(rouge(c, r, RougeVariant::Two));
    rl.push_back(rouge(c, r, RougeVariant::L));
    met.push_back(meteor_simplified(c, r));
  }
  TextMetricsReport rep;
  rep.total = pairs.size();
  rep.bleu2 = order_free_mean(b2);
  rep.bleu4 = order_free_mean(b4);
  rep.rouge1 = order_free_mean(r1);
  rep.rouge2 = order_free_mean(r2);
  rep.rougeL = order_free_mean(rl);
  rep.meteor_simplified = order_free_mean(met);
  return rep;
}

std::string format_text2mol_table(const std::vector<Text2MolRow>& rows) {
  std::string out =
      "# text2mol. BLEU: character-level, n-grams up to 4, uniform weights. Exact: raw strings.\n"
      "# FTS and canonical match over mutually valid pairs; path FTS skips pairs where neither\n"
      "# molecule has a bond. Morgan radius 2, 2048 bits; paths up to 7 bonds, 2048 bits.\n"
      "# MACCS FTS is not computed.\n";
  const std::vector<std::string> header = {"Method", "BLEU", "Exact", "Levenshtein", "Validity",
                                           "RDK-path FTS", "Morgan FTS", "FCD", "Canonical match",
                                           "pairs", "valid", "FTS pairs", "path FTS pairs"};
  std::vector<std::vector<std::string>> body;
  for (const auto& [name, r] : rows) {
    body.push_back({name, fixed(r.bleu), fixed(r.exact), fixed(r.levenshtein_mean, 2),
                    fixed(r.validity), fixed(r.path_fts_mean), fixed(r.morgan_fts_mean), kFcdCell,
                    fixed(r.canonical_match), std::to_string(r.counts.total),
                    std::to_string(r.counts.valid_candidates), std::to_string(r.counts.mutually_valid),
                    std::to_string(r.counts.path_fts_pairs)});
  }
  return out + render_table(header, body);
}

std::string format_mol2text_table(const std::vector<Mol2TextRow>& rows) {
  std::string out =
      "# mol2text. Word-level tokens (lowercased words and punctuation marks).\n"
      "# ROUGE-1/2 are recall; ROUGE-L is LCS F1. METEOR without synonymy.\n";
  const std::vector<std::string> header = {"Method", "BLEU-2", "BLEU-4", "ROUGE-1", "ROUGE-2",
                                           "ROUGE-L", "METEOR (simplified)", "pairs"};
  std::vector<std::vector<std::string>> body;
  for (const auto& [name, r] : rows) {
    body.push_back({name, fixed(r.bleu2), fixed(r.bleu4), fixed(r.rouge1), fixed(r.rouge2),
                    fixed(r.rougeL), fixed(r.meteor_simplified), std::to_string(r.total)});
  }
  return out + render_table(header, body);
}

std::string format_text2mol_jsonl(const std::vector<Text2MolRow>& rows) {
  std::string out;
  for (const auto& [name, r] : rows) {
    nlohmann::ordered_json j;
    j["method"] = name;
    j["bleu"] = r.bleu;
    j["exact"] = r.exact;
    j["levenshtein_mean"] = r.levenshtein_mean;
    j["validity"] = r.validity;
    j["path_fts_mean"] = r.path_fts_mean;
    j["morgan_fts_mean"] = r.morgan_fts_mean;
    j["fcd"] = nullptr;
    j["canonical_match"] = r.canonical_match;
    j["counts"] = {{"total", r.counts.total},
                   {"valid_candidates", r.counts.valid_candidates},
                   {"mutually_valid", r.counts.mutually_valid},
                   {"path_fts_pairs", r.counts.path_fts_pairs}};
    out += j.dump() + "\n";
  }
  return out;
}

std::string format_mol2text_jsonl(const std::vector<Mol2TextRow>& rows) {
  std::string out;
  for (const auto& [name, r] : rows) {
    nlohmann::ordered_json j;
    j["method"] = name;
    j["bleu2"] = r.bleu2;
    j["bleu4"] = r.bleu4;
    j["rouge1"] = r.rouge1;
    j["rouge2"] = r.rouge2;
    j["rougeL"] = r.rougeL;
    j["meteor_simplified"] = r.meteor_simplified;
    j["total"] = r.total;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace molgen::metrics
