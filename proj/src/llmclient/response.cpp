#include "molgen/llmclient/response.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "molgen/text.hpp"

namespace molgen::llm {
namespace {

bool is_explanation_line(std::string_view line) {
  return text::starts_with_icase(text::trim(line), "explanation");
}

std::string after_marker(std::string_view line) {
  std::string_view s = text::trim(line);
  s.remove_prefix(std::string_view("explanation").size());
  s = text::trim(s);
  if (!s.empty() && s.front() == ':') s.remove_prefix(1);
  return std::string(text::trim(s));
}

std::string clean_candidate(std::string_view rest) {
  rest = text::trim(rest);
  const auto end = rest.find_first_of(" \t");
  std::string_view tok = rest.substr(0, end);
  auto wrap = [](char c) { return c == '`' || c == '*' || c == '"' || c == '\''; };
  while (!tok.empty() && wrap(tok.front())) tok.remove_prefix(1);
  while (!tok.empty() && (wrap(tok.back()) || tok.back() == ',' || tok.back() == ';')) tok.remove_suffix(1);
  return std::string(tok);
}

// "<digits>. x" or "<digits>) x"; returns the part after the marker.
std::optional<std::string_view> numbered_item(std::string_view line) {
  line = text::trim(line);
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i == 0 || i + 1 >= line.size()) return std::nullopt;
  if (line[i] != '.' && line[i] != ')') return std::nullopt;
  if (line[i + 1] != ' ' && line[i + 1] != '\t') return std::nullopt;
  return line.substr(i + 2);
}

std::optional<std::string_view> labelled_item(std::string_view line) {
  line = text::trim(line);
  if (!text::starts_with_icase(line, "smiles")) return std::nullopt;
  std::string_view rest = text::trim(line.substr(6));
  if (rest.empty() || rest.front() != ':') return std::nullopt;
  return rest.substr(1);
}

}  // namespace

LlmPrediction parse_response(const std::string& raw, std::size_t r_max) {
  LlmPrediction out;
  out.raw = raw;
  const auto lines = text::split(raw, '\n');
  std::vector<std::string> found;
  bool fenced = false;
  std::size_t i = 0;
  for (; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (!fenced && is_explanation_line(line)) break;
    if (text::trim(line).substr(0, 3) == "```") {
      fenced = !fenced;
      continue;
    }
    std::optional<std::string_view> item;
    if (fenced) {
      if (!text::trim(line).empty()) item = line;
    } else {
      item = numbered_item(line);
      if (!item) item = labelled_item(line);
    }
    if (!item) continue;
    std::string cand = clean_candidate(*item);
    if (!cand.empty()) found.push_back(std::move(cand));
  }
  if (i < lines.size()) {
    std::string expl = after_marker(lines[i]);
    for (std::size_t j = i + 1; j < lines.size(); ++j) expl += "\n" + lines[j];
    out.explanation = std::string(text::trim(expl));
  }
  for (auto& c : found) {
    if (out.ranked_smiles.size() == r_max) break;
    if (std::find(out.ranked_smiles.begin(), out.ranked_smiles.end(), c) == out.ranked_smiles.end()) {
      out.ranked_smiles.push_back(std::move(c));
    }
  }
  if (out.ranked_smiles.empty()) throw ParseEmptyError(raw);
  return out;
}

std::string render_response(const LlmPrediction& prediction) {
  std::string out;
  for (std::size_t i = 0; i < prediction.ranked_smiles.size(); ++i) {
    out += std::to_string(i + 1) + ". " + prediction.ranked_smiles[i] + "\n";
  }
  out += "\nExplanation: " + prediction.explanation + "\n";
  return out;
}

std::string extract_explanation(const std::string& raw) {
  const auto lines = text::split(raw, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!is_explanation_line(lines[i])) continue;
    std::string expl = after_marker(lines[i]);
    for (std::size_t j = i + 1; j < lines.size(); ++j) expl += "\n" + lines[j];
    return std::string(text::trim(expl));
  }
  return std::string(text::trim(raw));
}

}  // namespace molgen::llm
