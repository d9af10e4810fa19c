#include "molgen/dataset/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "molgen/error.hpp"
#include "molgen/smiles/parse.hpp"
#include "molgen/text.hpp"

namespace molgen::data {
namespace {

std::string where(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace

SplitLoad load_split(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("corpus file not found: " + path.string());
  SplitLoad out;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header) {
      if (line != kCorpusHeader) {
        throw DataError(where(path, lineno) + ": expected header 'CID<TAB>SMILES<TAB>description'");
      }
      header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto fields = text::split(line, '\t');
    if (fields.size() != 3) {
      throw DataError(where(path, lineno) + ": expected 3 tab-separated fields, found " +
                      std::to_string(fields.size()));
    }
    TextMoleculePair rec{std::string(text::trim(fields[0])), std::string(text::trim(fields[1])),
                         std::string(text::trim(fields[2]))};
    if (rec.id.empty()) throw DataError(where(path, lineno) + ": empty CID");
    if (!seen.insert(rec.id).second) {
      throw DataError(where(path, lineno) + ": duplicate CID " + rec.id);
    }
    std::string err;
    if (rec.smiles.empty()) {
      out.quarantined.push_back({lineno, rec.id, "empty SMILES"});
    } else if (!smiles::try_parse_smiles(rec.smiles, &err)) {
      out.quarantined.push_back({lineno, rec.id, err});
    } else {
      out.records.push_back(std::move(rec));
    }
  }
  if (!header) throw DataError(path.string() + ": empty file, expected a header row");
  return out;
}

CorpusLoad load_corpus(const std::filesystem::path& train, const std::filesystem::path& validation,
                       const std::filesystem::path& test, const LoadOptions& options) {
  CorpusLoad out;
  std::map<std::string, std::string> owner;
  const std::pair<const std::filesystem::path*, std::vector<TextMoleculePair>*> splits[] = {
      {&train, &out.corpus.train}, {&validation, &out.corpus.validation}, {&test, &out.corpus.test}};
  for (const auto& [path, dest] : splits) {
    SplitLoad s = load_split(*path);
    for (const auto& rec : s.records) {
      const auto [it, fresh] = owner.emplace(rec.id, path->string());
      if (!fresh) {
        throw DataError("CID " + rec.id + " appears in both " + it->second + " and " + path->string());
      }
    }
    out.quarantined += s.quarantined.size();
    if (options.write_quarantine_reports && !s.quarantined.empty()) {
      std::filesystem::path report = *path;
      report += ".quarantine.txt";
      write_file(report, render_quarantine_report(*path, s.quarantined));
      out.reports.push_back(report);
    }
    *dest = std::move(s.records);
  }
  return out;
}

std::string render_split(const std::vector<TextMoleculePair>& records) {
  std::string out = std::string(kCorpusHeader) + "\n";
  for (const auto& r : records) {
    for (const std::string* f : {&r.id, &r.smiles, &r.description}) {
      if (f->find_first_of("\t\n\r") != std::string::npos) {
        throw DataError("record " + r.id + ": fields may not contain tabs or newlines");
      }
    }
    out += r.id + "\t" + r.smiles + "\t" + r.description + "\n";
  }
  return out;
}

void write_split(const std::filesystem::path& path, const std::vector<TextMoleculePair>& records) {
  write_file(path, render_split(records));
}

std::string render_quarantine_report(const std::filesystem::path& source,
                                     const std::vector<QuarantineEntry>& entries) {
  std::ostringstream out;
  out << "# quarantined rows from " << source.filename().string() << ": " << entries.size() << "\n";
  out << "# line\tCID\treason\n";
  for (const auto& e : entries) out << e.line << "\t" << e.id << "\t" << e.reason << "\n";
  return out.str();
}

void write_corpus(const std::filesystem::path& dir, const Corpus& corpus) {
  std::filesystem::create_directories(dir);
  write_split(dir / "train.tsv", corpus.train);
  write_split(dir / "validation.tsv", corpus.validation);
  write_split(dir / "test.tsv", corpus.test);
}

SplitSizes split_sizes(std::size_t n) {
  SplitSizes s;
  s.validation = std::max<std::size_t>(1, (n + 5) / 10);
  s.test = s.validation;
  s.train = n - s.validation - s.test;
  return s;
}

}  // namespace molgen::data
