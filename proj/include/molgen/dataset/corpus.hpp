#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace molgen::data {

inline constexpr const char* kCorpusHeader = "CID\tSMILES\tdescription";

struct TextMoleculePair {
  std::string id;
  std::string smiles;
  std::string description;

  bool operator==(const TextMoleculePair&) const = default;
};

struct Corpus {
  std::vector<TextMoleculePair> train;
  std::vector<TextMoleculePair> validation;
  std::vector<TextMoleculePair> test;

  bool operator==(const Corpus&) const = default;
};

// A data row whose SMILES did not parse. `line` is 1-based, counting the header.
struct QuarantineEntry {
  std::size_t line = 0;
  std::string id;
  std::string reason;
};

struct SplitLoad {
  std::vector<TextMoleculePair> records;
  std::vector<QuarantineEntry> quarantined;
};

struct LoadOptions {
  // Writes <file>.quarantine.txt next to each input that had quarantined rows.
  bool write_quarantine_reports = true;
};

struct CorpusLoad {
  Corpus corpus;
  std::size_t quarantined = 0;
  std::vector<std::filesystem::path> reports;
};

// Throws DataError on a missing file, a malformed header, a row without
// exactly three fields, or a duplicate CID (all naming the file and line).
SplitLoad load_split(const std::filesystem::path& path);

// Also rejects an id that appears in more than one split.
CorpusLoad load_corpus(const std::filesystem::path& train, const std::filesystem::path& validation,
                       const std::filesystem::path& test, const LoadOptions& options = {});

std::string render_split(const std::vector<TextMoleculePair>& records);
void write_split(const std::filesystem::path& path, const std::vector<TextMoleculePair>& records);
std::string render_quarantine_report(const std::filesystem::path& source,
                                     const std::vector<QuarantineEntry>& entries);

// Writes train.tsv, validation.tsv and test.tsv into `dir`.
void write_corpus(const std::filesystem::path& dir, const Corpus& corpus);

// Split sizes for n records: validation and test get round(n / 10) each (at
// least 1), train the rest. n = 100 gives 80/10/10.
struct SplitSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
};
SplitSizes split_sizes(std::size_t n);

// n distinct small molecules over C, N and O (random trees with optional ring
// closures), each with a templated description of its atom counts, rings and
// functional groups. Descriptions and canonical SMILES are unique within the
// corpus. Ids are SYN000001, SYN000002, ... Deterministic per seed. n >= 4.
Corpus make_synthetic_corpus(std::size_t n, std::uint64_t seed);

}  // namespace molgen::data
