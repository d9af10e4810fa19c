#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace molgen::testing {

inline std::filesystem::path fixture_path(const std::string& name) {
  return std::filesystem::path(MOLGEN_FIXTURE_DIR) / name;
}

inline std::string read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Tab-separated rows, skipping blank lines and lines starting with '#'.
inline std::vector<std::vector<std::string>> read_tsv_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    std::vector<std::string> row;
    std::size_t start = 0;
    while (true) {
      const auto tab = line.find('\t', start);
      row.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (line.empty()) continue;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace molgen::testing
