#include "molgen/decoder/vocab.hpp"

#include <algorithm>
#include <set>

#include "molgen/error.hpp"

namespace molgen::decoder {
namespace {

const std::vector<std::string> kSmilesBase = {
    "C", "N", "O", "S", "P", "F", "I", "B", "Cl", "Br", "H", "c", "n", "o", "s", "p", "(", ")", "[", "]",
    "=", "#", "+", "-", "1", "2", "3", "4", "5", "6", "7", "8", "9", "0", "%", "@", "/", "\\", ".", ":"};

const char* const kReservedNames[] = {"<pad>", "<bos>", "<eos>", "<unk>"};

}  // namespace

Vocab Vocab::from_symbols(std::vector<std::string> symbols) {
  std::set<std::string> seen;
  for (const auto& s : symbols) {
    if (s.empty()) throw DataError("vocabulary contains an empty symbol");
    if (!seen.insert(s).second) throw DataError("vocabulary repeats symbol '" + s + "'");
  }
  Vocab v;
  v.symbols_ = std::move(symbols);
  for (const auto& s : v.symbols_) v.longest_ = std::max(v.longest_, s.size());
  return v;
}

Vocab Vocab::smiles(const std::vector<std::string>& targets) {
  std::vector<std::string> symbols = kSmilesBase;
  std::set<std::string> have(symbols.begin(), symbols.end());
  std::set<std::string> extra;
  for (const auto& t : targets) {
    for (char ch : t) {
      const std::string s(1, ch);
      if (!have.count(s)) extra.insert(s);
    }
  }
  symbols.insert(symbols.end(), extra.begin(), extra.end());
  return from_symbols(std::move(symbols));
}

Vocab Vocab::characters(const std::vector<std::string>& targets) {
  std::set<unsigned char> bytes;
  for (const auto& t : targets) bytes.insert(t.begin(), t.end());
  std::vector<std::string> symbols;
  for (unsigned char b : bytes) symbols.emplace_back(1, static_cast<char>(b));
  return from_symbols(std::move(symbols));
}

std::string Vocab::token(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= size()) {
    throw DomainError("token index " + std::to_string(index) + " outside vocabulary of " + std::to_string(size()));
  }
  if (index < static_cast<int>(kReserved)) return kReservedNames[index];
  return symbols_[index - kReserved];
}

std::vector<int> Vocab::encode(const std::string& s, std::size_t* unknown) const {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < s.size()) {
    int best = kUnk;
    std::size_t best_len = 1;
    for (std::size_t len = std::min(longest_, s.size() - i); len >= 1; --len) {
      const auto it = std::find(symbols_.begin(), symbols_.end(), s.substr(i, len));
      if (it != symbols_.end()) {
        best = static_cast<int>(kReserved + (it - symbols_.begin()));
        best_len = len;
        break;
      }
    }
    if (best == kUnk && unknown) ++*unknown;
    out.push_back(best);
    i += best_len;
  }
  return out;
}

std::string Vocab::decode(std::span<const int> indices) const {
  std::string out;
  for (int i : indices) {
    if (i >= static_cast<int>(kReserved) && static_cast<std::size_t>(i) < size()) out += symbols_[i - kReserved];
  }
  return out;
}

}  // namespace molgen::decoder
