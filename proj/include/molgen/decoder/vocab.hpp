#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace molgen::decoder {

// Output symbols of the character-level decoder. Indices 0-3 are reserved
// for PAD, BOS, EOS and UNK; the content symbols follow in a fixed order.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kBos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr std::size_t kReserved = 4;

  // Fixed chemistry base set plus any other character seen in the targets.
  // "Cl" and "Br" are single symbols.
  static Vocab smiles(const std::vector<std::string>& targets);
  // Every byte seen in the targets, for description generation.
  static Vocab characters(const std::vector<std::string>& targets);
  // Rebuilds a vocabulary from its content symbols, e.g. after loading.
  static Vocab from_symbols(std::vector<std::string> symbols);

  std::size_t size() const { return kReserved + symbols_.size(); }
  // Content symbols without the reserved entries, in index order.
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::string token(int index) const;

  // Greedy longest match; unmatched bytes become UNK and are counted.
  std::vector<int> encode(const std::string& s, std::size_t* unknown = nullptr) const;
  // Drops reserved indices.
  std::string decode(std::span<const int> indices) const;

  bool operator==(const Vocab&) const = default;

 private:
  std::vector<std::string> symbols_;
  std::size_t longest_ = 1;
};

}  // namespace molgen::decoder
