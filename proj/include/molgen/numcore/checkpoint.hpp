#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "molgen/numcore/matrix.hpp"

namespace molgen::num {

// Binary layout, all integers little-endian:
//   magic "MOLGENCK" (8 bytes)
//   u32 format version
//   u32 d, u32 heads, u32 head_dim, u32 vocab_size
//   u32 metadata length, metadata bytes (UTF-8 key=value lines)
//   u32 block count, then per block:
//     u32 name length, name bytes, u32 rows, u32 cols, rows*cols IEEE-754 doubles
inline constexpr char kCheckpointMagic[8] = {'M', 'O', 'L', 'G', 'E', 'N', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct CheckpointHeader {
  std::uint32_t version = kCheckpointVersion;
  std::uint32_t d = 0;
  std::uint32_t heads = 0;
  std::uint32_t head_dim = 0;
  std::uint32_t vocab_size = 0;

  bool operator==(const CheckpointHeader&) const = default;
};

struct NamedBlock {
  std::string name;
  Matrix value;

  bool operator==(const NamedBlock&) const = default;
};

struct Checkpoint {
  CheckpointHeader header;
  std::string metadata;
  std::vector<NamedBlock> blocks;

  bool operator==(const Checkpoint&) const = default;
};

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt);
Checkpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace molgen::num
