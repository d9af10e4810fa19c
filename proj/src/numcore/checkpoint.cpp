#include "molgen/numcore/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "molgen/binio.hpp"
#include "molgen/error.hpp"

namespace molgen::num {
namespace {

constexpr const char* kWhat = "checkpoint";

using binio::put_f64;
using binio::put_str;
using binio::put_u32;

void read_exact(std::istream& in, char* dst, std::size_t n) { binio::read_exact(in, dst, n, kWhat); }
std::uint32_t get_u32(std::istream& in) { return binio::get_u32(in, kWhat); }
double get_f64(std::istream& in) { return binio::get_f64(in, kWhat); }
std::string get_str(std::istream& in, std::uint32_t limit) { return binio::get_str(in, limit, kWhat); }

}  // namespace

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  put_u32(out, ckpt.header.version);
  put_u32(out, ckpt.header.d);
  put_u32(out, ckpt.header.heads);
  put_u32(out, ckpt.header.head_dim);
  put_u32(out, ckpt.header.vocab_size);
  put_str(out, ckpt.metadata);
  put_u32(out, static_cast<std::uint32_t>(ckpt.blocks.size()));
  for (const NamedBlock& b : ckpt.blocks) {
    put_str(out, b.name);
    put_u32(out, static_cast<std::uint32_t>(b.value.rows()));
    put_u32(out, static_cast<std::uint32_t>(b.value.cols()));
    for (double v : b.value.data()) put_f64(out, v);
  }
  if (!out) throw DataError("checkpoint: write failed");
}

Checkpoint read_checkpoint(std::istream& in) {
  char magic[sizeof kCheckpointMagic];
  read_exact(in, magic, sizeof magic);
  if (std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) {
    throw DataError("checkpoint: bad magic");
  }
  Checkpoint ckpt;
  ckpt.header.version = get_u32(in);
  if (ckpt.header.version != kCheckpointVersion) {
    throw DataError("checkpoint: unsupported format version " +
                    std::to_string(ckpt.header.version));
  }
  ckpt.header.d = get_u32(in);
  ckpt.header.heads = get_u32(in);
  ckpt.header.head_dim = get_u32(in);
  ckpt.header.vocab_size = get_u32(in);
  ckpt.metadata = get_str(in, 1u << 24);
  const std::uint32_t count = get_u32(in);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedBlock b;
    b.name = get_str(in, 4096);
    const std::uint32_t rows = get_u32(in);
    const std::uint32_t cols = get_u32(in);
    const std::uint64_t n = static_cast<std::uint64_t>(rows) * cols;
    if (n > (1ULL << 32)) throw DataError("checkpoint: block '" + b.name + "' too large");
    std::vector<double> data(n);
    for (double& v : data) v = get_f64(in);
    b.value = Matrix(rows, cols, std::move(data));
    ckpt.blocks.push_back(std::move(b));
  }
  return ckpt;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("checkpoint: cannot open " + path.string() + " for writing");
  write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("checkpoint: cannot open " + path.string());
  return read_checkpoint(in);
}

}  // namespace molgen::num
