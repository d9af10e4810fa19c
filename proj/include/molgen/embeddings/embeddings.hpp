#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "molgen/numcore/matrix.hpp"

namespace molgen::emb {

// m×d token embeddings for one text, one row per token.
struct EmbeddingMatrix {
  std::vector<std::string> tokens;
  num::Matrix matrix;

  bool operator==(const EmbeddingMatrix&) const = default;
};

// Lowercased word tokens; whitespace and punctuation separate.
std::vector<std::string> tokenize(std::string_view text);

// Token-embedding source. Deterministic for a fixed text and provider state,
// and safe to call concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string id() const = 0;
  virtual std::size_t dim() const = 0;
  virtual EmbeddingMatrix embed(std::string_view text) const = 0;
};

// Row t = normalize(base(token_t) + positional(t)). The base vector is drawn
// uniformly from [-1, 1)^d by a generator seeded with (seed, token hash); the
// positional term is the usual sin/cos pair at frequency 10000^(-2i/d).
EmbeddingMatrix stub_embed(std::string_view text, std::size_t d, std::uint64_t seed);

class StubProvider final : public EmbeddingProvider {
 public:
  StubProvider(std::size_t d, std::uint64_t seed);
  std::string id() const override { return "stub"; }
  std::size_t dim() const override { return d_; }
  EmbeddingMatrix embed(std::string_view text) const override { return stub_embed(text, d_, seed_); }

 private:
  std::size_t d_;
  std::uint64_t seed_;
};

// Precomputed embeddings, one file per text named <sha256(text)>.emb:
//   32 bytes  SHA-256 of the text
//   u32 m, u32 d
//   m*d little-endian doubles, row-major
//   m tokens, each u32 length + bytes
// Files are read on demand; a missing file is a DataError naming the hash.
class FileProvider final : public EmbeddingProvider {
 public:
  FileProvider(std::filesystem::path dir, std::size_t d);
  std::string id() const override { return "file"; }
  std::size_t dim() const override { return d_; }
  EmbeddingMatrix embed(std::string_view text) const override;

 private:
  std::filesystem::path dir_;
  std::size_t d_;
};

std::filesystem::path embedding_file_path(const std::filesystem::path& dir, std::string_view text);
void write_embedding_file(const std::filesystem::path& dir, std::string_view text, const EmbeddingMatrix& e);
EmbeddingMatrix read_embedding_file(const std::filesystem::path& path, std::string_view text);

// Validated front end: DomainError when the text has no tokens or the provider
// returns no rows, ShapeError when the row width is not d or the token count
// and row count disagree, NumericError on non-finite entries.
EmbeddingMatrix embed_tokens(std::string_view text, const EmbeddingProvider& provider, std::size_t d);

}  // namespace molgen::emb
