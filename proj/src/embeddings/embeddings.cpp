#include "molgen/embeddings/embeddings.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include "molgen/binio.hpp"
#include "molgen/error.hpp"
#include "molgen/hash.hpp"
#include "molgen/rng.hpp"
#include "molgen/text.hpp"

namespace molgen::emb {

std::vector<std::string> tokenize(std::string_view text) { return text::word_tokens(text); }

EmbeddingMatrix stub_embed(std::string_view text, std::size_t d, std::uint64_t seed) {
  if (d < 2) throw DomainError("stub embeddings need d >= 2");
  EmbeddingMatrix out;
  out.tokens = tokenize(text);
  out.matrix = num::Matrix(out.tokens.size(), d);
  for (std::size_t t = 0; t < out.tokens.size(); ++t) {
    Rng rng(mix_seed(seed, fnv1a64(out.tokens[t])));
    auto row = out.matrix.row(t);
    for (std::size_t i = 0; i < d; ++i) {
      const double freq = std::pow(10000.0, -static_cast<double>(i - i % 2) / static_cast<double>(d));
      const double angle = static_cast<double>(t) * freq;
      row[i] = rng.uniform(-1.0, 1.0) + (i % 2 == 0 ? std::sin(angle) : std::cos(angle));
    }
    double norm = 0.0;
    for (double x : row) norm += x * x;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& x : row) x /= norm;
    }
  }
  return out;
}

StubProvider::StubProvider(std::size_t d, std::uint64_t seed) : d_(d), seed_(seed) {
  if (d < 2) throw DomainError("stub embeddings need d >= 2");
}

std::filesystem::path embedding_file_path(const std::filesystem::path& dir, std::string_view text) {
  return dir / (sha256_hex(text) + ".emb");
}

void write_embedding_file(const std::filesystem::path& dir, std::string_view text, const EmbeddingMatrix& e) {
  if (e.tokens.size() != e.matrix.rows()) throw ShapeError("embedding file: token count differs from rows");
  std::filesystem::create_directories(dir);
  const auto path = embedding_file_path(dir, text);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  const Sha256Digest digest = sha256(text);
  out.write(reinterpret_cast<const char*>(digest.data()), digest.size());
  binio::put_u32(out, static_cast<std::uint32_t>(e.matrix.rows()));
  binio::put_u32(out, static_cast<std::uint32_t>(e.matrix.cols()));
  for (double v : e.matrix.data()) binio::put_f64(out, v);
  for (const auto& tok : e.tokens) binio::put_str(out, tok);
  if (!out) throw DataError("write failed: " + path.string());
}

EmbeddingMatrix read_embedding_file(const std::filesystem::path& path, std::string_view text) {
  constexpr const char* what = "embedding file";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("embedding file not found: " + path.string());
  Sha256Digest digest{};
  binio::read_exact(in, reinterpret_cast<char*>(digest.data()), digest.size(), what);
  if (digest != sha256(text)) throw DataError(path.string() + ": text hash does not match the requested text");
  const std::uint32_t m = binio::get_u32(in, what);
  const std::uint32_t d = binio::get_u32(in, what);
  if (static_cast<std::uint64_t>(m) * d > (1ULL << 28)) throw DataError(path.string() + ": matrix too large");
  EmbeddingMatrix e;
  e.matrix = num::Matrix(m, d);
  for (double& v : e.matrix.data()) v = binio::get_f64(in, what);
  for (std::uint32_t i = 0; i < m; ++i) e.tokens.push_back(binio::get_str(in, 1u << 20, what));
  return e;
}

FileProvider::FileProvider(std::filesystem::path dir, std::size_t d) : dir_(std::move(dir)), d_(d) {
  if (!std::filesystem::is_directory(dir_)) throw ConfigError("embedding directory not found: " + dir_.string());
}

EmbeddingMatrix FileProvider::embed(std::string_view text) const {
  return read_embedding_file(embedding_file_path(dir_, text), text);
}

EmbeddingMatrix embed_tokens(std::string_view text, const EmbeddingProvider& provider, std::size_t d) {
  if (provider.dim() != d) {
    throw ShapeError("embedding provider " + provider.id() + " has dimension " + std::to_string(provider.dim()) +
                     ", model expects " + std::to_string(d));
  }
  EmbeddingMatrix e = provider.embed(text);
  if (e.matrix.rows() == 0) throw DomainError("text has no tokens to embed: \"" + std::string(text) + "\"");
  if (e.matrix.cols() != d) {
    throw ShapeError("embedding provider " + provider.id() + " returned width " + std::to_string(e.matrix.cols()) +
                     ", expected " + std::to_string(d));
  }
  if (e.tokens.size() != e.matrix.rows()) {
    throw ShapeError("embedding provider " + provider.id() + " returned " + std::to_string(e.matrix.rows()) +
                     " rows for " + std::to_string(e.tokens.size()) + " tokens");
  }
  if (!num::all_finite(e.matrix)) throw NumericError("embedding provider " + provider.id() + " returned non-finite values");
  return e;
}

}  // namespace molgen::emb
