#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <shared_mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "arena/metrics.hpp"

namespace arena {

// Source of sentence embeddings. `embed` returns one vector per input text,
// in input order.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::vector<std::vector<double>> embed(
      std::span<const std::string> texts) = 0;
};

// Splits "http://host:port/path" into the scheme+authority part and the path.
// The path defaults to `default_path` when the URL has none.
struct Endpoint {
  std::string base;
  std::string path;
};
Endpoint parse_endpoint(std::string_view url, std::string_view default_path);

// POST {texts: [...]} -> {vectors: [[...], ...]}.
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(std::string url, double timeout_seconds = 30.0);
  std::vector<std::vector<double>> embed(
      std::span<const std::string> texts) override;

 private:
  Endpoint endpoint_;
  double timeout_seconds_;
};

// Deterministic feature-hashing bag of words over `tokenize` output, plus
// hashed character trigrams, L2-normalized. Needs no network; used for
// offline runs and fixtures.
class HashingEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HashingEmbeddingProvider(std::size_t dimension = 256);
  std::vector<std::vector<double>> embed(
      std::span<const std::string> texts) override;

 private:
  std::size_t dimension_;
};

std::string sha256_hex(std::string_view data);

// Caches provider vectors on disk (one JSON file per SHA-256 of the text) and
// enforces a single dimension across the lifetime of the embedder. Reads may
// run concurrently; provider calls and cache writes are serialized.
class Embedder {
 public:
  // `cache_dir` may be empty to disable the disk cache. `provider` may be null,
  // in which case only cache hits succeed.
  Embedder(std::shared_ptr<EmbeddingProvider> provider,
           std::filesystem::path cache_dir, std::size_t batch_size = 64);

  EmbeddingVector embed(const std::string& text);

  // Embeds all texts, fetching cache misses from the provider in batches.
  std::vector<EmbeddingVector> embed_all(std::span<const std::string> texts);

  std::optional<std::size_t> dimension() const;

 private:
  std::optional<EmbeddingVector> read_cache(const std::string& hash) const;
  void write_cache(const std::string& hash, const EmbeddingVector& v) const;
  void check_dimension(std::size_t dim);

  std::shared_ptr<EmbeddingProvider> provider_;
  std::filesystem::path cache_dir_;
  std::size_t batch_size_;
  mutable std::shared_mutex mu_;
  std::unordered_map<std::string, EmbeddingVector> memory_;
  std::optional<std::size_t> dimension_;
};

}  // namespace arena
