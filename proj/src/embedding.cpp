#include "arena/embedding.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "arena/error.hpp"
#include "arena/jsonl.hpp"
#include "httplib.h"

namespace arena {

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ull ^ seed;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::vector<double> parse_vector(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::kMalformedResponse, "vector is not an array");
  std::vector<double> v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) {
      throw Error(ErrorCode::kMalformedResponse, "vector component is not a number");
    }
    v.push_back(x.get<double>());
  }
  return v;
}

}  // namespace

Endpoint parse_endpoint(std::string_view url, std::string_view default_path) {
  Endpoint ep;
  auto scheme = url.find("://");
  std::size_t authority_start = scheme == std::string_view::npos ? 0 : scheme + 3;
  auto slash = url.find('/', authority_start);
  if (slash == std::string_view::npos) {
    ep.base = std::string(url);
    ep.path = std::string(default_path);
  } else {
    ep.base = std::string(url.substr(0, slash));
    ep.path = std::string(url.substr(slash));
  }
  if (scheme == std::string_view::npos) ep.base = "http://" + ep.base;
  return ep;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string url,
                                             double timeout_seconds)
    : endpoint_(parse_endpoint(url, "/embed")),
      timeout_seconds_(timeout_seconds) {}

std::vector<std::vector<double>> HttpEmbeddingProvider::embed(
    std::span<const std::string> texts) {
  httplib::Client client(endpoint_.base);
  const auto secs = static_cast<time_t>(timeout_seconds_);
  client.set_connection_timeout(secs, 0);
  client.set_read_timeout(secs, 0);
  Json body = {{"texts", Json::array()}};
  for (const auto& t : texts) body["texts"].push_back(t);
  auto res = client.Post(endpoint_.path, body.dump(), "application/json");
  if (!res) {
    throw Error(ErrorCode::kProviderUnreachable,
                "embedding provider " + endpoint_.base + " unreachable: " +
                    httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kMalformedResponse,
                "embedding provider answered HTTP " + std::to_string(res->status));
  }
  Json reply;
  try {
    reply = Json::parse(res->body);
  } catch (const Json::parse_error&) {
    throw Error(ErrorCode::kMalformedResponse, "embedding provider sent invalid JSON");
  }
  auto it = reply.find("vectors");
  if (!reply.is_object() || it == reply.end() || !it->is_array() ||
      it->size() != texts.size()) {
    throw Error(ErrorCode::kMalformedResponse,
                "embedding reply must carry one vector per text");
  }
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& v : *it) out.push_back(parse_vector(v));
  return out;
}

HashingEmbeddingProvider::HashingEmbeddingProvider(std::size_t dimension)
    : dimension_(dimension) {
  if (dimension_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "embedding dimension must be positive");
  }
}

std::vector<std::vector<double>> HashingEmbeddingProvider::embed(
    std::span<const std::string> texts) {
  std::vector<std::vector<double>> out;
  out.reserve(texts.size());
  for (const auto& text : texts) {
    std::vector<double> v(dimension_, 0.0);
    TokenSequence tokens = tokenize(text);
    if (tokens.empty()) tokens.push_back(text);
    for (const auto& tok : tokens) {
      v[fnv1a(tok, 0) % dimension_] += 1.0;
      const std::string padded = "<" + tok + ">";
      for (std::size_t i = 0; i + 3 <= padded.size(); ++i) {
        v[fnv1a(std::string_view(padded).substr(i, 3), 1) % dimension_] += 0.25;
      }
    }
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    out.push_back(std::move(v));
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::kInternal, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

Embedder::Embedder(std::shared_ptr<EmbeddingProvider> provider,
                   std::filesystem::path cache_dir, std::size_t batch_size)
    : provider_(std::move(provider)),
      cache_dir_(std::move(cache_dir)),
      batch_size_(batch_size == 0 ? 1 : batch_size) {
  if (!cache_dir_.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cache_dir_, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create cache dir " + cache_dir_.string());
  }
}

std::optional<std::size_t> Embedder::dimension() const {
  std::shared_lock lock(mu_);
  return dimension_;
}

std::optional<EmbeddingVector> Embedder::read_cache(const std::string& hash) const {
  if (cache_dir_.empty()) return std::nullopt;
  std::ifstream in(cache_dir_ / (hash + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    Json j = Json::parse(buf.str());
    EmbeddingVector v{parse_vector(j.at("vector"))};
    if (v.dimension() == 0) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    // A torn or foreign file is treated as a miss and rewritten.
    return std::nullopt;
  }
}

void Embedder::write_cache(const std::string& hash, const EmbeddingVector& v) const {
  if (cache_dir_.empty()) return;
  Json j = {{"sha256", hash},
            {"dimension", v.dimension()},
            {"vector", v.components}};
  write_file_atomically(cache_dir_ / (hash + ".json"), j.dump());
}

void Embedder::check_dimension(std::size_t dim) {
  if (dim == 0) {
    throw Error(ErrorCode::kMalformedResponse, "provider returned an empty vector");
  }
  if (!dimension_) {
    dimension_ = dim;
  } else if (*dimension_ != dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "embedding dimension changed from " + std::to_string(*dimension_) +
                    " to " + std::to_string(dim) + " within one run");
  }
}

EmbeddingVector Embedder::embed(const std::string& text) {
  return embed_all(std::span<const std::string>(&text, 1)).front();
}

std::vector<EmbeddingVector> Embedder::embed_all(std::span<const std::string> texts) {
  std::vector<std::string> hashes;
  hashes.reserve(texts.size());
  for (const auto& t : texts) hashes.push_back(sha256_hex(t));

  {
    std::shared_lock read(mu_);
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& h : hashes) {
      auto it = memory_.find(h);
      if (it == memory_.end()) break;
      out.push_back(it->second);
    }
    if (out.size() == texts.size()) return out;
  }

  std::unique_lock lock(mu_);
  std::vector<std::size_t> misses;
  std::unordered_set<std::string> queued;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    if (memory_.count(hashes[i])) continue;
    if (auto cached = read_cache(hashes[i])) {
      check_dimension(cached->dimension());
      memory_.emplace(hashes[i], std::move(*cached));
      continue;
    }
    if (queued.insert(hashes[i]).second) misses.push_back(i);
  }

  for (std::size_t start = 0; start < misses.size(); start += batch_size_) {
    if (!provider_) {
      throw Error(ErrorCode::kProviderUnreachable,
                  "text not in embedding cache and no provider configured");
    }
    const std::size_t end = std::min(misses.size(), start + batch_size_);
    std::vector<std::string> batch;
    for (std::size_t k = start; k < end; ++k) batch.push_back(texts[misses[k]]);
    auto vectors = provider_->embed(batch);
    if (vectors.size() != batch.size()) {
      throw Error(ErrorCode::kMalformedResponse,
                  "provider returned " + std::to_string(vectors.size()) +
                      " vectors for " + std::to_string(batch.size()) + " texts");
    }
    for (std::size_t k = start; k < end; ++k) {
      EmbeddingVector v{std::move(vectors[k - start])};
      check_dimension(v.dimension());
      write_cache(hashes[misses[k]], v);
      memory_.emplace(hashes[misses[k]], std::move(v));
    }
  }

  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& h : hashes) out.push_back(memory_.at(h));
  return out;
}

}  // namespace arena
