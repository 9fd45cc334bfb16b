#include "arag/embedding.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <thread>

namespace arag {
namespace {

// FNV-1a, fixed so embeddings are stable across platforms and builds.
std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

HashEmbedder::HashEmbedder(int dimension)
    : dimension_(dimension), id_("hash-trigram-" + std::to_string(dimension)) {
  if (dimension < 1) throw EmbeddingError("embedding dimension must be >= 1");
}

Vector HashEmbedder::embed_one(const std::string& text) const {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  Vector v = Vector::Zero(dimension_);
  const std::size_t n = lower.size();
  if (n >= 3) {
    for (std::size_t i = 0; i + 3 <= n; ++i) {
      std::uint64_t h = fnv1a(std::string_view(lower).substr(i, 3));
      int bucket = static_cast<int>(h % static_cast<std::uint64_t>(dimension_));
      float sign = (h >> 63) ? -1.0f : 1.0f;
      v[bucket] += sign;
    }
  } else if (n > 0) {
    std::uint64_t h = fnv1a(lower);
    v[static_cast<int>(h % static_cast<std::uint64_t>(dimension_))] += (h >> 63) ? -1.0f : 1.0f;
  }

  float norm = v.norm();
  if (norm == 0.0f) {
    v.setZero();
    v[0] = 1.0f;
    return v;
  }
  return v / norm;
}

std::vector<Vector> HashEmbedder::embed_batch(const std::vector<std::string>& texts) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(embed_one(t));
  return out;
}

namespace {

using nlohmann::json;

class HttpEmbedder final : public EmbeddingProvider {
 public:
  explicit HttpEmbedder(HttpEmbedderConfig config)
      : config_(std::move(config)), id_("http:" + config_.model) {}

  const std::string& provider_id() const override { return id_; }
  int dimension() const override { return config_.dimension; }
  int batch_limit() const override { return config_.batch_limit; }

  std::vector<Vector> embed_batch(const std::vector<std::string>& texts) override {
    json body;
    body["input"] = texts;
    body["model"] = config_.model;

    std::string response = post_with_retries(body.dump());
    json parsed = json::parse(response);

    const json* rows = nullptr;
    if (parsed.contains("data") && parsed["data"].is_array()) {
      rows = &parsed["data"];
    } else if (parsed.contains("embeddings") && parsed["embeddings"].is_array()) {
      rows = &parsed["embeddings"];
    } else {
      throw EmbeddingError("embedding response has no data array");
    }
    if (rows->size() != texts.size()) {
      throw EmbeddingError("embedding response count mismatch: expected " +
                           std::to_string(texts.size()) + ", got " +
                           std::to_string(rows->size()));
    }

    std::vector<Vector> out;
    out.reserve(texts.size());
    for (const auto& row : *rows) {
      const json& values = row.is_object() ? row.at("embedding") : row;
      Vector v(static_cast<Eigen::Index>(values.size()));
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = values[static_cast<std::size_t>(i)].get<float>();
      }
      if (config_.dimension == 0) config_.dimension = static_cast<int>(v.size());
      if (static_cast<int>(v.size()) != config_.dimension) {
        throw EmbeddingError("embedding dimension mismatch: expected " +
                             std::to_string(config_.dimension) + ", got " +
                             std::to_string(v.size()));
      }
      float norm = v.norm();
      out.push_back(norm > 0.0f ? Vector(v / norm) : v);
    }
    return out;
  }

 private:
  std::string post_with_retries(const std::string& body) {
    auto [host, path] = split_url(config_.url);
    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      if (attempt > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(250 << (attempt - 1)));
      }
      httplib::Client client(host);
      client.set_read_timeout(config_.timeout_seconds, 0);
      httplib::Headers headers;
      if (!config_.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + config_.api_key);
      }
      auto res = client.Post(path, headers, body, "application/json");
      if (res && res->status >= 200 && res->status < 300) return res->body;
      if (res) {
        last_error = "HTTP " + std::to_string(res->status) + ": " +
                     res->body.substr(0, 200);
        if (res->status >= 400 && res->status < 500 && res->status != 429) break;
      } else {
        last_error = "transport error: " + httplib::to_string(res.error());
      }
    }
    throw EmbeddingError("embedding request failed: " + last_error);
  }

  static std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    std::size_t host_begin = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    auto path_begin = url.find('/', host_begin);
    if (path_begin == std::string::npos) return {url, "/"};
    return {url.substr(0, path_begin), url.substr(path_begin)};
  }

  HttpEmbedderConfig config_;
  std::string id_;
};

}  // namespace

std::unique_ptr<EmbeddingProvider> make_http_embedder(HttpEmbedderConfig config) {
  if (config.url.empty()) throw EmbeddingError("embedding endpoint URL is empty");
  return std::make_unique<HttpEmbedder>(std::move(config));
}

}  // namespace arag
