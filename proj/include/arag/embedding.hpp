#pragma once

#include <Eigen/Core>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace arag {

using Vector = Eigen::VectorXf;

struct EmbeddingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Turns text into unit-normalized dense vectors. Implementations must be
// deterministic for identical input and safe for concurrent embed_batch calls.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual const std::string& provider_id() const = 0;
  virtual int dimension() const = 0;
  virtual int batch_limit() const = 0;

  // Output order matches input order; every vector is L2-normalized.
  virtual std::vector<Vector> embed_batch(const std::vector<std::string>& texts) = 0;

  Vector embed(const std::string& text) { return embed_batch({text})[0]; }
};

// Deterministic offline embedder: hashes character trigrams of the lowercased
// text into d buckets with signed counts, then L2-normalizes. The all-zero
// pathological case (e.g. empty text) maps to the basis vector e0.
class HashEmbedder final : public EmbeddingProvider {
 public:
  explicit HashEmbedder(int dimension = 256);

  const std::string& provider_id() const override { return id_; }
  int dimension() const override { return dimension_; }
  int batch_limit() const override { return 1024; }
  std::vector<Vector> embed_batch(const std::vector<std::string>& texts) override;

  Vector embed_one(const std::string& text) const;

 private:
  int dimension_;
  std::string id_;
};

struct HttpEmbedderConfig {
  std::string url;      // full endpoint URL, e.g. https://host/v1/embeddings
  std::string api_key;
  std::string model;
  int dimension = 0;    // expected dimension; 0 = take from first response
  int batch_limit = 128;
  int max_retries = 3;
  int timeout_seconds = 120;
};

// Remote embeddings-over-HTTP provider (POST {"input": [...], "model": id}).
std::unique_ptr<EmbeddingProvider> make_http_embedder(HttpEmbedderConfig config);

}  // namespace arag
