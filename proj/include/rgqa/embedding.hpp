#pragma once

#include <map>
#include <string>
#include <vector>

namespace rgqa {

using EmbeddingVector = std::vector<double>;

// Id-keyed fixed-dimension vectors. The optional trigger map carries
// trigger-text vectors for joint-representation sampling.
struct EmbeddingStore {
  std::size_t dimension = 0;
  std::map<std::string, EmbeddingVector> vectors;
  std::map<std::string, EmbeddingVector> trigger_vectors;

  const EmbeddingVector& get(const std::string& id) const;
  const EmbeddingVector& get_trigger(const std::string& id) const;
};

enum class SimilarityMetric { Cosine, Dot };

// a.b / (|a||b|). Throws on dimension mismatch or zero vectors.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

double dot_product(const EmbeddingVector& a, const EmbeddingVector& b);

double similarity(const EmbeddingVector& a, const EmbeddingVector& b,
                  SimilarityMetric metric);

// [context, trigger] concatenation, context first. Result has dimension 2d.
EmbeddingVector joint_representation(const EmbeddingVector& context_vec,
                                     const EmbeddingVector& trigger_vec);

// Line-delimited {id, vector} file; dimension discovered from the first
// line and enforced on the rest. `trigger_path`, when given, fills the
// trigger map (same format, same dimension).
EmbeddingStore load_embeddings(const std::string& path,
                               const std::string& trigger_path = "");

void save_embeddings(const EmbeddingStore& store, const std::string& path);

struct EmbeddingClientConfig {
  std::string endpoint;        // e.g. "http://localhost:8601"
  std::size_t max_batch = 64;
  int timeout_seconds = 30;
  int max_retries = 2;
};

// POSTs {"texts": [...]} batches to <endpoint>/embed and expects
// {"vectors": [[...]]}, one vector per text, order preserved.
// Empty input returns an empty list without touching the network.
std::vector<EmbeddingVector> fetch_embeddings(
    const std::vector<std::string>& texts, const EmbeddingClientConfig& config);

}  // namespace rgqa
