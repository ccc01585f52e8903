#include "rgqa/embedding.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#define CPPHTTPLIB_NO_EXCEPTIONS 0
#include "httplib.h"
#include "rgqa/jsonl.hpp"

namespace rgqa {

const EmbeddingVector& EmbeddingStore::get(const std::string& id) const {
  auto it = vectors.find(id);
  if (it == vectors.end())
    throw std::runtime_error("no embedding for id '" + id + "'");
  return it->second;
}

const EmbeddingVector& EmbeddingStore::get_trigger(const std::string& id) const {
  auto it = trigger_vectors.find(id);
  if (it == trigger_vectors.end())
    throw std::runtime_error("no trigger embedding for id '" + id + "'");
  return it->second;
}

double dot_product(const EmbeddingVector& a, const EmbeddingVector& b) {
  if (a.size() != b.size())
    throw std::runtime_error("dimension mismatch: " + std::to_string(a.size()) +
                             " vs " + std::to_string(b.size()));
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  return dot;
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
  const double dot = dot_product(a, b);
  const double na = std::sqrt(dot_product(a, a));
  const double nb = std::sqrt(dot_product(b, b));
  if (na == 0.0 || nb == 0.0)
    throw std::runtime_error("cosine similarity undefined for zero vector");
  return dot / (na * nb);
}

double similarity(const EmbeddingVector& a, const EmbeddingVector& b,
                  SimilarityMetric metric) {
  return metric == SimilarityMetric::Cosine ? cosine_similarity(a, b)
                                            : dot_product(a, b);
}

EmbeddingVector joint_representation(const EmbeddingVector& context_vec,
                                     const EmbeddingVector& trigger_vec) {
  if (context_vec.size() != trigger_vec.size())
    throw std::runtime_error("joint representation needs equal dimensions");
  EmbeddingVector out;
  out.reserve(context_vec.size() * 2);
  out.insert(out.end(), context_vec.begin(), context_vec.end());
  out.insert(out.end(), trigger_vec.begin(), trigger_vec.end());
  return out;
}

namespace {

void load_vector_file(const std::string& path, std::size_t& dimension,
                      std::map<std::string, EmbeddingVector>& target) {
  for_each_jsonl(path, [&](std::size_t lineno, const nlohmann::json& rec) {
    const std::string where = path + ":" + std::to_string(lineno);
    const std::string id = require_field(rec, "id", where).get<std::string>();
    EmbeddingVector vec =
        require_field(rec, "vector", where).get<EmbeddingVector>();
    for (double v : vec)
      if (!std::isfinite(v))
        throw std::runtime_error(where + ": non-finite entry for id '" + id + "'");
    if (dimension == 0) dimension = vec.size();
    if (vec.size() != dimension)
      throw std::runtime_error(where + ": dimension " +
                               std::to_string(vec.size()) + " differs from " +
                               std::to_string(dimension));
    if (!target.emplace(id, std::move(vec)).second)
      throw std::runtime_error(where + ": duplicate id '" + id + "'");
  });
}

}  // namespace

EmbeddingStore load_embeddings(const std::string& path,
                               const std::string& trigger_path) {
  EmbeddingStore store;
  load_vector_file(path, store.dimension, store.vectors);
  if (!trigger_path.empty())
    load_vector_file(trigger_path, store.dimension, store.trigger_vectors);
  return store;
}

void save_embeddings(const EmbeddingStore& store, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const auto& [id, vec] : store.vectors)
    out << nlohmann::json{{"id", id}, {"vector", vec}}.dump() << "\n";
}

std::vector<EmbeddingVector> fetch_embeddings(
    const std::vector<std::string>& texts, const EmbeddingClientConfig& config) {
  std::vector<EmbeddingVector> out;
  if (texts.empty()) return out;
  httplib::Client client(config.endpoint);
  client.set_read_timeout(config.timeout_seconds, 0);
  client.set_connection_timeout(config.timeout_seconds, 0);

  for (std::size_t offset = 0; offset < texts.size(); offset += config.max_batch) {
    const std::size_t n = std::min(config.max_batch, texts.size() - offset);
    nlohmann::json body;
    body["texts"] = std::vector<std::string>(texts.begin() + offset,
                                             texts.begin() + offset + n);
    httplib::Result res;
    for (int attempt = 0; attempt <= config.max_retries; ++attempt) {
      res = client.Post("/embed", body.dump(), "application/json");
      if (res && res->status == 200) break;
    }
    if (!res || res->status != 200)
      throw std::runtime_error("embedding service unreachable at " +
                               config.endpoint + " (retries exhausted)");
    auto parsed = nlohmann::json::parse(res->body);
    auto vectors = require_field(parsed, "vectors", "embedding response")
                       .get<std::vector<EmbeddingVector>>();
    if (vectors.size() != n)
      throw std::runtime_error(
          "embedding protocol error: sent " + std::to_string(n) +
          " texts, got " + std::to_string(vectors.size()) + " vectors");
    out.insert(out.end(), std::make_move_iterator(vectors.begin()),
               std::make_move_iterator(vectors.end()));
  }
  return out;
}

}  // namespace rgqa
