#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rgqa/corpus.hpp"
#include "rgqa/embedding.hpp"

namespace rgqa {

// A stored (question, context, answers) example retrievable by similarity.
struct Demonstration {
  std::string id;
  std::string question;
  std::string context;
  std::vector<std::string> answers;  // empty list kept as a negative
  std::string event_type;
  std::string role;

  bool has_answer() const { return !answers.empty(); }
};

struct RetrievalResult {
  std::size_t demo_index = 0;
  std::string demo_id;
  double score = 0.0;
};

struct DemoStore {
  std::vector<Demonstration> demos;

  std::size_t size() const { return demos.size(); }
  const Demonstration& by_id(const std::string& id) const;
};

DemoStore build_store(const std::vector<RoleInstance>& instances);

DemoStore load_store(const std::string& path);
void save_store(const DemoStore& store, const std::string& path);

// Exhaustive top-k scan. Results sorted by descending score, ties broken by
// ascending demo id; with exclude_self the query's own id never appears.
std::vector<RetrievalResult> retrieve_top(const std::string& query_id,
                                          const EmbeddingVector& query_vec,
                                          const DemoStore& store,
                                          const EmbeddingStore& embeddings,
                                          std::size_t k, bool exclude_self,
                                          SimilarityMetric metric = SimilarityMetric::Cosine);

// 1 iff score strictly exceeds the threshold and both the demonstration and
// the current instance have a non-empty answer.
int analogy_label(double score, double threshold, bool demo_nonempty,
                  bool current_nonempty);

}  // namespace rgqa
