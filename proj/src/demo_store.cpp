#include "rgqa/demo_store.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <stdexcept>

#include "rgqa/jsonl.hpp"

namespace rgqa {

const Demonstration& DemoStore::by_id(const std::string& id) const {
  for (const auto& d : demos)
    if (d.id == id) return d;
  throw std::runtime_error("no demonstration with id '" + id + "'");
}

DemoStore build_store(const std::vector<RoleInstance>& instances) {
  DemoStore store;
  std::set<std::string> seen;
  store.demos.reserve(instances.size());
  for (const auto& inst : instances) {
    if (!seen.insert(inst.id).second)
      throw std::runtime_error("duplicate instance id '" + inst.id + "'");
    Demonstration d;
    d.id = inst.id;
    d.question = inst.question;
    d.context = inst.context;
    for (const auto& g : inst.gold_args) d.answers.push_back(g.text);
    d.event_type = inst.event_type;
    d.role = inst.role;
    store.demos.push_back(std::move(d));
  }
  return store;
}

DemoStore load_store(const std::string& path) {
  DemoStore store;
  std::set<std::string> seen;
  for_each_jsonl(path, [&](std::size_t lineno, const nlohmann::json& rec) {
    const std::string where = path + ":" + std::to_string(lineno);
    Demonstration d;
    d.id = require_field(rec, "id", where).get<std::string>();
    d.question = require_field(rec, "question", where).get<std::string>();
    d.context = require_field(rec, "context", where).get<std::string>();
    d.answers =
        require_field(rec, "answers", where).get<std::vector<std::string>>();
    d.event_type = require_field(rec, "event_type", where).get<std::string>();
    d.role = require_field(rec, "role", where).get<std::string>();
    if (!seen.insert(d.id).second)
      throw std::runtime_error(where + ": duplicate demonstration id '" + d.id + "'");
    store.demos.push_back(std::move(d));
  });
  return store;
}

void save_store(const DemoStore& store, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const auto& d : store.demos) {
    out << nlohmann::json{{"id", d.id},
                          {"question", d.question},
                          {"context", d.context},
                          {"answers", d.answers},
                          {"event_type", d.event_type},
                          {"role", d.role}}
               .dump()
        << "\n";
  }
}

std::vector<RetrievalResult> retrieve_top(const std::string& query_id,
                                          const EmbeddingVector& query_vec,
                                          const DemoStore& store,
                                          const EmbeddingStore& embeddings,
                                          std::size_t k, bool exclude_self,
                                          SimilarityMetric metric) {
  std::vector<RetrievalResult> results;
  results.reserve(store.size());
  for (std::size_t i = 0; i < store.demos.size(); ++i) {
    const auto& demo = store.demos[i];
    if (exclude_self && demo.id == query_id) continue;
    const double score = similarity(query_vec, embeddings.get(demo.id), metric);
    results.push_back({i, demo.id, score});
  }
  std::sort(results.begin(), results.end(),
            [](const RetrievalResult& a, const RetrievalResult& b) {
              if (a.score != b.score) return a.score > b.score;
              return a.demo_id < b.demo_id;
            });
  if (results.size() > k) results.resize(k);
  return results;
}

int analogy_label(double score, double threshold, bool demo_nonempty,
                  bool current_nonempty) {
  return (score > threshold && demo_nonempty && current_nonempty) ? 1 : 0;
}

}  // namespace rgqa
