#pragma once

#include <map>
#include <string>
#include <vector>

#include "rgqa/corpus.hpp"
#include "rgqa/postprocess.hpp"

namespace rgqa {

enum class Criterion { ArgId, ArgC };
enum class MatchKind { EM, HM };

struct MetricsCell {
  std::size_t tp = 0;
  std::size_t n_pred = 0;
  std::size_t n_gold = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// P/R/F1 for {Arg-Id, Arg-C} x {EM, HM} with raw counts.
struct MetricsReport {
  MetricsCell cells[2][2];  // [criterion][match]

  MetricsCell& cell(Criterion c, MatchKind m) {
    return cells[static_cast<int>(c)][static_cast<int>(m)];
  }
  const MetricsCell& cell(Criterion c, MatchKind m) const {
    return cells[static_cast<int>(c)][static_cast<int>(m)];
  }
};

enum class AssignmentMode { Greedy, Optimal };

// Lowercased last alphanumeric token after stripping leading determiners
// (a/an/the) and surrounding punctuation. Pluggable head heuristic for HM.
std::string head_token(const std::string& text);

// Exact match on offsets.
bool match_em(const Span& pred, const Span& gold);

// Head match: equal non-empty heads, or equal whitespace-normalized texts.
bool match_hm(const std::string& pred_text, const std::string& gold_text);

// Micro-averaged one-to-one scoring. Greedy assigns predictions in input
// order (role-matching golds preferred, then gold order); the HM matching
// extends the EM matching, so EM.tp <= HM.tp and ArgC.tp <= ArgId.tp hold
// by construction. Optimal mode maximizes (pairs, role-matching pairs)
// lexicographically per event.
MetricsReport score(const std::vector<RoleInstance>& gold,
                    const std::vector<ArgumentPrediction>& preds,
                    AssignmentMode mode = AssignmentMode::Greedy);

struct BucketReport {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t population = 0;
  MetricsReport metrics;
};

// Partitions instances into half-open similarity buckets [e_i, e_{i+1})
// and scores each separately; out-of-range scores clamp to the end buckets.
std::vector<BucketReport> bucket_by_similarity(
    const std::vector<RoleInstance>& gold,
    const std::vector<ArgumentPrediction>& preds,
    const std::map<std::string, double>& similarity_by_instance,
    const std::vector<double>& bucket_edges,
    AssignmentMode mode = AssignmentMode::Greedy);

}  // namespace rgqa
