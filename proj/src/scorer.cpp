#include "rgqa/scorer.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rgqa {

namespace {

std::string normalize_ws_lower(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty() && out.back() != ' ') out += ' ';
    } else {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

bool is_determiner(const std::string& tok) {
  return tok == "a" || tok == "an" || tok == "the";
}

std::string strip_punct(const std::string& tok) {
  std::size_t b = 0, e = tok.size();
  while (b < e && !std::isalnum(static_cast<unsigned char>(tok[b]))) ++b;
  while (e > b && !std::isalnum(static_cast<unsigned char>(tok[e - 1]))) --e;
  return tok.substr(b, e - b);
}

void finalize(MetricsCell& cell) {
  cell.precision = cell.n_pred ? static_cast<double>(cell.tp) / cell.n_pred : 0.0;
  cell.recall = cell.n_gold ? static_cast<double>(cell.tp) / cell.n_gold : 0.0;
  const double pr = cell.precision + cell.recall;
  cell.f1 = pr > 0.0 ? 2.0 * cell.precision * cell.recall / pr : 0.0;
}

struct GoldArg {
  std::string instance_id;
  std::string role;
  Span span;
};

struct PredRef {
  std::size_t index;  // into preds, preserves input order
  std::string role;
  Span span;
};

// All gold mentions and predictions of one event mention.
struct EventGroup {
  std::vector<GoldArg> golds;
  std::vector<PredRef> preds;
};

struct PairCounts {
  std::size_t pairs = 0;       // Arg-Id true positives
  std::size_t role_pairs = 0;  // Arg-C true positives
};

bool hm_eligible(const PredRef& p, const GoldArg& g) {
  return match_hm(p.span.text, g.span.text);
}

bool em_eligible(const PredRef& p, const GoldArg& g) {
  return match_em(p.span, g.span);
}

// Greedy assignment in prediction order; role-matching golds first, then
// gold order. The HM matching starts from the EM pairs (an exact-offset
// pair always head-matches), so HM counts dominate EM counts.
void score_group_greedy(const EventGroup& group, PairCounts& em, PairCounts& hm) {
  std::vector<long> em_match(group.preds.size(), -1);
  std::vector<bool> gold_used(group.golds.size(), false);

  auto pick = [&](const PredRef& p, const std::vector<bool>& used,
                  auto eligible) -> long {
    long fallback = -1;
    for (std::size_t g = 0; g < group.golds.size(); ++g) {
      if (used[g] || !eligible(p, group.golds[g])) continue;
      if (group.golds[g].role == p.role) return static_cast<long>(g);
      if (fallback < 0) fallback = static_cast<long>(g);
    }
    return fallback;
  };

  for (std::size_t i = 0; i < group.preds.size(); ++i) {
    long g = pick(group.preds[i], gold_used, em_eligible);
    if (g >= 0) {
      em_match[i] = g;
      gold_used[g] = true;
      ++em.pairs;
      if (group.golds[g].role == group.preds[i].role) ++em.role_pairs;
    }
  }

  hm = em;
  std::vector<bool> hm_gold_used = gold_used;
  for (std::size_t i = 0; i < group.preds.size(); ++i) {
    if (em_match[i] >= 0) continue;
    long g = pick(group.preds[i], hm_gold_used, hm_eligible);
    if (g >= 0) {
      hm_gold_used[g] = true;
      ++hm.pairs;
      if (group.golds[g].role == group.preds[i].role) ++hm.role_pairs;
    }
  }
}

// Exhaustive search maximizing (pairs, role_pairs) lexicographically.
// Group sizes are per-event, so the branching stays small.
PairCounts score_group_optimal_kind(const EventGroup& group,
                                    bool (*eligible)(const PredRef&, const GoldArg&)) {
  PairCounts best;
  std::vector<bool> used(group.golds.size(), false);
  std::function<void(std::size_t, PairCounts)> rec = [&](std::size_t i,
                                                          PairCounts acc) {
    if (i == group.preds.size()) {
      if (acc.pairs > best.pairs ||
          (acc.pairs == best.pairs && acc.role_pairs > best.role_pairs))
        best = acc;
      return;
    }
    rec(i + 1, acc);  // leave pred i unmatched
    for (std::size_t g = 0; g < group.golds.size(); ++g) {
      if (used[g] || !eligible(group.preds[i], group.golds[g])) continue;
      used[g] = true;
      PairCounts next = acc;
      ++next.pairs;
      if (group.golds[g].role == group.preds[i].role) ++next.role_pairs;
      rec(i + 1, next);
      used[g] = false;
    }
  };
  rec(0, {});
  return best;
}

}  // namespace

std::string head_token(const std::string& text) {
  std::istringstream in(normalize_ws_lower(text));
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  std::size_t b = 0;
  while (b < tokens.size() && is_determiner(strip_punct(tokens[b]))) ++b;
  if (b >= tokens.size()) return "";
  return strip_punct(tokens.back());
}

bool match_em(const Span& pred, const Span& gold) {
  return pred.start == gold.start && pred.end == gold.end;
}

bool match_hm(const std::string& pred_text, const std::string& gold_text) {
  const std::string hp = head_token(pred_text);
  if (!hp.empty() && hp == head_token(gold_text)) return true;
  return normalize_ws_lower(pred_text) == normalize_ws_lower(gold_text);
}

MetricsReport score(const std::vector<RoleInstance>& gold,
                    const std::vector<ArgumentPrediction>& preds,
                    AssignmentMode mode) {
  // Group gold mentions and predictions by event (doc + trigger + type).
  std::map<std::string, const RoleInstance*> by_id;
  for (const auto& inst : gold) by_id[inst.id] = &inst;

  auto event_key = [](const RoleInstance& inst) {
    return inst.doc_id + "\x1f" + inst.event_type + "\x1f" +
           std::to_string(inst.trigger.start) + "\x1f" +
           std::to_string(inst.trigger.end);
  };

  std::map<std::string, EventGroup> groups;
  std::size_t n_gold = 0;
  {
    std::vector<const RoleInstance*> ordered;
    for (const auto& inst : gold) ordered.push_back(&inst);
    std::sort(ordered.begin(), ordered.end(),
              [](const RoleInstance* a, const RoleInstance* b) {
                return a->id < b->id;
              });
    for (const auto* inst : ordered) {
      auto& group = groups[event_key(*inst)];
      for (const auto& g : inst->gold_args) {
        group.golds.push_back({inst->id, inst->role, g});
        ++n_gold;
      }
    }
  }
  for (std::size_t i = 0; i < preds.size(); ++i) {
    auto it = by_id.find(preds[i].instance_id);
    if (it == by_id.end())
      throw std::runtime_error("prediction references unknown instance '" +
                               preds[i].instance_id + "'");
    groups[event_key(*it->second)].preds.push_back(
        {i, preds[i].role, preds[i].span});
  }

  PairCounts em_total, hm_total;
  for (auto& [key, group] : groups) {
    PairCounts em, hm;
    if (mode == AssignmentMode::Greedy) {
      score_group_greedy(group, em, hm);
    } else {
      em = score_group_optimal_kind(group, em_eligible);
      hm = score_group_optimal_kind(group, hm_eligible);
      // Keep HM dominance: an EM pairing is always HM-eligible, so the
      // optimal HM matching is at least as large by edge-set inclusion.
      if (hm.pairs < em.pairs) hm = em;
    }
    em_total.pairs += em.pairs;
    em_total.role_pairs += em.role_pairs;
    hm_total.pairs += hm.pairs;
    hm_total.role_pairs += hm.role_pairs;
  }

  MetricsReport report;
  auto fill = [&](Criterion c, MatchKind m, std::size_t tp) {
    MetricsCell& cell = report.cell(c, m);
    cell.tp = tp;
    cell.n_pred = preds.size();
    cell.n_gold = n_gold;
    finalize(cell);
  };
  fill(Criterion::ArgId, MatchKind::EM, em_total.pairs);
  fill(Criterion::ArgC, MatchKind::EM, em_total.role_pairs);
  fill(Criterion::ArgId, MatchKind::HM, hm_total.pairs);
  fill(Criterion::ArgC, MatchKind::HM, hm_total.role_pairs);
  return report;
}

std::vector<BucketReport> bucket_by_similarity(
    const std::vector<RoleInstance>& gold,
    const std::vector<ArgumentPrediction>& preds,
    const std::map<std::string, double>& similarity_by_instance,
    const std::vector<double>& bucket_edges,
    AssignmentMode mode) {
  if (bucket_edges.size() < 2)
    throw std::runtime_error("need at least two bucket edges");
  for (std::size_t i = 1; i < bucket_edges.size(); ++i)
    if (bucket_edges[i] <= bucket_edges[i - 1])
      throw std::runtime_error("bucket edges must be strictly increasing");

  const std::size_t n_buckets = bucket_edges.size() - 1;
  auto bucket_of = [&](double s) {
    if (s < bucket_edges.front()) return std::size_t{0};
    for (std::size_t b = 0; b + 1 < n_buckets; ++b)
      if (s < bucket_edges[b + 1]) return b;
    return n_buckets - 1;
  };

  std::vector<std::vector<RoleInstance>> gold_by_bucket(n_buckets);
  std::map<std::string, std::size_t> instance_bucket;
  for (const auto& inst : gold) {
    auto it = similarity_by_instance.find(inst.id);
    if (it == similarity_by_instance.end())
      throw std::runtime_error("no similarity score for instance '" + inst.id + "'");
    const std::size_t b = bucket_of(it->second);
    instance_bucket[inst.id] = b;
    gold_by_bucket[b].push_back(inst);
  }
  std::vector<std::vector<ArgumentPrediction>> preds_by_bucket(n_buckets);
  for (const auto& p : preds) {
    auto it = instance_bucket.find(p.instance_id);
    if (it == instance_bucket.end())
      throw std::runtime_error("prediction references unknown instance '" +
                               p.instance_id + "'");
    preds_by_bucket[it->second].push_back(p);
  }

  std::vector<BucketReport> out(n_buckets);
  for (std::size_t b = 0; b < n_buckets; ++b) {
    out[b].lo = bucket_edges[b];
    out[b].hi = bucket_edges[b + 1];
    out[b].population = gold_by_bucket[b].size();
    out[b].metrics = score(gold_by_bucket[b], preds_by_bucket[b], mode);
  }
  return out;
}

}  // namespace rgqa
