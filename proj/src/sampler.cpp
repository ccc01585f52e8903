#include "rgqa/sampler.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>

#include "rgqa/jsonl.hpp"

namespace rgqa {

SampleStrategy parse_strategy(const std::string& name) {
  if (name == "random") return SampleStrategy::Random;
  if (name == "context") return SampleStrategy::Context;
  if (name == "jointenc") return SampleStrategy::JointEnc;
  if (name == "uncertainty") return SampleStrategy::Uncertainty;
  throw std::runtime_error("unknown sampling strategy: " + name);
}

std::string strategy_name(SampleStrategy s) {
  switch (s) {
    case SampleStrategy::Random: return "random";
    case SampleStrategy::Context: return "context";
    case SampleStrategy::JointEnc: return "jointenc";
    case SampleStrategy::Uncertainty: return "uncertainty";
  }
  return "?";
}

namespace {

double sq_dist(const EmbeddingVector& a, const EmbeddingVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    d += diff * diff;
  }
  return d;
}

// Seeded first pick, then a farthest-point sweep over the remaining points.
std::vector<std::size_t> init_centroids(const std::vector<EmbeddingVector>& reps,
                                        std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> chosen;
  chosen.push_back(static_cast<std::size_t>(rng() % reps.size()));
  std::set<std::size_t> taken{chosen[0]};
  std::vector<double> min_dist(reps.size(),
                               std::numeric_limits<double>::infinity());
  while (chosen.size() < k) {
    for (std::size_t i = 0; i < reps.size(); ++i)
      min_dist[i] = std::min(min_dist[i], sq_dist(reps[i], reps[chosen.back()]));
    std::size_t best = reps.size();
    double best_d = -1.0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (taken.count(i)) continue;
      if (min_dist[i] > best_d) {
        best_d = min_dist[i];
        best = i;
      }
    }
    chosen.push_back(best);
    taken.insert(best);
  }
  return chosen;
}

// First n entries of a seeded Fisher-Yates shuffle over `ids` (sorted first
// for input-order independence).
std::vector<std::string> draw_without_replacement(std::vector<std::string> ids,
                                                  std::size_t n,
                                                  std::mt19937_64& rng) {
  std::sort(ids.begin(), ids.end());
  for (std::size_t i = 0; i < n && i + 1 < ids.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (ids.size() - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(n);
  return ids;
}

}  // namespace

ClusterAssignment kmeans(const std::vector<EmbeddingVector>& reps,
                         std::size_t k, std::uint64_t seed,
                         std::size_t max_iters) {
  if (k == 0 || k > reps.size())
    throw std::runtime_error("kmeans: k=" + std::to_string(k) +
                             " out of range for " + std::to_string(reps.size()) +
                             " points");
  const std::size_t dim = reps.front().size();
  for (const auto& r : reps)
    if (r.size() != dim) throw std::runtime_error("kmeans: mixed dimensions");

  std::mt19937_64 rng(seed);
  ClusterAssignment out;
  out.k = k;
  for (std::size_t idx : init_centroids(reps, k, rng))
    out.centroids.push_back(reps[idx]);

  std::vector<std::size_t> assignment(reps.size(), 0);
  for (std::size_t iter = 0; iter < max_iters; ++iter) {
    // Assignment step (ties to the lower cluster index).
    std::vector<std::size_t> next(reps.size());
    double objective = 0.0;
    for (std::size_t i = 0; i < reps.size(); ++i) {
      std::size_t best_c = 0;
      double best_d = sq_dist(reps[i], out.centroids[0]);
      for (std::size_t c = 1; c < k; ++c) {
        const double d = sq_dist(reps[i], out.centroids[c]);
        if (d < best_d) {
          best_d = d;
          best_c = c;
        }
      }
      next[i] = best_c;
      objective += best_d;
    }
    out.objective_history.push_back(objective);
    const bool fixpoint = iter > 0 && next == assignment;
    assignment = std::move(next);
    if (fixpoint) break;

    // Update step.
    std::vector<EmbeddingVector> sums(k, EmbeddingVector(dim, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < reps.size(); ++i) {
      for (std::size_t d = 0; d < dim; ++d) sums[assignment[i]][d] += reps[i][d];
      ++counts[assignment[i]];
    }
    std::set<std::size_t> reseeded;
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (std::size_t d = 0; d < dim; ++d)
          out.centroids[c][d] = sums[c][d] / counts[c];
      } else {
        // Reseed an empty cluster to the point farthest from its centroid.
        std::size_t far = reps.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < reps.size(); ++i) {
          if (reseeded.count(i) || counts[assignment[i]] <= 1) continue;
          const double d = sq_dist(reps[i], out.centroids[assignment[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        if (far < reps.size()) {
          out.centroids[c] = reps[far];
          reseeded.insert(far);
        }
      }
    }
  }

  out.members.assign(k, {});
  for (std::size_t i = 0; i < reps.size(); ++i)
    out.members[assignment[i]].push_back(i);
  return out;
}

std::vector<std::size_t> allocate_proportional(
    const std::vector<std::size_t>& cluster_sizes, std::size_t n) {
  std::size_t total = 0;
  for (std::size_t s : cluster_sizes) total += s;
  if (n > total)
    throw std::runtime_error("cannot allocate " + std::to_string(n) +
                             " from a population of " + std::to_string(total));
  const std::size_t m = cluster_sizes.size();
  std::vector<std::size_t> alloc(m, 0);
  if (n == 0) return alloc;

  std::vector<double> frac(m, 0.0);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double exact =
        static_cast<double>(cluster_sizes[i]) * static_cast<double>(n) / total;
    alloc[i] = static_cast<std::size_t>(exact);
    frac[i] = exact - static_cast<double>(alloc[i]);
    assigned += alloc[i];
  }

  // Remainder (and any cap overflow) goes by largest fractional part,
  // ties by larger cluster then lower index, skipping full clusters.
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (frac[a] != frac[b]) return frac[a] > frac[b];
    if (cluster_sizes[a] != cluster_sizes[b])
      return cluster_sizes[a] > cluster_sizes[b];
    return a < b;
  });
  std::size_t cursor = 0;
  while (assigned < n) {
    const std::size_t i = order[cursor % m];
    if (alloc[i] < cluster_sizes[i]) {
      ++alloc[i];
      ++assigned;
    }
    ++cursor;
  }
  return alloc;
}

SamplePlan sample(const std::vector<PopulationItem>& population,
                  const SampleRequest& request,
                  const EmbeddingStore* embeddings,
                  const std::vector<std::pair<std::string, double>>*
                      uncertainty_scores) {
  if (request.n > population.size())
    throw std::runtime_error("sample size " + std::to_string(request.n) +
                             " exceeds population size " +
                             std::to_string(population.size()));
  SamplePlan plan;
  plan.strategy = strategy_name(request.strategy);
  plan.seed = request.seed;
  plan.n = request.n;
  std::mt19937_64 rng(request.seed);

  switch (request.strategy) {
    case SampleStrategy::Random: {
      std::vector<std::string> ids;
      for (const auto& item : population) ids.push_back(item.id);
      plan.selected_ids = draw_without_replacement(std::move(ids), request.n, rng);
      break;
    }
    case SampleStrategy::Context:
    case SampleStrategy::JointEnc: {
      if (!embeddings)
        throw std::runtime_error("clustering strategy needs an embedding store");
      std::vector<EmbeddingVector> reps;
      reps.reserve(population.size());
      for (const auto& item : population) {
        if (request.strategy == SampleStrategy::JointEnc) {
          reps.push_back(joint_representation(embeddings->get(item.id),
                                              embeddings->get_trigger(item.id)));
        } else {
          reps.push_back(embeddings->get(item.id));
        }
      }
      std::size_t k = request.k;
      if (k == 0) {
        std::set<std::string> types;
        for (const auto& item : population) types.insert(item.event_type);
        k = types.size();
      }
      ClusterAssignment clusters =
          kmeans(reps, k, request.seed, request.kmeans_max_iters);

      std::vector<std::size_t> sizes;
      for (const auto& members : clusters.members) sizes.push_back(members.size());
      std::vector<std::size_t> alloc;
      if (request.equal_allocation) {
        // Footnote-replication mode: equal weights, capped at cluster size.
        alloc = allocate_proportional(std::vector<std::size_t>(k, 1),
                                      std::min(request.n, k));
        std::size_t short_by = request.n - std::min(request.n, k);
        for (std::size_t i = 0; i < k; ++i) alloc[i] = std::min(alloc[i], sizes[i]);
        std::size_t given = 0;
        for (std::size_t a : alloc) given += a;
        short_by = request.n - given;
        std::size_t cursor = 0;
        while (short_by > 0) {
          const std::size_t i = cursor % k;
          if (alloc[i] < sizes[i]) {
            ++alloc[i];
            --short_by;
          }
          ++cursor;
        }
      } else {
        alloc = allocate_proportional(sizes, request.n);
      }

      for (std::size_t c = 0; c < k; ++c) {
        plan.clusters.push_back({sizes[c], alloc[c]});
        std::vector<std::string> ids;
        for (std::size_t idx : clusters.members[c])
          ids.push_back(population[idx].id);
        auto picked = draw_without_replacement(std::move(ids), alloc[c], rng);
        plan.selected_ids.insert(plan.selected_ids.end(), picked.begin(),
                                 picked.end());
      }
      break;
    }
    case SampleStrategy::Uncertainty: {
      if (!uncertainty_scores)
        throw std::runtime_error("uncertainty strategy needs a scores file");
      std::set<std::string> pop_ids;
      for (const auto& item : population) pop_ids.insert(item.id);
      std::vector<std::pair<std::string, double>> scored;
      for (const auto& [id, score] : *uncertainty_scores)
        if (pop_ids.count(id)) scored.emplace_back(id, score);
      if (scored.size() < request.n)
        throw std::runtime_error("uncertainty scores cover only " +
                                 std::to_string(scored.size()) +
                                 " population ids, need " +
                                 std::to_string(request.n));
      std::sort(scored.begin(), scored.end(),
                [](const auto& a, const auto& b) {
                  if (a.second != b.second) return a.second > b.second;
                  return a.first < b.first;
                });
      for (std::size_t i = 0; i < request.n; ++i)
        plan.selected_ids.push_back(scored[i].first);
      break;
    }
  }

  std::sort(plan.selected_ids.begin(), plan.selected_ids.end());
  return plan;
}

std::vector<std::pair<std::string, double>> load_uncertainty_scores(
    const std::string& path) {
  std::vector<std::pair<std::string, double>> out;
  std::set<std::string> seen;
  for_each_jsonl(path, [&](std::size_t lineno, const nlohmann::json& rec) {
    const std::string where = path + ":" + std::to_string(lineno);
    const std::string id = require_field(rec, "id", where).get<std::string>();
    if (!seen.insert(id).second)
      throw std::runtime_error(where + ": duplicate id '" + id + "'");
    out.emplace_back(id, require_field(rec, "score", where).get<double>());
  });
  return out;
}

void save_plan(const SamplePlan& plan, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  nlohmann::json rec{{"strategy", plan.strategy},
                     {"seed", plan.seed},
                     {"N", plan.n},
                     {"ids", plan.selected_ids}};
  rec["clusters"] = nlohmann::json::array();
  for (const auto& c : plan.clusters)
    rec["clusters"].push_back({{"size", c.size}, {"alloc", c.alloc}});
  out << rec.dump(2) << "\n";
}

SamplePlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  nlohmann::json rec = nlohmann::json::parse(in);
  SamplePlan plan;
  plan.strategy = require_field(rec, "strategy", path).get<std::string>();
  plan.seed = require_field(rec, "seed", path).get<std::uint64_t>();
  plan.n = require_field(rec, "N", path).get<std::size_t>();
  plan.selected_ids =
      require_field(rec, "ids", path).get<std::vector<std::string>>();
  for (const auto& c : require_field(rec, "clusters", path))
    plan.clusters.push_back({c.at("size").get<std::size_t>(),
                             c.at("alloc").get<std::size_t>()});
  return plan;
}

}  // namespace rgqa
