#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rgqa/embedding.hpp"

namespace rgqa {

enum class SampleStrategy { Random, Context, JointEnc, Uncertainty };

SampleStrategy parse_strategy(const std::string& name);
std::string strategy_name(SampleStrategy s);

struct ClusterAssignment {
  std::size_t k = 0;
  std::vector<EmbeddingVector> centroids;
  std::vector<std::vector<std::size_t>> members;  // point indices per cluster
  std::vector<double> objective_history;          // sum of squared distances
};

struct ClusterInfo {
  std::size_t size = 0;
  std::size_t alloc = 0;
};

struct SamplePlan {
  std::string strategy;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::vector<std::string> selected_ids;
  std::vector<ClusterInfo> clusters;  // empty for non-clustering strategies
};

// One unlabeled example as seen by the sampler.
struct PopulationItem {
  std::string id;
  std::string event_type;
};

// Lloyd's iterations from a seeded farthest-point initialization until the
// assignment reaches a fixpoint or max_iters. Empty clusters are reseeded
// to the point farthest from its current centroid. Deterministic by seed.
ClusterAssignment kmeans(const std::vector<EmbeddingVector>& reps,
                         std::size_t k, std::uint64_t seed,
                         std::size_t max_iters = 100);

// Largest-remainder apportionment: base floor(size_i*N/total), remainder by
// largest fractional part (ties: larger cluster, then lower index), capped
// at cluster size with overflow redistributed by the same rule.
std::vector<std::size_t> allocate_proportional(
    const std::vector<std::size_t>& cluster_sizes, std::size_t n);

struct SampleRequest {
  SampleStrategy strategy = SampleStrategy::Random;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t k = 0;  // 0 = number of event types in the population
  std::size_t kmeans_max_iters = 100;
  bool equal_allocation = false;  // replication flag; proportional is default
};

// Few-shot subset selection over the population. Clustering strategies use
// the embedding store (context vectors; JointEnc concatenates the trigger
// vectors); Uncertainty takes top-n by descending score, ties by id.
SamplePlan sample(const std::vector<PopulationItem>& population,
                  const SampleRequest& request,
                  const EmbeddingStore* embeddings,
                  const std::vector<std::pair<std::string, double>>*
                      uncertainty_scores = nullptr);

// Line-delimited {id, score} file.
std::vector<std::pair<std::string, double>> load_uncertainty_scores(
    const std::string& path);

void save_plan(const SamplePlan& plan, const std::string& path);
SamplePlan load_plan(const std::string& path);

}  // namespace rgqa
