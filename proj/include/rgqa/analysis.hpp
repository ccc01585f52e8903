#pragma once

#include <map>
#include <string>
#include <vector>

namespace rgqa {

// Normalized empirical event-type distribution.
struct TypeDistribution {
  std::map<std::string, double> probs;

  double prob(const std::string& event_type) const {
    auto it = probs.find(event_type);
    return it == probs.end() ? 0.0 : it->second;
  }
};

// Throws unless probabilities are non-negative and sum to 1 within 1e-9.
void validate_distribution(const TypeDistribution& dist);

TypeDistribution type_distribution(const std::vector<std::string>& event_types);

// (1/sqrt(2)) * ||sqrt(P) - sqrt(Q)||_2 over the union support. In [0, 1].
double hellinger_distance(const TypeDistribution& p, const TypeDistribution& q);

struct TypeDistanceRow {
  std::string event_type;
  std::vector<double> distances;  // one per compared distribution
};

struct TypeDistanceReport {
  std::vector<std::string> column_names;
  std::vector<TypeDistanceRow> rows;
  std::vector<double> sums;
  std::vector<double> averages;
};

// Per-type contribution against the reference: the unnormalized Hellinger
// distance between the binary marginals (type vs rest), range [0, sqrt(2)].
double per_type_distance(double p, double q);

// One column per candidate distribution, rows over the union of event
// types plus Sum and Average rows.
TypeDistanceReport per_type_distance_report(
    const TypeDistribution& reference,
    const std::vector<std::pair<std::string, TypeDistribution>>& candidates);

std::string report_to_csv(const TypeDistanceReport& report);

}  // namespace rgqa
