#include "rgqa/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rgqa {

void validate_distribution(const TypeDistribution& dist) {
  double total = 0.0;
  for (const auto& [type, p] : dist.probs) {
    if (p < 0.0 || !std::isfinite(p))
      throw std::runtime_error("invalid probability for type '" + type + "'");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::runtime_error("distribution sums to " + std::to_string(total) +
                             ", not 1");
}

TypeDistribution type_distribution(const std::vector<std::string>& event_types) {
  if (event_types.empty())
    throw std::runtime_error("cannot build a distribution from no examples");
  TypeDistribution dist;
  for (const auto& t : event_types) dist.probs[t] += 1.0;
  for (auto& [t, p] : dist.probs) p /= static_cast<double>(event_types.size());
  return dist;
}

double hellinger_distance(const TypeDistribution& p, const TypeDistribution& q) {
  validate_distribution(p);
  validate_distribution(q);
  std::set<std::string> support;
  for (const auto& [t, _] : p.probs) support.insert(t);
  for (const auto& [t, _] : q.probs) support.insert(t);
  double sum = 0.0;
  for (const auto& t : support) {
    const double d = std::sqrt(p.prob(t)) - std::sqrt(q.prob(t));
    sum += d * d;
  }
  return std::sqrt(sum / 2.0);
}

double per_type_distance(double p, double q) {
  const double a = std::sqrt(p) - std::sqrt(q);
  const double b = std::sqrt(1.0 - p) - std::sqrt(1.0 - q);
  return std::sqrt(a * a + b * b);
}

TypeDistanceReport per_type_distance_report(
    const TypeDistribution& reference,
    const std::vector<std::pair<std::string, TypeDistribution>>& candidates) {
  validate_distribution(reference);
  std::set<std::string> support;
  for (const auto& [t, _] : reference.probs) support.insert(t);
  for (const auto& [name, dist] : candidates) {
    validate_distribution(dist);
    for (const auto& [t, _] : dist.probs) support.insert(t);
  }

  TypeDistanceReport report;
  for (const auto& [name, _] : candidates) report.column_names.push_back(name);
  report.sums.assign(candidates.size(), 0.0);
  for (const auto& type : support) {
    TypeDistanceRow row;
    row.event_type = type;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const double d =
          per_type_distance(reference.prob(type), candidates[c].second.prob(type));
      row.distances.push_back(d);
      report.sums[c] += d;
    }
    report.rows.push_back(std::move(row));
  }
  report.averages = report.sums;
  if (!support.empty())
    for (double& a : report.averages) a /= static_cast<double>(support.size());
  return report;
}

std::string report_to_csv(const TypeDistanceReport& report) {
  std::ostringstream out;
  out << "event_type";
  for (const auto& name : report.column_names) out << "," << name;
  out << "\n";
  auto emit_row = [&](const std::string& label, const std::vector<double>& vals) {
    out << label;
    for (double v : vals) out << "," << v;
    out << "\n";
  };
  for (const auto& row : report.rows) emit_row(row.event_type, row.distances);
  emit_row("Sum", report.sums);
  emit_row("Average", report.averages);
  return out.str();
}

}  // namespace rgqa
