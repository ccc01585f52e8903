#include "rgqa/analysis.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"

using namespace rgqa;

namespace {

TypeDistribution make_dist(std::initializer_list<std::pair<std::string, double>> probs) {
  TypeDistribution d;
  for (const auto& [t, p] : probs) d.probs[t] = p;
  return d;
}

TypeDistribution random_dist(std::mt19937_64& rng, std::size_t support) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  TypeDistribution d;
  double total = 0.0;
  for (std::size_t i = 0; i < support; ++i) {
    const double w = unif(rng);
    d.probs["T" + std::to_string(i)] = w;
    total += w;
  }
  for (auto& [t, p] : d.probs) p /= total;
  return d;
}

// Direct formula evaluation, independent of the library path.
double hellinger_oracle(const TypeDistribution& p, const TypeDistribution& q) {
  std::map<std::string, int> support;
  for (const auto& [t, _] : p.probs) support[t] = 1;
  for (const auto& [t, _] : q.probs) support[t] = 1;
  double sum = 0.0;
  for (const auto& [t, _] : support) {
    const double d = std::sqrt(p.prob(t)) - std::sqrt(q.prob(t));
    sum += d * d;
  }
  return (1.0 / std::sqrt(2.0)) * std::sqrt(sum);
}

}  // namespace

TEST_CASE("type_distribution counts and normalizes") {
  auto d = type_distribution({"A", "A", "B", "C"});
  CHECK(d.prob("A") == doctest::Approx(0.5));
  CHECK(d.prob("B") == doctest::Approx(0.25));
  CHECK(d.prob("C") == doctest::Approx(0.25));

  CHECK(type_distribution({"A"}).prob("A") == doctest::Approx(1.0));
  CHECK_THROWS_AS(type_distribution({}), std::runtime_error);

  SUBCASE("permutation-invariant") {
    auto shuffled = type_distribution({"C", "A", "B", "A"});
    CHECK(shuffled.probs == d.probs);
  }
  SUBCASE("scale-free: proportions decide, not counts") {
    auto doubled = type_distribution({"A", "A", "A", "A", "B", "B", "C", "C"});
    CHECK(hellinger_distance(d, doubled) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("hellinger_distance") {
  auto p = make_dist({{"A", 0.5}, {"B", 0.5}});
  CHECK(hellinger_distance(p, p) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(hellinger_distance(make_dist({{"A", 1.0}}), make_dist({{"B", 1.0}})) ==
        doctest::Approx(1.0).epsilon(1e-12));

  auto q = make_dist({{"A", 0.9}, {"B", 0.1}});
  CHECK(hellinger_distance(p, q) ==
        doctest::Approx(hellinger_oracle(p, q)).epsilon(1e-6));
  CHECK(hellinger_distance(p, q) == doctest::Approx(0.3249).epsilon(1e-3));

  CHECK_THROWS_AS(hellinger_distance(make_dist({{"A", 0.7}}), p),
                  std::runtime_error);
}

TEST_CASE("hellinger_distance satisfies metric axioms on random triples") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    auto p = random_dist(rng, 12);
    auto q = random_dist(rng, 12);
    auto r = random_dist(rng, 12);
    const double pq = hellinger_distance(p, q);
    const double qr = hellinger_distance(q, r);
    const double pr = hellinger_distance(p, r);
    CHECK(pq >= 0.0);
    CHECK(pq <= 1.0 + 1e-12);
    CHECK(pq == hellinger_distance(q, p));
    CHECK(pr <= pq + qr + 1e-9);
    CHECK(hellinger_distance(p, p) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("per_type_distance") {
  CHECK(per_type_distance(0.3, 0.3) == doctest::Approx(0.0));
  CHECK(per_type_distance(1.0, 0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  SUBCASE("matches a direct recomputation on random marginals") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const double p = unif(rng), q = unif(rng);
      const double a = std::sqrt(p) - std::sqrt(q);
      const double b = std::sqrt(1 - p) - std::sqrt(1 - q);
      CHECK(per_type_distance(p, q) ==
            doctest::Approx(std::sqrt(a * a + b * b)).epsilon(1e-12));
    }
  }
}

TEST_CASE("per_type_distance_report") {
  auto ref = make_dist({{"A", 0.5}, {"B", 0.5}});

  SUBCASE("identical distributions give all-zero rows") {
    auto report = per_type_distance_report(ref, {{"same", ref}});
    for (const auto& row : report.rows) CHECK(row.distances[0] == doctest::Approx(0.0));
    CHECK(report.sums[0] == doctest::Approx(0.0));
  }
  SUBCASE("rows, sum, and average per candidate column") {
    auto q = make_dist({{"A", 0.9}, {"B", 0.1}});
    auto report = per_type_distance_report(ref, {{"q", q}, {"same", ref}});
    REQUIRE(report.column_names.size() == 2);
    REQUIRE(report.rows.size() == 2);
    double sum = 0.0;
    for (const auto& row : report.rows) sum += row.distances[0];
    CHECK(report.sums[0] == doctest::Approx(sum));
    CHECK(report.averages[0] == doctest::Approx(sum / 2.0));
    CHECK(report.sums[1] == doctest::Approx(0.0));
  }
  SUBCASE("csv layout has Sum and Average rows") {
    auto csv = report_to_csv(per_type_distance_report(ref, {{"q", ref}}));
    CHECK(csv.find("event_type,q") == 0);
    CHECK(csv.find("\nSum,") != std::string::npos);
    CHECK(csv.find("\nAverage,") != std::string::npos);
  }
}
