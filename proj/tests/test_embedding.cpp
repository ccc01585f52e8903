#include "rgqa/embedding.hpp"

#include <cmath>
#include <random>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "test_util.hpp"

using namespace rgqa;
using nlohmann::json;

namespace {

// Brute-force dot/norm oracle, kept separate from the implementation path.
double cosine_oracle(const EmbeddingVector& a, const EmbeddingVector& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace

TEST_CASE("cosine_similarity") {
  CHECK(cosine_similarity({3, 4}, {3, 4}) == doctest::Approx(1.0));
  CHECK(cosine_similarity({1, 0}, {0, 1}) == doctest::Approx(0.0));
  CHECK(cosine_similarity({1, 1}, {1, 0}) ==
        doctest::Approx(cosine_oracle({1, 1}, {1, 0})).epsilon(1e-12));
  CHECK(cosine_similarity({1, 1}, {1, 0}) ==
        doctest::Approx(0.7071067811865475).epsilon(1e-12));
  CHECK_THROWS_AS(cosine_similarity({0, 0}, {1, 0}), std::runtime_error);
  CHECK_THROWS_AS(cosine_similarity({1, 0}, {1, 0, 0}), std::runtime_error);
}

TEST_CASE("cosine similarity is symmetric and scale-invariant") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    EmbeddingVector a(8), b(8);
    for (auto& v : a) v = unif(rng);
    for (auto& v : b) v = unif(rng);
    const double s = 0.25 + 3.0 * std::abs(unif(rng));
    EmbeddingVector sa = a;
    for (auto& v : sa) v *= s;
    CHECK(cosine_similarity(a, b) ==
          doctest::Approx(cosine_similarity(b, a)).epsilon(1e-12));
    CHECK(cosine_similarity(sa, b) ==
          doctest::Approx(cosine_similarity(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("joint_representation concatenates context first") {
  CHECK(joint_representation({1, 2}, {3, 4}) == EmbeddingVector{1, 2, 3, 4});
  CHECK(joint_representation({5, 6}, {0, 0}) == EmbeddingVector{5, 6, 0, 0});
  auto joint = joint_representation({7, 8, 9}, {1, 2, 3});
  CHECK(EmbeddingVector(joint.begin(), joint.begin() + 3) ==
        EmbeddingVector{7, 8, 9});
  CHECK_THROWS_AS(joint_representation({1}, {1, 2}), std::runtime_error);
}

TEST_CASE("load_embeddings") {
  SUBCASE("three lines of dimension four") {
    auto path = testutil::write_file(
        "emb.jsonl",
        R"({"id":"a","vector":[1,2,3,4]})" "\n"
        R"({"id":"b","vector":[5,6,7,8]})" "\n"
        R"({"id":"c","vector":[0,0,1,0]})" "\n");
    auto store = load_embeddings(path);
    CHECK(store.dimension == 4);
    CHECK(store.vectors.size() == 3);
    CHECK(store.get("b")[0] == 5.0);
  }
  SUBCASE("dimension drift names the line") {
    auto path = testutil::write_file(
        "emb_drift.jsonl",
        R"({"id":"a","vector":[1,2,3,4]})" "\n"
        R"({"id":"b","vector":[5,6,7]})" "\n");
    CHECK_THROWS_WITH_AS(load_embeddings(path), doctest::Contains(":2:"),
                         std::runtime_error);
  }
  SUBCASE("duplicate id names the id") {
    auto path = testutil::write_file(
        "emb_dup.jsonl",
        R"({"id":"a","vector":[1,2]})" "\n"
        R"({"id":"a","vector":[3,4]})" "\n");
    CHECK_THROWS_WITH_AS(load_embeddings(path), doctest::Contains("'a'"),
                         std::runtime_error);
  }
}

TEST_CASE("embedding store re-serialization is stable") {
  auto path = testutil::write_file(
      "emb_rt.jsonl",
      R"({"id":"a","vector":[0.125,-2.5]})" "\n"
      R"({"id":"b","vector":[1.0,3.75]})" "\n");
  auto store = load_embeddings(path);
  auto out1 = (testutil::scratch_dir() / "emb_rt1.jsonl").string();
  save_embeddings(store, out1);
  auto out2 = (testutil::scratch_dir() / "emb_rt2.jsonl").string();
  save_embeddings(load_embeddings(out1), out2);
  CHECK(testutil::read_file(out1) == testutil::read_file(out2));
}

TEST_CASE("fetch_embeddings against a stub service") {
  httplib::Server server;
  server.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
    auto body = json::parse(req.body);
    json vectors = json::array();
    for (const auto& text : body.at("texts")) {
      // deterministic per-text vector: [len, first byte]
      const std::string s = text.get<std::string>();
      vectors.push_back({static_cast<double>(s.size()),
                         s.empty() ? 0.0 : static_cast<double>(s[0])});
    }
    res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const std::string endpoint = "http://127.0.0.1:" + std::to_string(port);

  SUBCASE("order-preserving batch") {
    auto vecs = fetch_embeddings({"hello", "xy"}, {.endpoint = endpoint});
    REQUIRE(vecs.size() == 2);
    CHECK(vecs[0] == EmbeddingVector{5.0, 'h'});
    CHECK(vecs[1] == EmbeddingVector{2.0, 'x'});
  }
  SUBCASE("batching preserves order across batches") {
    std::vector<std::string> texts;
    for (int i = 0; i < 10; ++i) texts.push_back(std::string(i + 1, 'a'));
    auto vecs = fetch_embeddings(texts, {.endpoint = endpoint, .max_batch = 3});
    REQUIRE(vecs.size() == 10);
    for (int i = 0; i < 10; ++i) CHECK(vecs[i][0] == i + 1);
  }
  server.stop();
  server_thread.join();

  SUBCASE("empty input makes no request") {
    CHECK(fetch_embeddings({}, {.endpoint = "http://127.0.0.1:1"}).empty());
  }
}

TEST_CASE("fetch_embeddings rejects a count mismatch") {
  httplib::Server server;
  server.Post("/embed", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(json{{"vectors", {{1.0, 2.0}}}}.dump(), "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  std::thread server_thread([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  const std::string endpoint = "http://127.0.0.1:" + std::to_string(port);
  CHECK_THROWS_WITH_AS(
      fetch_embeddings({"one", "two"}, {.endpoint = endpoint}),
      doctest::Contains("protocol error"), std::runtime_error);
  server.stop();
  server_thread.join();
}
