// Python bindings for the core pipeline operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rgqa/analysis.hpp"
#include "rgqa/corpus.hpp"
#include "rgqa/demo_store.hpp"
#include "rgqa/embedding.hpp"
#include "rgqa/postprocess.hpp"
#include "rgqa/prompt.hpp"
#include "rgqa/sampler.hpp"
#include "rgqa/scorer.hpp"

namespace py = pybind11;
using namespace rgqa;

namespace {

EmbeddingStore make_store(
    const std::map<std::string, EmbeddingVector>& vectors,
    const std::map<std::string, EmbeddingVector>& trigger_vectors) {
  EmbeddingStore store;
  if (!vectors.empty()) store.dimension = vectors.begin()->second.size();
  store.vectors = vectors;
  store.trigger_vectors = trigger_vectors;
  return store;
}

TypeDistribution dist_from_dict(const std::map<std::string, double>& probs) {
  TypeDistribution d;
  d.probs = probs;
  return d;
}

py::dict report_to_dict(const MetricsReport& report) {
  py::dict out;
  const std::pair<Criterion, const char*> criteria[] = {
      {Criterion::ArgId, "arg_id"}, {Criterion::ArgC, "arg_c"}};
  const std::pair<MatchKind, const char*> kinds[] = {{MatchKind::EM, "em"},
                                                     {MatchKind::HM, "hm"}};
  for (const auto& [c, cname] : criteria) {
    py::dict row;
    for (const auto& [m, mname] : kinds) {
      const auto& cell = report.cell(c, m);
      py::dict j;
      j["tp"] = cell.tp;
      j["n_pred"] = cell.n_pred;
      j["n_gold"] = cell.n_gold;
      j["precision"] = cell.precision;
      j["recall"] = cell.recall;
      j["f1"] = cell.f1;
      row[mname] = j;
    }
    out[cname] = row;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_rgqa, m) {
  m.doc() = "Retrieval-augmented generative QA pipeline core";

  py::class_<Span>(m, "Span")
      .def(py::init([](std::size_t start, std::size_t end, std::string text) {
             return Span{start, end, std::move(text)};
           }),
           py::arg("start"), py::arg("end"), py::arg("text"))
      .def_readwrite("start", &Span::start)
      .def_readwrite("end", &Span::end)
      .def_readwrite("text", &Span::text)
      .def("__eq__", [](const Span& a, const Span& b) { return a == b; })
      .def("__repr__", [](const Span& s) {
        return "Span(" + std::to_string(s.start) + ", " +
               std::to_string(s.end) + ", '" + s.text + "')";
      });

  py::class_<RoleInstance>(m, "RoleInstance")
      .def(py::init<>())
      .def_readwrite("id", &RoleInstance::id)
      .def_readwrite("doc_id", &RoleInstance::doc_id)
      .def_readwrite("context", &RoleInstance::context)
      .def_readwrite("event_type", &RoleInstance::event_type)
      .def_readwrite("trigger", &RoleInstance::trigger)
      .def_readwrite("role", &RoleInstance::role)
      .def_readwrite("question", &RoleInstance::question)
      .def_readwrite("gold_args", &RoleInstance::gold_args);

  py::class_<ArgumentPrediction>(m, "ArgumentPrediction")
      .def(py::init([](std::string instance_id, std::string role, Span span) {
             return ArgumentPrediction{std::move(instance_id), std::move(role),
                                       span, span.text};
           }),
           py::arg("instance_id"), py::arg("role"), py::arg("span"))
      .def_readwrite("instance_id", &ArgumentPrediction::instance_id)
      .def_readwrite("role", &ArgumentPrediction::role)
      .def_readwrite("span", &ArgumentPrediction::span);

  py::class_<Demonstration>(m, "Demonstration")
      .def(py::init([](std::string id, std::string question,
                       std::string context, std::vector<std::string> answers,
                       std::string event_type, std::string role) {
             return Demonstration{std::move(id),        std::move(question),
                                  std::move(context),   std::move(answers),
                                  std::move(event_type), std::move(role)};
           }),
           py::arg("id"), py::arg("question"), py::arg("context"),
           py::arg("answers") = std::vector<std::string>{},
           py::arg("event_type") = "", py::arg("role") = "")
      .def_readwrite("id", &Demonstration::id)
      .def_readwrite("question", &Demonstration::question)
      .def_readwrite("context", &Demonstration::context)
      .def_readwrite("answers", &Demonstration::answers)
      .def("has_answer", &Demonstration::has_answer);

  // embeddings
  m.def("cosine_similarity", &cosine_similarity, py::arg("a"), py::arg("b"));
  m.def("dot_product", &dot_product, py::arg("a"), py::arg("b"));
  m.def("joint_representation", &joint_representation, py::arg("context_vec"),
        py::arg("trigger_vec"));

  // retrieval
  m.def(
      "retrieve_top",
      [](const std::string& query_id, const EmbeddingVector& query_vec,
         const std::vector<Demonstration>& demos,
         const std::map<std::string, EmbeddingVector>& vectors, std::size_t k,
         bool exclude_self) {
        DemoStore store;
        store.demos = demos;
        auto results = retrieve_top(query_id, query_vec, store,
                                    make_store(vectors, {}), k, exclude_self);
        std::vector<std::pair<std::string, double>> out;
        for (const auto& r : results) out.emplace_back(r.demo_id, r.score);
        return out;
      },
      py::arg("query_id"), py::arg("query_vec"), py::arg("demos"),
      py::arg("vectors"), py::arg("k") = 1, py::arg("exclude_self") = true,
      "Top-k demonstrations as (id, score), ties broken by ascending id.");
  m.def("analogy_label", &analogy_label, py::arg("score"), py::arg("threshold"),
        py::arg("demo_nonempty"), py::arg("current_nonempty"));

  // prompt grammar
  m.def("mark_trigger",
        [](const std::string& context, const Span& trigger) {
          return mark_trigger(context, trigger);
        },
        py::arg("context"), py::arg("trigger"));
  m.def("render_demonstration",
        [](const Demonstration& demo) { return render_demonstration(demo); },
        py::arg("demo"));
  m.def("build_input",
        [](const std::string& demo_text, const std::string& question,
           const std::string& marked_context) {
          return build_input(demo_text, question, marked_context);
        },
        py::arg("demo_text"), py::arg("question"), py::arg("marked_context"));
  m.def("build_target",
        [](const std::vector<Span>& gold_args) { return build_target(gold_args); },
        py::arg("gold_args"));

  // post-processing
  m.def("split_answers",
        [](const std::string& decoded) { return split_answers(decoded); },
        py::arg("decoded"));
  m.def("locate_span", &locate_span, py::arg("candidate"), py::arg("context"),
        py::arg("trigger"));

  // scoring
  m.def("head_token", &head_token, py::arg("text"));
  m.def("match_em", &match_em, py::arg("pred"), py::arg("gold"));
  m.def("match_hm", &match_hm, py::arg("pred_text"), py::arg("gold_text"));
  m.def(
      "score",
      [](const std::vector<RoleInstance>& gold,
         const std::vector<ArgumentPrediction>& preds, bool optimal) {
        return report_to_dict(score(
            gold, preds,
            optimal ? AssignmentMode::Optimal : AssignmentMode::Greedy));
      },
      py::arg("gold"), py::arg("preds"), py::arg("optimal") = false,
      "Micro P/R/F1 per {arg_id, arg_c} x {em, hm}.");

  // sampling
  m.def("allocate_proportional", &allocate_proportional,
        py::arg("cluster_sizes"), py::arg("n"));
  m.def(
      "kmeans",
      [](const std::vector<EmbeddingVector>& reps, std::size_t k,
         std::uint64_t seed, std::size_t max_iters) {
        auto c = kmeans(reps, k, seed, max_iters);
        py::dict out;
        out["members"] = c.members;
        out["centroids"] = c.centroids;
        out["objective_history"] = c.objective_history;
        return out;
      },
      py::arg("reps"), py::arg("k"), py::arg("seed"),
      py::arg("max_iters") = 100);
  m.def(
      "sample",
      [](const std::vector<std::pair<std::string, std::string>>& population,
         const std::string& strategy, std::size_t n, std::uint64_t seed,
         const std::map<std::string, EmbeddingVector>& vectors,
         const std::map<std::string, EmbeddingVector>& trigger_vectors,
         const std::vector<std::pair<std::string, double>>& uncertainty,
         std::size_t k, bool equal_allocation) {
        std::vector<PopulationItem> items;
        for (const auto& [id, type] : population) items.push_back({id, type});
        SampleRequest req;
        req.strategy = parse_strategy(strategy);
        req.n = n;
        req.seed = seed;
        req.k = k;
        req.equal_allocation = equal_allocation;
        auto store = make_store(vectors, trigger_vectors);
        auto plan = sample(items, req, vectors.empty() ? nullptr : &store,
                           uncertainty.empty() ? nullptr : &uncertainty);
        py::dict out;
        out["strategy"] = plan.strategy;
        out["seed"] = plan.seed;
        out["n"] = plan.n;
        out["selected_ids"] = plan.selected_ids;
        std::vector<std::pair<std::size_t, std::size_t>> clusters;
        for (const auto& c : plan.clusters)
          clusters.emplace_back(c.size, c.alloc);
        out["clusters"] = clusters;
        return out;
      },
      py::arg("population"), py::arg("strategy"), py::arg("n"), py::arg("seed"),
      py::arg("vectors") = std::map<std::string, EmbeddingVector>{},
      py::arg("trigger_vectors") = std::map<std::string, EmbeddingVector>{},
      py::arg("uncertainty") = std::vector<std::pair<std::string, double>>{},
      py::arg("k") = 0, py::arg("equal_allocation") = false,
      "Few-shot subset selection; population is a list of (id, event_type).");

  // distribution analysis
  m.def(
      "type_distribution",
      [](const std::vector<std::string>& types) {
        return type_distribution(types).probs;
      },
      py::arg("types"));
  m.def(
      "hellinger_distance",
      [](const std::map<std::string, double>& p,
         const std::map<std::string, double>& q) {
        return hellinger_distance(dist_from_dict(p), dist_from_dict(q));
      },
      py::arg("p"), py::arg("q"));
  m.def("per_type_distance", &per_type_distance, py::arg("p"), py::arg("q"));
}
