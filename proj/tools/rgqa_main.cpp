// Command-line front end for the retrieval-augmented generative QA
// event-argument-extraction pipeline.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rgqa/analysis.hpp"
#include "rgqa/corpus.hpp"
#include "rgqa/demo_store.hpp"
#include "rgqa/embedding.hpp"
#include "rgqa/generator.hpp"
#include "rgqa/jsonl.hpp"
#include "rgqa/postprocess.hpp"
#include "rgqa/prompt.hpp"
#include "rgqa/sampler.hpp"
#include "rgqa/scorer.hpp"

using nlohmann::json;

namespace {

struct PipelineConfig {
  std::string corpus_path;
  std::string ontology_path;
  std::string embeddings_path;
  std::string trigger_embeddings_path;
  std::string store_path;
  std::string instances_path;
  std::string out_path;
  std::string endpoint;
  std::string replay_path;
  std::string uncertainty_path;
  std::string trace_path;
  std::string backend = "oracle";
  std::string strategy = "random";
  std::string query_text_mode = "joint";  // joint | context (ablation)
  double threshold = 0.7;
  std::size_t window_chars = 140;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  std::size_t top_k = 1;
  std::size_t n = 0;
  std::vector<double> bucket_edges;
  bool exclude_self = true;
  bool no_retrieval = false;
  bool optimal_assignment = false;
  bool equal_allocation = false;
};

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

json report_to_json(const rgqa::MetricsReport& report) {
  json rows = json::array();
  const std::pair<rgqa::Criterion, std::string> criteria[] = {
      {rgqa::Criterion::ArgId, "ArgId"}, {rgqa::Criterion::ArgC, "ArgC"}};
  const std::pair<rgqa::MatchKind, std::string> kinds[] = {
      {rgqa::MatchKind::EM, "EM"}, {rgqa::MatchKind::HM, "HM"}};
  for (const auto& [c, cname] : criteria) {
    for (const auto& [m, mname] : kinds) {
      const auto& cell = report.cell(c, m);
      rows.push_back({{"criterion", cname},
                      {"match", mname},
                      {"P", cell.precision},
                      {"R", cell.recall},
                      {"F1", cell.f1},
                      {"tp", cell.tp},
                      {"n_pred", cell.n_pred},
                      {"n_gold", cell.n_gold}});
    }
  }
  return rows;
}

std::string report_to_csv(const rgqa::MetricsReport& report) {
  std::string csv = "criterion,match,P,R,F1,tp,n_pred,n_gold\n";
  for (const auto& row : report_to_json(report)) {
    csv += row["criterion"].get<std::string>() + "," +
           row["match"].get<std::string>() + "," +
           std::to_string(row["P"].get<double>()) + "," +
           std::to_string(row["R"].get<double>()) + "," +
           std::to_string(row["F1"].get<double>()) + "," +
           std::to_string(row["tp"].get<std::size_t>()) + "," +
           std::to_string(row["n_pred"].get<std::size_t>()) + "," +
           std::to_string(row["n_gold"].get<std::size_t>()) + "\n";
  }
  return csv;
}

// The text actually embedded for a retrieval query (joint mode pairs the
// question with the context; context-only is the ablation).
std::string query_text(const rgqa::RoleInstance& inst, const std::string& mode) {
  if (mode == "context") return inst.context;
  return inst.question + " [sep] " + inst.context;
}

// Embeddings either from a precomputed file or fetched from a service.
rgqa::EmbeddingStore resolve_embeddings(const PipelineConfig& cfg,
                                        const std::vector<rgqa::RoleInstance>& instances) {
  if (!cfg.embeddings_path.empty())
    return rgqa::load_embeddings(cfg.embeddings_path, cfg.trigger_embeddings_path);
  if (cfg.endpoint.empty())
    throw std::runtime_error("need --embeddings or --endpoint");
  std::vector<std::string> texts;
  for (const auto& inst : instances)
    texts.push_back(query_text(inst, cfg.query_text_mode));
  auto vectors =
      rgqa::fetch_embeddings(texts, {.endpoint = cfg.endpoint});
  rgqa::EmbeddingStore store;
  if (!vectors.empty()) store.dimension = vectors.front().size();
  for (std::size_t i = 0; i < instances.size(); ++i)
    store.vectors[instances[i].id] = std::move(vectors[i]);
  return store;
}

int cmd_stats(const PipelineConfig& cfg) {
  auto corpus = rgqa::load_corpus(cfg.corpus_path);
  auto stats = rgqa::corpus_stats(corpus);
  json out{{"n_event_types", stats.n_event_types},
           {"n_roles", stats.n_roles},
           {"n_docs", stats.n_docs},
           {"n_sentences", stats.n_sentences},
           {"n_events", stats.n_events},
           {"avg_events_per_doc", stats.avg_events_per_doc}};
  if (!cfg.out_path.empty()) write_text(cfg.out_path, out.dump(2) + "\n");
  std::cout << "stats: " << stats.n_docs << " docs, " << stats.n_events
            << " events, " << stats.n_event_types << " event types\n";
  return 0;
}

int cmd_build_store(const PipelineConfig& cfg) {
  auto corpus = rgqa::load_corpus(cfg.corpus_path);
  auto ontology = rgqa::load_ontology(cfg.ontology_path);
  auto instances = rgqa::build_instances(corpus, ontology, cfg.window_chars);
  auto store = rgqa::build_store(instances);
  rgqa::save_store(store, cfg.out_path);
  if (!cfg.instances_path.empty())
    rgqa::save_instances(instances, cfg.instances_path);
  std::cout << "build-store: " << store.size() << " demonstrations from "
            << corpus.size() << " docs -> " << cfg.out_path << "\n";
  return 0;
}

int cmd_retrieve(const PipelineConfig& cfg) {
  auto store = rgqa::load_store(cfg.store_path);
  auto embeddings = rgqa::load_embeddings(cfg.embeddings_path);
  std::ofstream out(cfg.out_path);
  if (!out) throw std::runtime_error("cannot write file: " + cfg.out_path);
  std::size_t n_lines = 0;
  for (const auto& query : store.demos) {
    auto results =
        rgqa::retrieve_top(query.id, embeddings.get(query.id), store,
                           embeddings, cfg.top_k, cfg.exclude_self);
    for (const auto& r : results) {
      const auto& demo = store.demos[r.demo_index];
      const int label = rgqa::analogy_label(r.score, cfg.threshold,
                                            demo.has_answer(), query.has_answer());
      out << json{{"query_id", query.id},
                  {"demo_id", r.demo_id},
                  {"score", r.score},
                  {"label", label}}
                 .dump()
          << "\n";
      ++n_lines;
    }
  }
  std::cout << "retrieve: " << n_lines << " results for " << store.size()
            << " queries -> " << cfg.out_path << "\n";
  return 0;
}

int cmd_build_prompts(const PipelineConfig& cfg) {
  auto corpus = rgqa::load_corpus(cfg.corpus_path);
  auto ontology = rgqa::load_ontology(cfg.ontology_path);
  auto instances = rgqa::build_instances(corpus, ontology, cfg.window_chars);
  auto store = rgqa::build_store(instances);
  std::optional<rgqa::EmbeddingStore> embeddings;
  if (!cfg.no_retrieval) embeddings = resolve_embeddings(cfg, instances);

  const rgqa::SpecialTokens tokens;
  std::ofstream out(cfg.out_path);
  if (!out) throw std::runtime_error("cannot write file: " + cfg.out_path);
  for (const auto& inst : instances) {
    json rec{{"instance_id", inst.id}};
    std::string demo_text;
    if (cfg.no_retrieval) {
      rec["demo_id"] = nullptr;
      rec["similarity"] = 0.0;
      rec["analogy_label"] = 0;
    } else {
      auto results = rgqa::retrieve_top(inst.id, embeddings->get(inst.id),
                                        store, *embeddings, 1, cfg.exclude_self);
      if (results.empty())
        throw std::runtime_error("empty store after self-exclusion for '" +
                                 inst.id + "'");
      const auto& demo = store.demos[results[0].demo_index];
      demo_text = rgqa::render_demonstration(demo, tokens);
      rec["demo_id"] = demo.id;
      rec["similarity"] = results[0].score;
      rec["analogy_label"] =
          rgqa::analogy_label(results[0].score, cfg.threshold,
                              demo.has_answer(), !inst.gold_args.empty());
    }
    rec["input_seq"] = rgqa::build_input(
        demo_text, inst.question,
        rgqa::mark_trigger(inst.context, inst.trigger, tokens), tokens);
    rec["target_seq"] = rgqa::build_target(inst.gold_args, tokens);
    out << rec.dump() << "\n";
  }
  std::cout << "build-prompts: " << instances.size() << " prompt pairs -> "
            << cfg.out_path << "\n";
  return 0;
}

struct PromptLine {
  std::string instance_id;
  std::string input_seq;
  std::string target_seq;
};

std::vector<PromptLine> load_prompts(const std::string& path) {
  std::vector<PromptLine> out;
  rgqa::for_each_jsonl(path, [&](std::size_t lineno, const json& rec) {
    const std::string where = path + ":" + std::to_string(lineno);
    out.push_back({rgqa::require_field(rec, "instance_id", where).get<std::string>(),
                   rgqa::require_field(rec, "input_seq", where).get<std::string>(),
                   rgqa::require_field(rec, "target_seq", where).get<std::string>()});
  });
  return out;
}

int cmd_generate(const PipelineConfig& cfg) {
  auto prompts = load_prompts(cfg.instances_path.empty() ? cfg.store_path
                                                         : cfg.instances_path);
  std::vector<rgqa::GenerationRequest> requests;
  std::map<std::string, std::string> gold_targets;
  for (const auto& p : prompts) {
    requests.push_back({p.instance_id, p.input_seq});
    gold_targets[p.instance_id] = p.target_seq;
  }

  std::unique_ptr<rgqa::GenerationBackend> backend;
  if (cfg.backend == "oracle") {
    backend = std::make_unique<rgqa::OracleBackend>(std::move(gold_targets));
  } else if (cfg.backend == "replay") {
    backend = std::make_unique<rgqa::ReplayBackend>(cfg.replay_path);
  } else if (cfg.backend == "remote") {
    backend = std::make_unique<rgqa::RemoteBackend>(
        rgqa::RemoteBackendConfig{.endpoint = cfg.endpoint});
  } else {
    throw std::runtime_error("unknown backend: " + cfg.backend);
  }

  auto results = rgqa::generate(requests, *backend);
  std::ofstream out(cfg.out_path);
  if (!out) throw std::runtime_error("cannot write file: " + cfg.out_path);
  for (const auto& r : results)
    out << json{{"instance_id", r.instance_id},
                {"output_seq", r.output_seq},
                {"backend", r.backend_tag}}
               .dump()
        << "\n";
  std::cout << "generate(" << cfg.backend << "): " << results.size()
            << " outputs -> " << cfg.out_path << "\n";
  return 0;
}

int cmd_postprocess(const PipelineConfig& cfg) {
  auto instances = rgqa::load_instances(cfg.instances_path);
  std::map<std::string, const rgqa::RoleInstance*> by_id;
  for (const auto& inst : instances) by_id[inst.id] = &inst;

  std::ofstream out(cfg.out_path);
  if (!out) throw std::runtime_error("cannot write file: " + cfg.out_path);
  std::size_t n_preds = 0;
  rgqa::for_each_jsonl(cfg.replay_path, [&](std::size_t lineno, const json& rec) {
    const std::string where = cfg.replay_path + ":" + std::to_string(lineno);
    rgqa::GenerationResult result;
    result.instance_id =
        rgqa::require_field(rec, "instance_id", where).get<std::string>();
    result.output_seq =
        rgqa::require_field(rec, "output_seq", where).get<std::string>();
    auto it = by_id.find(result.instance_id);
    if (it == by_id.end())
      throw std::runtime_error(where + ": unknown instance '" +
                               result.instance_id + "'");
    for (const auto& pred : rgqa::decode_predictions(result, *it->second)) {
      out << json{{"instance_id", pred.instance_id},
                  {"role", pred.role},
                  {"start", pred.span.start},
                  {"end", pred.span.end},
                  {"text", pred.span.text}}
                 .dump()
          << "\n";
      ++n_preds;
    }
  });
  std::cout << "postprocess: " << n_preds << " located predictions -> "
            << cfg.out_path << "\n";
  return 0;
}

std::vector<rgqa::ArgumentPrediction> load_predictions(const std::string& path) {
  std::vector<rgqa::ArgumentPrediction> out;
  rgqa::for_each_jsonl(path, [&](std::size_t lineno, const json& rec) {
    const std::string where = path + ":" + std::to_string(lineno);
    rgqa::ArgumentPrediction p;
    p.instance_id =
        rgqa::require_field(rec, "instance_id", where).get<std::string>();
    p.role = rgqa::require_field(rec, "role", where).get<std::string>();
    p.span.start = rgqa::require_field(rec, "start", where).get<std::size_t>();
    p.span.end = rgqa::require_field(rec, "end", where).get<std::size_t>();
    p.span.text = rgqa::require_field(rec, "text", where).get<std::string>();
    p.source_text = p.span.text;
    out.push_back(std::move(p));
  });
  return out;
}

int cmd_score(const PipelineConfig& cfg) {
  auto gold = rgqa::load_instances(cfg.instances_path);
  auto preds = load_predictions(cfg.replay_path);
  const auto mode = cfg.optimal_assignment ? rgqa::AssignmentMode::Optimal
                                           : rgqa::AssignmentMode::Greedy;
  auto report = rgqa::score(gold, preds, mode);
  if (!cfg.trace_path.empty() && cfg.out_path.empty())
    throw std::runtime_error("--trace requires --out");
  json out{{"report", report_to_json(report)}};

  if (!cfg.trace_path.empty() && cfg.bucket_edges.size() >= 2) {
    std::map<std::string, double> similarity;
    rgqa::for_each_jsonl(cfg.trace_path, [&](std::size_t lineno, const json& rec) {
      const std::string where = cfg.trace_path + ":" + std::to_string(lineno);
      similarity[rgqa::require_field(rec, "query_id", where).get<std::string>()] =
          rgqa::require_field(rec, "score", where).get<double>();
    });
    auto buckets = rgqa::bucket_by_similarity(gold, preds, similarity,
                                              cfg.bucket_edges, mode);
    json jb = json::array();
    for (const auto& b : buckets)
      jb.push_back({{"lo", b.lo},
                    {"hi", b.hi},
                    {"population", b.population},
                    {"report", report_to_json(b.metrics)}});
    out["buckets"] = jb;
  }

  if (!cfg.out_path.empty()) write_text(cfg.out_path, out.dump(2) + "\n");

  const auto& argc_em = report.cell(rgqa::Criterion::ArgC, rgqa::MatchKind::EM);
  std::cout << "score: ArgC EM P=" << argc_em.precision
            << " R=" << argc_em.recall << " F1=" << argc_em.f1 << " ("
            << preds.size() << " preds)\n";
  if (!cfg.store_path.empty())  // reused as --csv path
    write_text(cfg.store_path, report_to_csv(report));
  return 0;
}

int cmd_sample(const PipelineConfig& cfg) {
  auto instances = rgqa::load_instances(cfg.instances_path);
  std::vector<rgqa::PopulationItem> population;
  for (const auto& inst : instances)
    population.push_back({inst.id, inst.event_type});

  rgqa::SampleRequest request;
  request.strategy = rgqa::parse_strategy(cfg.strategy);
  request.n = cfg.n;
  request.seed = cfg.seed;
  request.k = cfg.k;
  request.equal_allocation = cfg.equal_allocation;

  std::optional<rgqa::EmbeddingStore> embeddings;
  if (!cfg.embeddings_path.empty())
    embeddings =
        rgqa::load_embeddings(cfg.embeddings_path, cfg.trigger_embeddings_path);
  std::optional<std::vector<std::pair<std::string, double>>> scores;
  if (!cfg.uncertainty_path.empty())
    scores = rgqa::load_uncertainty_scores(cfg.uncertainty_path);

  auto plan = rgqa::sample(population, request,
                           embeddings ? &*embeddings : nullptr,
                           scores ? &*scores : nullptr);
  rgqa::save_plan(plan, cfg.out_path);
  std::cout << "sample(" << plan.strategy << ", seed=" << plan.seed
            << "): " << plan.selected_ids.size() << " ids -> " << cfg.out_path
            << "\n";
  return 0;
}

int cmd_analyze_distance(const PipelineConfig& cfg,
                         const std::vector<std::string>& plan_paths) {
  auto instances = rgqa::load_instances(cfg.instances_path);
  std::map<std::string, std::string> type_by_id;
  std::vector<std::string> population_types;
  for (const auto& inst : instances) {
    type_by_id[inst.id] = inst.event_type;
    population_types.push_back(inst.event_type);
  }
  auto population_dist = rgqa::type_distribution(population_types);

  std::vector<std::pair<std::string, rgqa::TypeDistribution>> candidates;
  std::string curve = "sample_size,strategy,distance\n";
  for (const auto& path : plan_paths) {
    auto plan = rgqa::load_plan(path);
    std::vector<std::string> sampled_types;
    for (const auto& id : plan.selected_ids) {
      auto it = type_by_id.find(id);
      if (it == type_by_id.end())
        throw std::runtime_error("plan id '" + id + "' not in population");
      sampled_types.push_back(it->second);
    }
    auto dist = rgqa::type_distribution(sampled_types);
    curve += std::to_string(plan.n) + "," + plan.strategy + "," +
             std::to_string(rgqa::hellinger_distance(dist, population_dist)) +
             "\n";
    candidates.emplace_back(plan.strategy, std::move(dist));
  }

  auto report = rgqa::per_type_distance_report(population_dist, candidates);
  write_text(cfg.out_path, rgqa::report_to_csv(report));
  if (!cfg.trace_path.empty()) write_text(cfg.trace_path, curve);
  std::cout << "analyze-distance: " << plan_paths.size() << " plans -> "
            << cfg.out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retrieval-augmented generative QA pipeline for event argument extraction"};
  app.set_config("--config", "", "Config file (flags take precedence)");
  app.require_subcommand(0, 1);

  PipelineConfig cfg;
  bool show_config = false;
  app.add_flag("--show-config", show_config, "Print effective defaults and exit");

  std::vector<std::string> plan_paths;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threshold", cfg.threshold,
                    "Analogy similarity threshold")
        ->check(CLI::Range(-1.0, 1.0));
    sub->add_option("--window-chars", cfg.window_chars, "Context window size");
    sub->add_option("--seed", cfg.seed, "Random seed (recorded in outputs)");
  };

  auto* stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("--corpus", cfg.corpus_path)->required();
  stats->add_option("--out", cfg.out_path);

  auto* build_store = app.add_subcommand("build-store", "Build the demonstration store");
  build_store->add_option("--corpus", cfg.corpus_path)->required();
  build_store->add_option("--ontology", cfg.ontology_path)->required();
  build_store->add_option("--out", cfg.out_path)->required();
  build_store->add_option("--instances-out", cfg.instances_path,
                          "Also write the exploded QA instances");
  add_common(build_store);

  auto* retrieve = app.add_subcommand("retrieve", "Top-k similarity retrieval trace");
  retrieve->add_option("--store", cfg.store_path)->required();
  retrieve->add_option("--embeddings", cfg.embeddings_path)->required();
  retrieve->add_option("--k", cfg.top_k, "Results per query");
  retrieve->add_flag("!--no-exclude-self", cfg.exclude_self,
                     "Allow a query to retrieve itself");
  retrieve->add_option("--out", cfg.out_path)->required();
  add_common(retrieve);

  auto* build_prompts = app.add_subcommand("build-prompts",
                                           "Build input/target sequences");
  build_prompts->add_option("--corpus", cfg.corpus_path)->required();
  build_prompts->add_option("--ontology", cfg.ontology_path)->required();
  build_prompts->add_option("--embeddings", cfg.embeddings_path);
  build_prompts->add_option("--endpoint", cfg.endpoint,
                            "Embedding service (used when no --embeddings)")
      ->envname("RGQA_EMBED_ENDPOINT");
  build_prompts->add_option("--query-text", cfg.query_text_mode,
                            "joint | context (service mode only)")
      ->check(CLI::IsMember({"joint", "context"}));
  build_prompts->add_flag("--no-retrieval", cfg.no_retrieval,
                          "Plain generative-QA mode, no demonstration");
  build_prompts->add_flag("!--no-exclude-self", cfg.exclude_self);
  build_prompts->add_option("--out", cfg.out_path)->required();
  add_common(build_prompts);

  auto* generate = app.add_subcommand("generate", "Run a generation backend");
  generate->add_option("--prompts", cfg.instances_path)->required();
  generate->add_option("--backend", cfg.backend)
      ->check(CLI::IsMember({"oracle", "replay", "remote"}));
  generate->add_option("--replay-file", cfg.replay_path);
  generate->add_option("--endpoint", cfg.endpoint)->envname("RGQA_GEN_ENDPOINT");
  generate->add_option("--out", cfg.out_path)->required();

  auto* postprocess = app.add_subcommand("postprocess",
                                         "Locate predicted argument spans");
  postprocess->add_option("--generations", cfg.replay_path)->required();
  postprocess->add_option("--instances", cfg.instances_path)->required();
  postprocess->add_option("--out", cfg.out_path)->required();

  auto* score = app.add_subcommand("score", "EM/HM Arg-Id/Arg-C metrics");
  score->add_option("--gold", cfg.instances_path)->required();
  score->add_option("--pred", cfg.replay_path)->required();
  score->add_option("--out", cfg.out_path);
  score->add_option("--csv", cfg.store_path, "Also export CSV");
  score->add_option("--trace", cfg.trace_path,
                    "Retrieval trace for similarity buckets");
  score->add_option("--bucket-edges", cfg.bucket_edges);
  score->add_flag("--optimal", cfg.optimal_assignment,
                  "Optimal instead of greedy assignment (audit)");

  auto* sample = app.add_subcommand("sample", "Few-shot subset selection");
  sample->add_option("--population", cfg.instances_path)->required();
  sample->add_option("--strategy", cfg.strategy)
      ->check(CLI::IsMember({"random", "context", "jointenc", "uncertainty"}));
  sample->add_option("--n", cfg.n)->required();
  sample->add_option("--embeddings", cfg.embeddings_path);
  sample->add_option("--trigger-embeddings", cfg.trigger_embeddings_path);
  sample->add_option("--k", cfg.k, "Cluster count override (0 = #event types)");
  sample->add_option("--uncertainty-file", cfg.uncertainty_path);
  sample->add_flag("--equal-alloc", cfg.equal_allocation,
                   "Equal per-cluster allocation (replication flag)");
  sample->add_option("--out", cfg.out_path)->required();
  add_common(sample);

  auto* analyze = app.add_subcommand("analyze-distance",
                                     "Event-type distribution distances");
  analyze->add_option("--population", cfg.instances_path)->required();
  analyze->add_option("--plan", plan_paths, "Sample plan file (repeatable)")
      ->required();
  analyze->add_option("--out", cfg.out_path)->required();
  analyze->add_option("--aggregate-out", cfg.trace_path,
                      "Per-plan aggregate distance CSV");

  CLI11_PARSE(app, argc, argv);

  if (show_config) {
    json defaults{{"threshold", cfg.threshold},
                  {"window_chars", cfg.window_chars},
                  {"seed", cfg.seed},
                  {"k", cfg.k},
                  {"top_k", cfg.top_k},
                  {"exclude_self", cfg.exclude_self},
                  {"backend", cfg.backend},
                  {"strategy", cfg.strategy},
                  {"query_text", cfg.query_text_mode}};
    std::cout << defaults.dump(2) << "\n";
    return 0;
  }

  try {
    if (*stats) return cmd_stats(cfg);
    if (*build_store) return cmd_build_store(cfg);
    if (*retrieve) return cmd_retrieve(cfg);
    if (*build_prompts) return cmd_build_prompts(cfg);
    if (*generate) return cmd_generate(cfg);
    if (*postprocess) return cmd_postprocess(cfg);
    if (*score) return cmd_score(cfg);
    if (*sample) return cmd_sample(cfg);
    if (*analyze) return cmd_analyze_distance(cfg, plan_paths);
    std::cerr << app.help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
