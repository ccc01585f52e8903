#include "rgqa/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <stdexcept>

#include "rgqa/jsonl.hpp"

namespace rgqa {

void validate_span(const Span& span, const std::string& context,
                   const std::string& what) {
  if (span.start >= span.end)
    throw std::runtime_error(what + ": span has end <= start (" +
                             std::to_string(span.start) + ", " +
                             std::to_string(span.end) + ")");
  if (span.end > context.size())
    throw std::runtime_error(what + ": span end " + std::to_string(span.end) +
                             " out of range (context length " +
                             std::to_string(context.size()) + ")");
  if (context.compare(span.start, span.end - span.start, span.text) != 0)
    throw std::runtime_error(what + ": span text '" + span.text +
                             "' does not match context substring");
}

const EventTypeDef& Ontology::type_def(const std::string& event_type) const {
  auto it = types.find(event_type);
  if (it == types.end())
    throw std::runtime_error("unknown event type: " + event_type);
  return it->second;
}

namespace {

Span parse_span(const nlohmann::json& obj, const std::string& where) {
  Span s;
  s.start = require_field(obj, "start", where).get<std::size_t>();
  s.end = require_field(obj, "end", where).get<std::size_t>();
  s.text = require_field(obj, "text", where).get<std::string>();
  return s;
}

std::size_t count_template_slots(const std::string& tmpl) {
  static const std::regex slot(R"(\[arg_\d+\])");
  return static_cast<std::size_t>(
      std::distance(std::sregex_iterator(tmpl.begin(), tmpl.end(), slot),
                    std::sregex_iterator()));
}

}  // namespace

std::vector<Document> load_corpus(const std::string& path) {
  std::vector<Document> corpus;
  std::set<std::string> seen_ids;
  for_each_jsonl(path, [&](std::size_t lineno, const nlohmann::json& rec) {
    const std::string where = path + ":" + std::to_string(lineno);
    Document doc;
    doc.doc_id = require_field(rec, "doc_id", where).get<std::string>();
    doc.text = require_field(rec, "text", where).get<std::string>();
    if (!seen_ids.insert(doc.doc_id).second)
      throw std::runtime_error(where + ": duplicate doc_id '" + doc.doc_id + "'");
    if (rec.contains("sentences")) {
      for (const auto& sent : rec.at("sentences")) {
        doc.sentences.emplace_back(sent.at(0).get<std::size_t>(),
                                   sent.at(1).get<std::size_t>());
      }
    }
    for (const auto& ev : require_field(rec, "events", where)) {
      EventMention event;
      event.event_type = require_field(ev, "type", where).get<std::string>();
      event.trigger = parse_span(require_field(ev, "trigger", where), where);
      validate_span(event.trigger, doc.text, "doc " + doc.doc_id + " trigger");
      for (const auto& arg : require_field(ev, "arguments", where)) {
        RoleArgument ra;
        ra.role = require_field(arg, "role", where).get<std::string>();
        ra.span = parse_span(arg, where);
        validate_span(ra.span, doc.text,
                      "doc " + doc.doc_id + " argument '" + ra.role + "'");
        event.arguments.push_back(std::move(ra));
      }
      doc.events.push_back(std::move(event));
    }
    std::stable_sort(doc.events.begin(), doc.events.end(),
                     [](const EventMention& a, const EventMention& b) {
                       return a.trigger.start < b.trigger.start;
                     });
    corpus.push_back(std::move(doc));
  });
  return corpus;
}

Ontology load_ontology(const std::string& path) {
  Ontology onto;
  for_each_jsonl(path, [&](std::size_t lineno, const nlohmann::json& rec) {
    const std::string where = path + ":" + std::to_string(lineno);
    for (const auto& [event_type, def] : rec.items()) {
      if (onto.types.count(event_type))
        throw std::runtime_error(where + ": duplicate event type '" +
                                 event_type + "'");
      EventTypeDef td;
      td.template_str =
          require_field(def, "template", where).get<std::string>();
      std::set<std::string> seen_roles;
      for (const auto& role : require_field(def, "roles", where)) {
        RoleQuestion rq;
        rq.name = require_field(role, "name", where).get<std::string>();
        rq.question = require_field(role, "question", where).get<std::string>();
        if (rq.question.empty())
          throw std::runtime_error(where + ": empty question for type '" +
                                   event_type + "' role '" + rq.name + "'");
        if (!seen_roles.insert(rq.name).second)
          throw std::runtime_error(where + ": duplicate role '" + rq.name +
                                   "' in type '" + event_type + "'");
        td.roles.push_back(std::move(rq));
      }
      if (count_template_slots(td.template_str) != td.roles.size())
        throw std::runtime_error(where + ": type '" + event_type +
                                 "': template slot count does not equal role count");
      onto.types.emplace(event_type, std::move(td));
    }
  });
  return onto;
}

WindowedEvent window_context(const Document& doc, const EventMention& event,
                             std::size_t max_chars) {
  if (max_chars <= event.trigger.length())
    throw std::runtime_error("window size " + std::to_string(max_chars) +
                             " does not exceed trigger length");
  std::size_t win_start = 0;
  std::size_t win_end = doc.text.size();
  if (doc.text.size() > max_chars) {
    // Center on the trigger; odd leftover width goes to the left.
    const std::size_t extra = max_chars - event.trigger.length();
    const std::size_t left = (extra + 1) / 2;
    win_start = event.trigger.start > left ? event.trigger.start - left : 0;
    win_end = win_start + max_chars;
    if (win_end > doc.text.size()) {
      win_end = doc.text.size();
      win_start = win_end - max_chars;
    }
  }

  WindowedEvent out;
  out.context = doc.text.substr(win_start, win_end - win_start);
  out.event.event_type = event.event_type;
  out.event.trigger = {event.trigger.start - win_start,
                       event.trigger.end - win_start, event.trigger.text};
  for (const auto& arg : event.arguments) {
    if (arg.span.start >= win_start && arg.span.end <= win_end) {
      out.event.arguments.push_back(
          {arg.role,
           {arg.span.start - win_start, arg.span.end - win_start, arg.span.text}});
    } else {
      ++out.dropped_arguments;
    }
  }
  return out;
}

std::vector<RoleInstance> explode_qa(const EventMention& event,
                                     const Ontology& ontology,
                                     const std::string& context,
                                     const std::string& doc_id,
                                     const std::string& id_prefix) {
  const EventTypeDef& td = ontology.type_def(event.event_type);
  std::vector<RoleInstance> out;
  out.reserve(td.roles.size());
  for (const auto& rq : td.roles) {
    RoleInstance inst;
    inst.id = id_prefix + ":" + rq.name;
    inst.doc_id = doc_id;
    inst.context = context;
    inst.event_type = event.event_type;
    inst.trigger = event.trigger;
    inst.role = rq.name;
    inst.question = rq.question;
    for (const auto& arg : event.arguments) {
      if (arg.role == rq.name) inst.gold_args.push_back(arg.span);
    }
    std::stable_sort(inst.gold_args.begin(), inst.gold_args.end(),
                     [](const Span& a, const Span& b) { return a.start < b.start; });
    out.push_back(std::move(inst));
  }
  return out;
}

CorpusStats corpus_stats(const std::vector<Document>& corpus) {
  CorpusStats stats;
  std::set<std::string> types;
  std::set<std::string> roles;
  stats.n_docs = corpus.size();
  for (const auto& doc : corpus) {
    stats.n_sentences += doc.sentences.size();
    stats.n_events += doc.events.size();
    for (const auto& ev : doc.events) {
      types.insert(ev.event_type);
      for (const auto& arg : ev.arguments) roles.insert(arg.role);
    }
  }
  stats.n_event_types = types.size();
  stats.n_roles = roles.size();
  stats.avg_events_per_doc =
      stats.n_docs ? static_cast<double>(stats.n_events) / stats.n_docs : 0.0;
  return stats;
}

std::vector<RoleInstance> build_instances(const std::vector<Document>& corpus,
                                          const Ontology& ontology,
                                          std::size_t window_chars) {
  std::vector<RoleInstance> out;
  for (const auto& doc : corpus) {
    for (std::size_t i = 0; i < doc.events.size(); ++i) {
      WindowedEvent we = window_context(doc, doc.events[i], window_chars);
      auto insts = explode_qa(we.event, ontology, we.context, doc.doc_id,
                              doc.doc_id + ":" + std::to_string(i));
      out.insert(out.end(), std::make_move_iterator(insts.begin()),
                 std::make_move_iterator(insts.end()));
    }
  }
  return out;
}

std::vector<RoleInstance> load_instances(const std::string& path) {
  std::vector<RoleInstance> out;
  std::set<std::string> seen;
  for_each_jsonl(path, [&](std::size_t lineno, const nlohmann::json& rec) {
    const std::string where = path + ":" + std::to_string(lineno);
    RoleInstance inst;
    inst.id = require_field(rec, "id", where).get<std::string>();
    inst.doc_id = require_field(rec, "doc_id", where).get<std::string>();
    inst.context = require_field(rec, "context", where).get<std::string>();
    inst.event_type = require_field(rec, "event_type", where).get<std::string>();
    inst.trigger = parse_span(require_field(rec, "trigger", where), where);
    inst.role = require_field(rec, "role", where).get<std::string>();
    inst.question = require_field(rec, "question", where).get<std::string>();
    for (const auto& arg : require_field(rec, "gold_args", where))
      inst.gold_args.push_back(parse_span(arg, where));
    validate_span(inst.trigger, inst.context, where + " trigger");
    for (const auto& g : inst.gold_args)
      validate_span(g, inst.context, where + " gold argument");
    if (!seen.insert(inst.id).second)
      throw std::runtime_error(where + ": duplicate instance id '" + inst.id + "'");
    out.push_back(std::move(inst));
  });
  return out;
}

void save_instances(const std::vector<RoleInstance>& instances,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const auto& inst : instances) {
    nlohmann::json rec{
        {"id", inst.id},
        {"doc_id", inst.doc_id},
        {"context", inst.context},
        {"event_type", inst.event_type},
        {"trigger", {{"start", inst.trigger.start},
                     {"end", inst.trigger.end},
                     {"text", inst.trigger.text}}},
        {"role", inst.role},
        {"question", inst.question},
    };
    rec["gold_args"] = nlohmann::json::array();
    for (const auto& g : inst.gold_args)
      rec["gold_args"].push_back(
          {{"start", g.start}, {"end", g.end}, {"text", g.text}});
    out << rec.dump() << "\n";
  }
}

}  // namespace rgqa
