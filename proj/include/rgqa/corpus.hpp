#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace rgqa {

// A character-offset span into some context string. Offsets are
// [start, end), end exclusive.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::string text;

  std::size_t length() const { return end - start; }
  bool operator==(const Span&) const = default;
};

// Validates 0 <= start < end, end <= |context| and text == context[start, end).
// Throws std::runtime_error naming `what` on violation.
void validate_span(const Span& span, const std::string& context,
                   const std::string& what);

struct RoleArgument {
  std::string role;
  Span span;
  bool operator==(const RoleArgument&) const = default;
};

struct EventMention {
  std::string event_type;
  Span trigger;
  std::vector<RoleArgument> arguments;
};

struct Document {
  std::string doc_id;
  std::string text;
  std::vector<std::pair<std::size_t, std::size_t>> sentences;
  std::vector<EventMention> events;
};

struct RoleQuestion {
  std::string name;
  std::string question;
};

struct EventTypeDef {
  std::string template_str;
  std::vector<RoleQuestion> roles;
};

// Event ontology: per event type, the role list with one question each and
// a template whose [arg_i] slot count equals the role count.
struct Ontology {
  std::map<std::string, EventTypeDef> types;

  bool has_type(const std::string& event_type) const {
    return types.count(event_type) > 0;
  }
  const EventTypeDef& type_def(const std::string& event_type) const;
};

// One (event mention, argument role) QA unit. gold_args may be empty:
// roles without a filled argument are kept as negatives.
struct RoleInstance {
  std::string id;
  std::string doc_id;
  std::string context;
  std::string event_type;
  Span trigger;
  std::string role;
  std::string question;
  std::vector<Span> gold_args;
};

struct CorpusStats {
  std::size_t n_event_types = 0;
  std::size_t n_roles = 0;
  std::size_t n_docs = 0;
  std::size_t n_sentences = 0;
  std::size_t n_events = 0;
  double avg_events_per_doc = 0.0;
};

struct WindowedEvent {
  std::string context;
  EventMention event;             // spans remapped into `context`
  std::size_t dropped_arguments = 0;  // arguments falling outside the window
};

// Loads a line-delimited corpus file (one JSON document record per line).
// Validates all spans and sorts events by trigger start.
std::vector<Document> load_corpus(const std::string& path);

// Loads a line-delimited ontology file. Rejects duplicate types/roles,
// missing questions, and template slot count != role count.
Ontology load_ontology(const std::string& path);

// Cuts a max_chars window out of the document, centered on the trigger
// midpoint and clipped at document edges (odd leftover goes left). Trigger
// and in-window arguments are offset-remapped; out-of-window arguments are
// dropped and counted.
WindowedEvent window_context(const Document& doc, const EventMention& event,
                             std::size_t max_chars);

// One RoleInstance per role of the event's type, in ontology role order.
// Roles with no gold argument yield an instance with empty gold_args.
std::vector<RoleInstance> explode_qa(const EventMention& event,
                                     const Ontology& ontology,
                                     const std::string& context,
                                     const std::string& doc_id,
                                     const std::string& id_prefix);

CorpusStats corpus_stats(const std::vector<Document>& corpus);

// Full corpus -> windowed, exploded RoleInstances. Ids are
// "<doc_id>:<event index>:<role>".
std::vector<RoleInstance> build_instances(const std::vector<Document>& corpus,
                                          const Ontology& ontology,
                                          std::size_t window_chars);

// Instance (de)serialization, line-delimited JSON.
std::vector<RoleInstance> load_instances(const std::string& path);
void save_instances(const std::vector<RoleInstance>& instances,
                    const std::string& path);

}  // namespace rgqa
