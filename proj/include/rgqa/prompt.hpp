#pragma once

#include <string>
#include <vector>

#include "rgqa/corpus.hpp"
#include "rgqa/demo_store.hpp"

namespace rgqa {

struct SpecialTokens {
  std::string demo = "[demo]";
  std::string trg = "[trg]";
  std::string sep = "[sep]";
  std::string sep_arg = "[sep_arg]";
  std::string input_bos = "<S>";
  std::string input_eos = "</S>";
  std::string target_bos = "<s>";
  std::string target_eos = "</s>";

  std::vector<std::string> all() const;
};

struct PromptPair {
  std::string input_seq;
  std::string target_seq;
  int analogy_label = 0;
};

// Wraps the trigger text with "[trg] " / " [trg]", leaving the rest of the
// context untouched.
std::string mark_trigger(const std::string& context, const Span& trigger,
                         const SpecialTokens& tokens = {});

// "Q [sep] C [sep] The answer is: A" where A joins the answers with
// " [sep_arg] "; an empty answer list yields an empty A.
std::string render_demonstration(const Demonstration& demo,
                                 const SpecialTokens& tokens = {});

// "<S> [demo] D [demo] Q [sep] C </S>"; an empty demo_text omits the whole
// [demo]...[demo] block (no-retrieval mode). Throws if any component
// contains a special token.
std::string build_input(const std::string& demo_text,
                        const std::string& question,
                        const std::string& marked_context,
                        const SpecialTokens& tokens = {});

// "<s> t1 [sep_arg] t2 ... </s>" over argument texts in document order;
// empty list gives "<s> </s>".
std::string build_target(const std::vector<Span>& gold_args,
                         const SpecialTokens& tokens = {});

}  // namespace rgqa
