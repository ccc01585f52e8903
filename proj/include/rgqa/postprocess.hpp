#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rgqa/corpus.hpp"
#include "rgqa/generator.hpp"
#include "rgqa/prompt.hpp"

namespace rgqa {

struct ArgumentPrediction {
  std::string instance_id;
  std::string role;
  Span span;                // located in the instance context
  std::string source_text;  // raw decoded candidate
};

// Strips <s>/</s> if present, splits on [sep_arg], trims candidates and
// drops empty ones. Robust to missing wrapper tokens.
std::vector<std::string> split_answers(const std::string& decoded,
                                       const SpecialTokens& tokens = {});

// Finds all occurrences of the candidate in the context (case-sensitive,
// whitespace runs normalized to single spaces on both sides) and returns
// the one whose start is closest to the trigger start; ties go to the
// earlier span; no occurrence -> nullopt.
std::optional<Span> locate_span(const std::string& candidate,
                                const std::string& context,
                                const Span& trigger);

// split_answers then locate_span per candidate; unlocatable candidates are
// dropped and identical located spans deduplicated.
std::vector<ArgumentPrediction> decode_predictions(
    const GenerationResult& result, const RoleInstance& instance,
    const SpecialTokens& tokens = {});

}  // namespace rgqa
