#include "rgqa/prompt.hpp"

#include <algorithm>
#include <stdexcept>

namespace rgqa {

std::vector<std::string> SpecialTokens::all() const {
  return {demo, trg, sep, sep_arg, input_bos, input_eos, target_bos, target_eos};
}

namespace {

void reject_special_tokens(const std::string& component,
                           const std::string& what,
                           const SpecialTokens& tokens) {
  for (const auto& tok : tokens.all()) {
    if (component.find(tok) != std::string::npos)
      throw std::runtime_error(what + " contains special token '" + tok + "'");
  }
}

}  // namespace

std::string mark_trigger(const std::string& context, const Span& trigger,
                         const SpecialTokens& tokens) {
  validate_span(trigger, context, "mark_trigger");
  reject_special_tokens(context, "context", tokens);
  std::string out;
  out.reserve(context.size() + 2 * tokens.trg.size() + 4);
  out.append(context, 0, trigger.start);
  out += tokens.trg;
  out += ' ';
  out += trigger.text;
  out += ' ';
  out += tokens.trg;
  out.append(context, trigger.end, context.size() - trigger.end);
  return out;
}

std::string render_demonstration(const Demonstration& demo,
                                 const SpecialTokens& tokens) {
  std::string answer;
  for (std::size_t i = 0; i < demo.answers.size(); ++i) {
    if (i) answer += " " + tokens.sep_arg + " ";
    answer += demo.answers[i];
  }
  return demo.question + " " + tokens.sep + " " + demo.context + " " +
         tokens.sep + " The answer is: " + answer;
}

std::string build_input(const std::string& demo_text,
                        const std::string& question,
                        const std::string& marked_context,
                        const SpecialTokens& tokens) {
  if (question.empty()) throw std::runtime_error("question is empty");
  if (marked_context.empty()) throw std::runtime_error("context is empty");
  reject_special_tokens(question, "question", tokens);

  std::string out = tokens.input_bos + " ";
  if (!demo_text.empty())
    out += tokens.demo + " " + demo_text + " " + tokens.demo + " ";
  out += question + " " + tokens.sep + " " + marked_context + " " +
         tokens.input_eos;
  return out;
}

std::string build_target(const std::vector<Span>& gold_args,
                         const SpecialTokens& tokens) {
  std::vector<Span> args = gold_args;
  std::stable_sort(args.begin(), args.end(),
                   [](const Span& a, const Span& b) { return a.start < b.start; });
  std::string payload;
  for (std::size_t i = 0; i < args.size(); ++i) {
    reject_special_tokens(args[i].text, "argument text", tokens);
    if (i) payload += " " + tokens.sep_arg;
    payload += (i ? " " : "") + args[i].text;
  }
  return tokens.target_bos + " " + payload + (payload.empty() ? "" : " ") +
         tokens.target_eos;
}

}  // namespace rgqa
