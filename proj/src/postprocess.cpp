#include "rgqa/postprocess.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace rgqa {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\n\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\n\r");
  return s.substr(b, e - b + 1);
}

bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

// Collapses whitespace runs to single spaces. When `index_map` is given it
// receives, per normalized character, the originating index in `s`.
std::string normalize_ws(const std::string& s,
                         std::vector<std::size_t>* index_map = nullptr) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (is_ws(s[i])) {
      if (!out.empty() && out.back() != ' ') {
        out += ' ';
        if (index_map) index_map->push_back(i);
      }
    } else {
      out += s[i];
      if (index_map) index_map->push_back(i);
    }
  }
  if (!out.empty() && out.back() == ' ') {
    out.pop_back();
    if (index_map) index_map->pop_back();
  }
  return out;
}

void strip_token(std::string& s, const std::string& tok, bool leading) {
  if (leading) {
    if (s.rfind(tok, 0) == 0) s.erase(0, tok.size());
  } else {
    if (s.size() >= tok.size() && s.compare(s.size() - tok.size(), tok.size(), tok) == 0)
      s.erase(s.size() - tok.size());
  }
}

}  // namespace

std::vector<std::string> split_answers(const std::string& decoded,
                                       const SpecialTokens& tokens) {
  std::string body = trim(decoded);
  strip_token(body, tokens.target_bos, true);
  strip_token(body, tokens.target_eos, false);

  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = body.find(tokens.sep_arg, pos);
    std::string piece = trim(body.substr(
        pos, next == std::string::npos ? std::string::npos : next - pos));
    if (!piece.empty()) out.push_back(std::move(piece));
    if (next == std::string::npos) break;
    pos = next + tokens.sep_arg.size();
  }
  return out;
}

std::optional<Span> locate_span(const std::string& candidate,
                                const std::string& context,
                                const Span& trigger) {
  const std::string needle = normalize_ws(trim(candidate));
  if (needle.empty()) return std::nullopt;
  std::vector<std::size_t> index_map;
  const std::string haystack = normalize_ws(context, &index_map);

  std::optional<Span> best;
  std::size_t best_dist = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + 1)) {
    const std::size_t start = index_map[pos];
    const std::size_t end = index_map[pos + needle.size() - 1] + 1;
    const std::size_t dist = start > trigger.start ? start - trigger.start
                                                   : trigger.start - start;
    if (!best || dist < best_dist) {
      best = Span{start, end, context.substr(start, end - start)};
      best_dist = dist;
    }
  }
  return best;
}

std::vector<ArgumentPrediction> decode_predictions(
    const GenerationResult& result, const RoleInstance& instance,
    const SpecialTokens& tokens) {
  if (result.instance_id != instance.id)
    throw std::runtime_error("instance id mismatch: result '" +
                             result.instance_id + "' vs instance '" +
                             instance.id + "'");
  std::vector<ArgumentPrediction> preds;
  for (const auto& candidate : split_answers(result.output_seq, tokens)) {
    auto span = locate_span(candidate, instance.context, instance.trigger);
    if (!span) continue;  // hallucinated candidate, discard
    bool duplicate = false;
    for (const auto& p : preds)
      if (p.span.start == span->start && p.span.end == span->end) {
        duplicate = true;
        break;
      }
    if (!duplicate)
      preds.push_back({instance.id, instance.role, *span, candidate});
  }
  return preds;
}

}  // namespace rgqa
