#include "rgqa/generator.hpp"

#include <stdexcept>

#include "httplib.h"
#include "rgqa/jsonl.hpp"

namespace rgqa {

std::vector<std::string> OracleBackend::run(
    const std::vector<GenerationRequest>& requests) {
  std::vector<std::string> out;
  out.reserve(requests.size());
  for (const auto& req : requests) {
    auto it = gold_targets_.find(req.instance_id);
    if (it == gold_targets_.end())
      throw std::runtime_error("oracle backend has no gold target for '" +
                               req.instance_id + "'");
    out.push_back(it->second);
  }
  return out;
}

ReplayBackend::ReplayBackend(const std::string& path) {
  for_each_jsonl(path, [&](std::size_t lineno, const nlohmann::json& rec) {
    const std::string where = path + ":" + std::to_string(lineno);
    const std::string id =
        require_field(rec, "instance_id", where).get<std::string>();
    if (!outputs_.emplace(id, require_field(rec, "output_seq", where)
                                  .get<std::string>())
             .second)
      throw std::runtime_error(where + ": duplicate instance_id '" + id + "'");
  });
}

std::vector<std::string> ReplayBackend::run(
    const std::vector<GenerationRequest>& requests) {
  std::vector<std::string> out;
  out.reserve(requests.size());
  for (const auto& req : requests) {
    auto it = outputs_.find(req.instance_id);
    if (it == outputs_.end())
      throw std::runtime_error("replay file has no output for instance '" +
                               req.instance_id + "'");
    out.push_back(it->second);
  }
  return out;
}

std::vector<std::string> RemoteBackend::run(
    const std::vector<GenerationRequest>& requests) {
  std::vector<std::string> out;
  if (requests.empty()) return out;
  httplib::Client client(config_.endpoint);
  client.set_read_timeout(config_.timeout_seconds, 0);
  client.set_connection_timeout(config_.timeout_seconds, 0);

  for (std::size_t offset = 0; offset < requests.size();
       offset += config_.max_batch) {
    const std::size_t n = std::min(config_.max_batch, requests.size() - offset);
    nlohmann::json body;
    auto& inputs = body["inputs"] = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i)
      inputs.push_back(requests[offset + i].input_seq);
    httplib::Result res;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
      res = client.Post("/generate", body.dump(), "application/json");
      if (res && res->status == 200) break;
    }
    if (!res || res->status != 200)
      throw std::runtime_error("generation service unreachable at " +
                               config_.endpoint + " (retries exhausted)");
    auto parsed = nlohmann::json::parse(res->body);
    auto outputs = require_field(parsed, "outputs", "generation response")
                       .get<std::vector<std::string>>();
    if (outputs.size() != n)
      throw std::runtime_error(
          "generation protocol error: sent " + std::to_string(n) +
          " inputs, got " + std::to_string(outputs.size()) + " outputs");
    out.insert(out.end(), std::make_move_iterator(outputs.begin()),
               std::make_move_iterator(outputs.end()));
  }
  return out;
}

std::vector<GenerationResult> generate(
    const std::vector<GenerationRequest>& requests, GenerationBackend& backend) {
  for (const auto& req : requests)
    if (req.input_seq.empty())
      throw std::runtime_error("empty input sequence for instance '" +
                               req.instance_id + "'");
  std::vector<std::string> outputs = backend.run(requests);
  std::vector<GenerationResult> results;
  results.reserve(requests.size());
  for (std::size_t i = 0; i < requests.size(); ++i)
    results.push_back({requests[i].instance_id, outputs[i], backend.tag()});
  return results;
}

}  // namespace rgqa
