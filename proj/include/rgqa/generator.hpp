#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace rgqa {

struct GenerationRequest {
  std::string instance_id;
  std::string input_seq;
};

struct GenerationResult {
  std::string instance_id;
  std::string output_seq;
  std::string backend_tag;
};

class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  virtual std::string tag() const = 0;
  virtual std::vector<std::string> run(
      const std::vector<GenerationRequest>& requests) = 0;
};

// Returns the gold target sequence of each instance. The pipeline's
// self-consistency check: scoring oracle output yields F1 = 1.0 whenever
// gold argument texts occur verbatim in their contexts.
class OracleBackend : public GenerationBackend {
 public:
  explicit OracleBackend(std::map<std::string, std::string> gold_targets)
      : gold_targets_(std::move(gold_targets)) {}
  std::string tag() const override { return "oracle"; }
  std::vector<std::string> run(
      const std::vector<GenerationRequest>& requests) override;

 private:
  std::map<std::string, std::string> gold_targets_;
};

// Returns stored strings verbatim from a line-delimited
// {instance_id, output_seq} file.
class ReplayBackend : public GenerationBackend {
 public:
  explicit ReplayBackend(const std::string& path);
  std::string tag() const override { return "replay"; }
  std::vector<std::string> run(
      const std::vector<GenerationRequest>& requests) override;

 private:
  std::map<std::string, std::string> outputs_;
};

struct RemoteBackendConfig {
  std::string endpoint;
  std::size_t max_batch = 16;
  int timeout_seconds = 60;
  int max_retries = 2;
};

// POSTs {"inputs": [...]} to <endpoint>/generate, expects
// {"outputs": [...]}, order preserved.
class RemoteBackend : public GenerationBackend {
 public:
  explicit RemoteBackend(RemoteBackendConfig config)
      : config_(std::move(config)) {}
  std::string tag() const override { return "remote"; }
  std::vector<std::string> run(
      const std::vector<GenerationRequest>& requests) override;

 private:
  RemoteBackendConfig config_;
};

// Order-preserving dispatch, one result per request.
std::vector<GenerationResult> generate(
    const std::vector<GenerationRequest>& requests, GenerationBackend& backend);

}  // namespace rgqa
