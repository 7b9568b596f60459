#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "keymaze/dataset.hpp"
#include "keymaze/prompt.hpp"

namespace keymaze {

struct retry_policy {
  int max_attempts = 5;
  int backoff_base_ms = 250;  // exponential backoff with full jitter
};

struct endpoint_config {
  std::string base_url;  // e.g. "http://127.0.0.1:8080" or ".../v1"
  std::string model_name;
  double temperature = 1.0;
  double top_p = 0.95;
  int max_output_tokens = 0;     // 0 = let the provider apply its maximum
  std::string api_key_env_var;   // empty = unauthenticated
  int max_concurrent_requests = 4;
  retry_policy retry;
  nlohmann::json extra_body;     // passthrough fields merged into requests
};

endpoint_config endpoint_config_from_json(const nlohmann::json& j);
endpoint_config load_endpoint_config(const std::string& path);

struct model_response {
  std::string instance_id;
  int run_index = 0;
  std::string raw_text;  // stored verbatim, no trimming
  long long prompt_tokens = -1;
  long long output_tokens = -1;
  long long latency_ms = 0;
  int attempts = 0;
  std::string error;  // empty on success; evaluation treats failures as parse failures

  bool failed() const { return !error.empty(); }
};

std::string response_to_json_line(const model_response& r);
model_response response_from_json_line(const std::string& line, int line_no);
std::vector<model_response> read_responses(const std::string& path);

// The chat-completions body for (config, prompt); identical bytes for every
// run of the same instance, so sampling variation is server-side only.
std::string request_body(const endpoint_config& config,
                         const std::string& prompt);

// k sampled completions for one instance, sequentially. When out_path is
// nonempty every response is appended (and flushed) as soon as it arrives.
std::vector<model_response> run_instance(const endpoint_config& config,
                                         const task_instance& inst,
                                         int k_runs = 5,
                                         const prompt_options& prompts = {},
                                         const std::string& out_path = "");

struct batch_summary {
  int requested = 0;  // instance x run pairs in scope
  int skipped = 0;    // already present in out_path
  int issued = 0;     // requests actually sent
  int failed = 0;     // persisted with a nonempty error
};

// Pool of at most max_concurrent_requests workers over all (instance, run)
// pairs missing from out_path; responses are appended as they complete, so
// an interrupted batch resumes without duplicate requests. Authentication
// rejections abort the batch with endpoint_error.
batch_summary run_batch(const endpoint_config& config,
                        const std::vector<task_instance>& instances,
                        int k_runs, const std::string& out_path,
                        const prompt_options& prompts = {});

}  // namespace keymaze
