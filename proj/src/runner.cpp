#include "keymaze/runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "httplib.h"
#include "keymaze/errors.hpp"
#include "keymaze/rng.hpp"

namespace keymaze {

namespace {

using nlohmann::json;

struct split_url {
  std::string host;  // scheme://host:port
  std::string path_prefix;
};

split_url split_base_url(const std::string& base_url) {
  const auto scheme_end = base_url.find("://");
  if (scheme_end == std::string::npos) {
    throw data_error("base_url must include a scheme: " + base_url);
  }
  const auto path_start = base_url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {base_url, ""};
  std::string prefix = base_url.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base_url.substr(0, path_start), prefix};
}

httplib::Headers make_headers(const endpoint_config& config) {
  httplib::Headers headers;
  if (!config.api_key_env_var.empty()) {
    const char* key = std::getenv(config.api_key_env_var.c_str());
    if (!key || !*key) {
      throw endpoint_error("environment variable " + config.api_key_env_var +
                           " is empty; cannot authenticate");
    }
    headers.emplace("Authorization", std::string("Bearer ") + key);
  }
  return headers;
}

long long now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// One request with retries. Only fills raw_text/tokens on success; on
// retryable exhaustion or hard HTTP errors the error field is set instead.
// Throws endpoint_error on 401/403 so callers can abort the whole batch.
model_response issue_request(httplib::Client& client, const split_url& url,
                             const httplib::Headers& headers,
                             const endpoint_config& config,
                             const std::string& body,
                             const std::string& instance_id, int run_index,
                             pcg32& jitter) {
  model_response out;
  out.instance_id = instance_id;
  out.run_index = run_index;

  const int max_attempts = std::max(1, config.retry.max_attempts);
  const long long t0 = now_ms();
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    out.attempts = attempt;
    auto res = client.Post(url.path_prefix + "/chat/completions", headers,
                           body, "application/json");
    const bool retryable =
        !res || res->status == 429 || (res->status >= 500 && res->status < 600);
    if (res && res->status == 200) {
      out.latency_ms = now_ms() - t0;
      try {
        const json j = json::parse(res->body);
        out.raw_text = j.at("choices").at(0).at("message").at("content")
                           .get<std::string>();
        if (j.contains("usage")) {
          const auto& usage = j["usage"];
          if (usage.contains("prompt_tokens")) {
            out.prompt_tokens = usage["prompt_tokens"].get<long long>();
          }
          if (usage.contains("completion_tokens")) {
            out.output_tokens = usage["completion_tokens"].get<long long>();
          }
        }
      } catch (const json::exception& e) {
        out.error = std::string("malformed completion payload: ") + e.what();
      }
      return out;
    }
    if (res && (res->status == 401 || res->status == 403)) {
      throw endpoint_error("authentication rejected (HTTP " +
                           std::to_string(res->status) + ")");
    }
    if (!retryable) {
      out.latency_ms = now_ms() - t0;
      out.error = "HTTP " + std::to_string(res->status);
      return out;
    }
    if (attempt < max_attempts) {
      const double backoff =
          config.retry.backoff_base_ms * static_cast<double>(1u << (attempt - 1));
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<long long>(backoff * jitter.unit())));
    }
  }
  out.latency_ms = now_ms() - t0;
  out.error = "retry budget exhausted after " + std::to_string(max_attempts) +
              " attempts";
  return out;
}

}  // namespace

endpoint_config endpoint_config_from_json(const json& j) {
  endpoint_config c;
  c.base_url = j.at("base_url").get<std::string>();
  c.model_name = j.at("model").get<std::string>();
  if (j.contains("temperature")) c.temperature = j["temperature"].get<double>();
  if (j.contains("top_p")) c.top_p = j["top_p"].get<double>();
  if (j.contains("max_output_tokens")) {
    c.max_output_tokens = j["max_output_tokens"].get<int>();
  }
  if (j.contains("api_key_env")) {
    c.api_key_env_var = j["api_key_env"].get<std::string>();
  }
  if (j.contains("max_concurrent_requests")) {
    c.max_concurrent_requests = j["max_concurrent_requests"].get<int>();
  }
  if (j.contains("retry")) {
    const auto& r = j["retry"];
    if (r.contains("max_attempts")) {
      c.retry.max_attempts = r["max_attempts"].get<int>();
    }
    if (r.contains("backoff_base_ms")) {
      c.retry.backoff_base_ms = r["backoff_base_ms"].get<int>();
    }
  }
  if (j.contains("extra_body")) c.extra_body = j["extra_body"];
  if (c.max_concurrent_requests < 1) {
    throw data_error("max_concurrent_requests must be >= 1");
  }
  return c;
}

endpoint_config load_endpoint_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open endpoint config: " + path);
  try {
    json j;
    in >> j;
    return endpoint_config_from_json(j);
  } catch (const json::exception& e) {
    throw data_error("bad endpoint config " + path + ": " + e.what());
  }
}

std::string response_to_json_line(const model_response& r) {
  json j;
  j["instance_id"] = r.instance_id;
  j["run_index"] = r.run_index;
  j["raw_text"] = r.raw_text;
  j["prompt_tokens"] = r.prompt_tokens;
  j["output_tokens"] = r.output_tokens;
  j["latency_ms"] = r.latency_ms;
  j["attempts"] = r.attempts;
  j["error"] = r.error;
  return j.dump();
}

model_response response_from_json_line(const std::string& line, int line_no) {
  try {
    const json j = json::parse(line);
    model_response r;
    r.instance_id = j.at("instance_id").get<std::string>();
    r.run_index = j.at("run_index").get<int>();
    r.raw_text = j.at("raw_text").get<std::string>();
    r.prompt_tokens = j.value("prompt_tokens", -1LL);
    r.output_tokens = j.value("output_tokens", -1LL);
    r.latency_ms = j.value("latency_ms", 0LL);
    r.attempts = j.value("attempts", 0);
    r.error = j.value("error", std::string());
    return r;
  } catch (const json::exception& e) {
    throw data_error("line " + std::to_string(line_no) + ": " + e.what());
  }
}

std::vector<model_response> read_responses(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open for reading: " + path);
  std::vector<model_response> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    out.push_back(response_from_json_line(line, line_no));
  }
  return out;
}

std::string request_body(const endpoint_config& config,
                         const std::string& prompt) {
  json j;
  j["model"] = config.model_name;
  j["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
  j["temperature"] = config.temperature;
  j["top_p"] = config.top_p;
  if (config.max_output_tokens > 0) j["max_tokens"] = config.max_output_tokens;
  if (config.extra_body.is_object()) {
    for (const auto& [key, value] : config.extra_body.items()) j[key] = value;
  }
  return j.dump();
}

std::vector<model_response> run_instance(const endpoint_config& config,
                                         const task_instance& inst, int k_runs,
                                         const prompt_options& prompts,
                                         const std::string& out_path) {
  const split_url url = split_base_url(config.base_url);
  const httplib::Headers headers = make_headers(config);
  const std::string body =
      request_body(config, build_prompt(inst, prompts).assembled);

  std::ofstream sink;
  if (!out_path.empty()) {
    sink.open(out_path, std::ios::binary | std::ios::app);
    if (!sink) throw data_error("cannot open for appending: " + out_path);
  }

  httplib::Client client(url.host);
  client.set_read_timeout(600, 0);
  pcg32 jitter(static_cast<std::uint64_t>(now_ms()));

  std::vector<model_response> out;
  for (int run = 0; run < k_runs; ++run) {
    model_response r =
        issue_request(client, url, headers, config, body, inst.id, run, jitter);
    if (sink.is_open()) {
      sink << response_to_json_line(r) << '\n';
      sink.flush();
    }
    out.push_back(std::move(r));
  }
  return out;
}

batch_summary run_batch(const endpoint_config& config,
                        const std::vector<task_instance>& instances,
                        int k_runs, const std::string& out_path,
                        const prompt_options& prompts) {
  batch_summary summary;
  summary.requested = static_cast<int>(instances.size()) * k_runs;

  std::set<std::pair<std::string, int>> done;
  if (std::filesystem::exists(out_path)) {
    for (const auto& r : read_responses(out_path)) {
      done.insert({r.instance_id, r.run_index});
    }
  }

  struct work_item {
    const task_instance* inst;
    int run_index;
  };
  std::vector<work_item> work;
  for (const auto& inst : instances) {
    for (int run = 0; run < k_runs; ++run) {
      if (done.count({inst.id, run})) {
        ++summary.skipped;
      } else {
        work.push_back({&inst, run});
      }
    }
  }
  if (work.empty()) return summary;

  // Request bodies are built once per instance up front; all runs of an
  // instance share identical bytes.
  std::map<std::string, std::string> bodies;
  for (const auto& item : work) {
    if (!bodies.count(item.inst->id)) {
      bodies[item.inst->id] =
          request_body(config, build_prompt(*item.inst, prompts).assembled);
    }
  }

  const split_url url = split_base_url(config.base_url);
  const httplib::Headers headers = make_headers(config);

  std::ofstream sink(out_path, std::ios::binary | std::ios::app);
  if (!sink) throw data_error("cannot open for appending: " + out_path);
  std::mutex sink_mutex;

  std::atomic<std::size_t> next{0};
  std::atomic<int> issued{0};
  std::atomic<int> failed{0};
  std::atomic<bool> abort{false};
  std::string abort_reason;
  std::mutex abort_mutex;

  const auto worker = [&](int worker_index) {
    httplib::Client client(url.host);
    client.set_read_timeout(600, 0);
    pcg32 jitter(derive_seed(static_cast<std::uint64_t>(now_ms()),
                             static_cast<std::uint64_t>(worker_index)));
    for (;;) {
      if (abort.load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= work.size()) return;
      const work_item& item = work[i];
      try {
        model_response r = issue_request(client, url, headers, config,
                                         bodies.at(item.inst->id),
                                         item.inst->id, item.run_index, jitter);
        {
          // persisted before counted: a crash never loses an acknowledged
          // completion
          std::lock_guard<std::mutex> lock(sink_mutex);
          sink << response_to_json_line(r) << '\n';
          sink.flush();
        }
        ++issued;
        if (r.failed()) ++failed;
      } catch (const endpoint_error& e) {
        {
          std::lock_guard<std::mutex> lock(abort_mutex);
          if (abort_reason.empty()) abort_reason = e.what();
        }
        abort.store(true);
        return;
      }
    }
  };

  const int pool = std::min<int>(config.max_concurrent_requests,
                                 static_cast<int>(work.size()));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(pool));
  for (int t = 0; t < pool; ++t) threads.emplace_back(worker, t);
  for (auto& t : threads) t.join();

  if (abort.load()) throw endpoint_error(abort_reason);
  summary.issued = issued.load();
  summary.failed = failed.load();
  return summary;
}

}  // namespace keymaze
