#include "vldcop/remote.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace vldcop {

using nlohmann::json;

std::string base64_encode(const std::string& data) {
  static const char* alphabet =
      "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 2 < data.size()) {
    unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                 (static_cast<unsigned char>(data[i + 1]) << 8) |
                 static_cast<unsigned char>(data[i + 2]);
    out += alphabet[(v >> 18) & 63];
    out += alphabet[(v >> 12) & 63];
    out += alphabet[(v >> 6) & 63];
    out += alphabet[v & 63];
    i += 3;
  }
  if (i + 1 == data.size()) {
    unsigned v = static_cast<unsigned char>(data[i]) << 16;
    out += alphabet[(v >> 18) & 63];
    out += alphabet[(v >> 12) & 63];
    out += "==";
  } else if (i + 2 == data.size()) {
    unsigned v = (static_cast<unsigned char>(data[i]) << 16) |
                 (static_cast<unsigned char>(data[i + 1]) << 8);
    out += alphabet[(v >> 18) & 63];
    out += alphabet[(v >> 12) & 63];
    out += alphabet[(v >> 6) & 63];
    out += "=";
  }
  return out;
}

namespace {

struct EndpointParts {
  std::string base;  // scheme://host[:port]
  std::string path_prefix;
};

EndpointParts split_endpoint(const std::string& endpoint) {
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos)
    throw std::invalid_argument("endpoint must include a scheme");
  auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {endpoint, ""};
  std::string prefix = endpoint.substr(path_start);
  if (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {endpoint.substr(0, path_start), prefix};
}

struct HttpFailure : std::runtime_error {
  bool retryable;
  bool rate_limited;
  HttpFailure(const std::string& what, bool retry, bool limited)
      : std::runtime_error(what), retryable(retry), rate_limited(limited) {}
};

}  // namespace

RemoteAdapter::RemoteAdapter(const AdapterConfig& cfg, const VlTask& task,
                             std::uint64_t seed)
    : cfg_(cfg), task_(task), seed_(seed) {
  if (cfg_.endpoint.empty()) throw std::invalid_argument("remote endpoint missing");
  split_endpoint(cfg_.endpoint);  // validate eagerly
}

std::string RemoteAdapter::chat(const Prompt& prompt,
                                const std::vector<std::string>& followups) {
  EndpointParts ep = split_endpoint(cfg_.endpoint);

  json user_content;
  if (!prompt.image_svg.empty()) {
    user_content = json::array();
    user_content.push_back({{"type", "text"}, {"text", prompt.user}});
    user_content.push_back(
        {{"type", "image_url"},
         {"image_url",
          {{"url", "data:image/svg+xml;base64," + base64_encode(prompt.image_svg)}}}});
  } else {
    user_content = prompt.user;
  }
  json messages = json::array();
  messages.push_back({{"role", "system"}, {"content", prompt.system}});
  messages.push_back({{"role", "user"}, {"content", user_content}});
  for (const auto& f : followups)
    messages.push_back({{"role", "user"}, {"content", f}});

  json body = {{"model", cfg_.model},
               {"messages", messages},
               {"temperature", cfg_.temperature},
               {"max_tokens", 1024}};

  httplib::Client client(ep.base);
  client.set_connection_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
  client.set_read_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
  httplib::Headers headers;
  if (const char* key = std::getenv(cfg_.credentials_env.c_str()))
    headers.emplace("Authorization", std::string("Bearer ") + key);

  auto res = client.Post(ep.path_prefix + "/chat/completions", headers,
                         body.dump(), "application/json");
  if (!res) throw HttpFailure("network error or timeout", true, false);
  if (res->status == 401 || res->status == 403)
    throw std::runtime_error("authentication failure against remote endpoint");
  if (res->status == 429)
    throw HttpFailure("rate limited", true, true);
  if (res->status != 200)
    throw HttpFailure("http status " + std::to_string(res->status), true, false);
  json reply = json::parse(res->body);
  return reply.at("choices").at(0).at("message").at("content").get<std::string>();
}

ModelDecision RemoteAdapter::do_query(const Prompt& prompt,
                                      const QueryContext& ctx) {
  const std::uint64_t call = calls_++;
  {
    std::unique_lock<std::mutex> lock(gate_mutex_);
    gate_cv_.wait(lock, [&] { return inflight_ < cfg_.max_inflight; });
    ++inflight_;
  }
  struct Release {
    RemoteAdapter* self;
    ~Release() {
      std::lock_guard<std::mutex> lock(self->gate_mutex_);
      --self->inflight_;
      self->gate_cv_.notify_one();
    }
  } release{this};

  std::vector<std::string> followups;
  int attempts = 0;
  for (int attempt = 0; attempt <= cfg_.retry_budget; ++attempt) {
    ++attempts;
    std::string content;
    try {
      content = chat(prompt, followups);
    } catch (const HttpFailure& e) {
      if (e.rate_limited)
        std::this_thread::sleep_for(std::chrono::milliseconds(100 << attempt));
      continue;
    }
    try {
      ModelDecision d = parse_decision(ctx.kind, content, ctx);
      d.attempts = attempts;
      return d;
    } catch (const ParseError& e) {
      followups.push_back(std::string("Your previous answer could not be used: ") +
                          e.what() +
                          ". Please answer again with exactly one fenced "
                          "answer block in the requested format.");
    }
  }
  ModelDecision d = fallback_decision(ctx, seed_, call, cfg_.resolve_max);
  d.attempts = attempts;
  return d;
}

std::unique_ptr<ModelAdapter> make_adapter(const AdapterConfig& cfg,
                                           const VlTask& task,
                                           std::uint64_t seed) {
  if (cfg.kind == "scripted")
    return std::make_unique<ScriptedOracle>(task, cfg);
  if (cfg.kind == "noisy")
    return std::make_unique<NoisyOracle>(task, cfg.noise_p, seed, cfg);
  if (cfg.kind == "remote")
    return std::make_unique<RemoteAdapter>(cfg, task, seed);
  throw std::invalid_argument("unknown adapter kind: " + cfg.kind);
}

}  // namespace vldcop
