#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <mutex>

#include "vldcop/adapter.hpp"

namespace vldcop {

// Client for an OpenAI-compatible chat-completions endpoint. Parse failures
// are re-asked with an error-explaining follow-up up to the retry budget,
// then degraded to a flagged fallback decision; a stuck run is worse than a
// logged degraded decision.
class RemoteAdapter : public ModelAdapter {
 public:
  RemoteAdapter(const AdapterConfig& cfg, const VlTask& task, std::uint64_t seed);

  bool deterministic() const override { return false; }

 protected:
  ModelDecision do_query(const Prompt& prompt, const QueryContext& ctx) override;

 private:
  // One HTTP round trip; returns assistant content or throws.
  std::string chat(const Prompt& prompt,
                   const std::vector<std::string>& followups);

  AdapterConfig cfg_;
  const VlTask& task_;
  std::uint64_t seed_;
  std::atomic<std::uint64_t> calls_{0};

  // in-flight request cap
  std::mutex gate_mutex_;
  std::condition_variable gate_cv_;
  int inflight_ = 0;
};

std::string base64_encode(const std::string& data);

}  // namespace vldcop
