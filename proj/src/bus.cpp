#include "vldcop/bus.hpp"

#include <algorithm>
#include <stdexcept>

namespace vldcop {

MessageBus::MessageBus(int num_agents, double drop_prob, int max_delay,
                       std::uint64_t seed)
    : num_agents_(num_agents),
      drop_prob_(drop_prob),
      max_delay_(max_delay),
      seed_(seed),
      inbox_(num_agents) {
  if (drop_prob < 0.0 || drop_prob > 1.0)
    throw std::invalid_argument("drop probability out of range");
  if (max_delay < 0) throw std::invalid_argument("negative delay");
}

void MessageBus::send(int from, int to, std::string tag, std::string payload,
                      std::map<int, int> values) {
  if (to < 0 || to >= num_agents_) throw std::invalid_argument("bad recipient");
  ++sent_;
  const std::uint64_t id = send_counter_++;
  Rng rng = stream(seed_, StreamTag::Drop, id);
  if (drop_prob_ > 0.0 && rng.u01() < drop_prob_) {
    ++dropped_;
    drop_log_.push_back({from, to, round_, "dropped"});
    return;
  }
  int delay = 0;
  if (max_delay_ > 0) {
    Rng drng = stream(seed_, StreamTag::Delay, id);
    delay = static_cast<int>(drng.below(static_cast<std::uint32_t>(max_delay_ + 1)));
  }
  BusMessage msg{from, to, std::move(tag), std::move(payload), std::move(values),
                 round_};
  scheduled_[round_ + 1 + delay].push_back(std::move(msg));
}

void MessageBus::advance() {
  ++round_;
  auto it = scheduled_.find(round_);
  if (it == scheduled_.end()) return;
  std::stable_sort(it->second.begin(), it->second.end(),
                   [](const BusMessage& a, const BusMessage& b) {
                     return a.sent_round != b.sent_round
                                ? a.sent_round < b.sent_round
                                : a.from < b.from;
                   });
  for (auto& msg : it->second) {
    ++delivered_;
    inbox_[msg.to].push_back(std::move(msg));
  }
  scheduled_.erase(it);
}

std::vector<BusMessage> MessageBus::read_inbox(int agent) {
  std::vector<BusMessage> out = std::move(inbox_[agent]);
  inbox_[agent].clear();
  return out;
}

}  // namespace vldcop
