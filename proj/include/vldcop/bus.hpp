#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "vldcop/rng.hpp"

namespace vldcop {

struct BusMessage {
  int from = -1;
  int to = -1;
  std::string tag;       // "pref" | "assign"
  std::string payload;
  std::map<int, int> values;  // variable -> domain index (assignment messages)
  int sent_round = 0;
};

// Round-synchronous message bus. A message sent in round t is visible no
// earlier than round t+1; drops and delays are resolved deterministically
// from the run seed at send time and logged.
class MessageBus {
 public:
  MessageBus(int num_agents, double drop_prob, int max_delay, std::uint64_t seed);

  void send(int from, int to, std::string tag, std::string payload,
            std::map<int, int> values = {});

  // Advances the round counter and moves due messages into inboxes.
  void advance();

  // Drains the agent's inbox (delivery order: sent round, then sender).
  std::vector<BusMessage> read_inbox(int agent);

  int round() const { return round_; }
  long sent_count() const { return sent_; }
  long delivered_count() const { return delivered_; }
  long dropped_count() const { return dropped_; }

  struct DropLogEntry {
    int from, to, round;
    std::string reason;
  };
  const std::vector<DropLogEntry>& drop_log() const { return drop_log_; }

 private:
  int num_agents_;
  double drop_prob_;
  int max_delay_;
  std::uint64_t seed_;
  int round_ = 0;
  long sent_ = 0, delivered_ = 0, dropped_ = 0;
  std::uint64_t send_counter_ = 0;
  std::map<int, std::vector<BusMessage>> scheduled_;  // delivery round -> messages
  std::vector<std::vector<BusMessage>> inbox_;
  std::vector<DropLogEntry> drop_log_;
};

}  // namespace vldcop
