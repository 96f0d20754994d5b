#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "distclust/point.hpp"

namespace distclust {

// Star topology: one coordinator plus machines 1..m. Machines never talk to
// each other; the runtime rejects any such message. Execution is synchronous:
// a message sent in round r is readable from round r+1 on.
struct PartyId {
  int code = 0;  // 0 = coordinator, i >= 1 = machine i

  static PartyId coordinator() { return PartyId{0}; }
  static PartyId machine(int index) {
    if (index < 1) throw std::invalid_argument("PartyId: machine index starts at 1");
    return PartyId{index};
  }
  bool is_coordinator() const { return code == 0; }
  int machine_index() const {
    if (code < 1) throw std::logic_error("PartyId: coordinator has no machine index");
    return code;
  }
  bool operator==(const PartyId&) const = default;
};

// Control token, e.g. "yes" / "no". Costs one word like a scalar.
struct Token {
  std::string text;
};

using Payload = std::variant<double, Token, std::vector<Point>, WeightedPointSet>;

// Word accounting. Scalars and tokens cost one word. A point costs
// words_per_point words, or its dimension when words_per_point is 0 (the
// default: one word per coordinate). A weighted point costs one extra word
// for the weight.
struct CostingRule {
  int words_per_point = 0;

  std::int64_t words_for_point(const Point& p) const {
    return words_per_point > 0 ? words_per_point
                               : static_cast<std::int64_t>(p.dim());
  }
  std::int64_t cost_of(const Payload& payload) const;
};

std::int64_t cost_of(const Payload& payload, const CostingRule& rule);

struct Message {
  PartyId from;
  PartyId to;
  int round = 0;  // round the message was sent in
  Payload payload;
  std::int64_t word_cost = 0;
};

// Per-round word totals, split by direction (up = machine to coordinator).
class CommLedger {
 public:
  void record(int round, bool up, std::int64_t words);
  void merge(const CommLedger& other);

  int rounds() const { return static_cast<int>(rows_.size()); }
  std::int64_t total_words() const;
  std::int64_t up_words(int round) const;
  std::int64_t down_words(int round) const;
  nlohmann::json to_json() const;

 private:
  struct Row {
    std::int64_t up = 0;
    std::int64_t down = 0;
  };
  std::vector<Row> rows_;  // rows_[r-1] holds round r; trailing rows are nonzero
};

class Network;

// Send interface handed to a party during its turn. It is valid only for the
// round it was issued for; any use after the network advanced is an error.
class Outbox {
 public:
  void send_to_coordinator(Payload payload);
  void send_to_machine(int machine, Payload payload);
  void broadcast(Payload payload);  // coordinator to every machine
  void halt();                      // coordinator: stop after this round

 private:
  friend class Network;
  Outbox(Network* net, PartyId party, int round) : net_(net), party_(party), round_(round) {}
  Network* net_;
  PartyId party_;
  int round_;
};

struct MachineCtx {
  int machine;  // 1..m
  int round;
  const std::vector<Message>& inbox;
  Outbox& out;
  std::mt19937_64& rng;
};

struct CoordinatorCtx {
  int round;
  const std::vector<Message>& inbox;
  Outbox& out;
  std::mt19937_64& rng;
};

// Lock-step protocol runner. Each round, every machine handler runs (in
// machine order), then the coordinator handler. Handlers see only their own
// captured input and the messages delivered to them, which is what keeps
// party state isolated. All randomness flows from the constructor seed
// through per-party generators, so identical inputs and seed give identical
// traffic and ledgers.
class Network {
 public:
  Network(int num_machines, CostingRule rule, std::uint64_t seed);

  void on_machine(std::function<void(MachineCtx&)> fn) { machine_fn_ = std::move(fn); }
  void on_coordinator(std::function<void(CoordinatorCtx&)> fn) { coordinator_fn_ = std::move(fn); }

  struct RunResult {
    CommLedger ledger;
    int rounds_executed = 0;
  };
  // Runs rounds 1..max_rounds, stopping early after a round in which the
  // coordinator called halt().
  RunResult run(int max_rounds);

  int num_machines() const { return m_; }

 private:
  friend class Outbox;
  void submit(PartyId from, PartyId to, Payload payload, int round);

  int m_;
  CostingRule rule_;
  std::function<void(MachineCtx&)> machine_fn_;
  std::function<void(CoordinatorCtx&)> coordinator_fn_;
  std::vector<std::mt19937_64> rngs_;       // [0] coordinator, [i] machine i
  std::vector<std::vector<Message>> next_;  // inboxes being filled this round
  std::vector<std::vector<Message>> now_;   // inboxes readable this round
  CommLedger ledger_;
  int current_round_ = 0;
  bool halted_ = false;
};

}  // namespace distclust
