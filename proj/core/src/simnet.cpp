#include "distclust/simnet.hpp"

#include "distclust/seeding.hpp"

namespace distclust {

std::int64_t CostingRule::cost_of(const Payload& payload) const {
  struct Visitor {
    const CostingRule& rule;
    std::int64_t operator()(double) const { return 1; }
    std::int64_t operator()(const Token&) const { return 1; }
    std::int64_t operator()(const std::vector<Point>& pts) const {
      std::int64_t s = 0;
      for (const Point& p : pts) s += rule.words_for_point(p);
      return s;
    }
    std::int64_t operator()(const WeightedPointSet& set) const {
      std::int64_t s = 0;
      for (const Point& p : set.points) s += rule.words_for_point(p) + 1;
      return s;
    }
  };
  return std::visit(Visitor{*this}, payload);
}

std::int64_t cost_of(const Payload& payload, const CostingRule& rule) {
  return rule.cost_of(payload);
}

void CommLedger::record(int round, bool up, std::int64_t words) {
  if (round < 1) throw std::invalid_argument("CommLedger: rounds start at 1");
  if (static_cast<int>(rows_.size()) < round) rows_.resize(round);
  (up ? rows_[round - 1].up : rows_[round - 1].down) += words;
}

void CommLedger::merge(const CommLedger& other) {
  if (rows_.size() < other.rows_.size()) rows_.resize(other.rows_.size());
  for (std::size_t i = 0; i < other.rows_.size(); ++i) {
    rows_[i].up += other.rows_[i].up;
    rows_[i].down += other.rows_[i].down;
  }
}

std::int64_t CommLedger::total_words() const {
  std::int64_t t = 0;
  for (const Row& r : rows_) t += r.up + r.down;
  return t;
}

std::int64_t CommLedger::up_words(int round) const {
  return round >= 1 && round <= rounds() ? rows_[round - 1].up : 0;
}

std::int64_t CommLedger::down_words(int round) const {
  return round >= 1 && round <= rounds() ? rows_[round - 1].down : 0;
}

nlohmann::json CommLedger::to_json() const {
  nlohmann::json per_round = nlohmann::json::array();
  for (int r = 1; r <= rounds(); ++r) {
    per_round.push_back({{"round", r}, {"up_words", up_words(r)}, {"down_words", down_words(r)}});
  }
  return {{"rounds", rounds()}, {"total_words", total_words()}, {"per_round", per_round}};
}

void Outbox::send_to_coordinator(Payload payload) {
  if (party_.is_coordinator())
    throw std::logic_error("Outbox: coordinator cannot send to itself");
  net_->submit(party_, PartyId::coordinator(), std::move(payload), round_);
}

void Outbox::send_to_machine(int machine, Payload payload) {
  if (!party_.is_coordinator())
    throw std::logic_error("Outbox: only the coordinator addresses machines");
  net_->submit(party_, PartyId::machine(machine), std::move(payload), round_);
}

void Outbox::broadcast(Payload payload) {
  if (!party_.is_coordinator())
    throw std::logic_error("Outbox: only the coordinator broadcasts");
  for (int i = 1; i <= net_->num_machines(); ++i)
    net_->submit(party_, PartyId::machine(i), payload, round_);
}

void Outbox::halt() {
  if (!party_.is_coordinator()) throw std::logic_error("Outbox: only the coordinator halts");
  net_->halted_ = true;
}

Network::Network(int num_machines, CostingRule rule, std::uint64_t seed)
    : m_(num_machines), rule_(rule) {
  if (num_machines < 1) throw std::invalid_argument("Network: need at least one machine");
  rngs_.reserve(m_ + 1);
  for (int code = 0; code <= m_; ++code)
    rngs_.emplace_back(rng_for_stream(seed, static_cast<std::uint64_t>(code)));
  next_.resize(m_ + 1);
  now_.resize(m_ + 1);
}

void Network::submit(PartyId from, PartyId to, Payload payload, int round) {
  if (round != current_round_)
    throw std::logic_error("Network: message sent for a past round");
  if (!from.is_coordinator() && !to.is_coordinator())
    throw std::logic_error("Network: machine-to-machine messages are not allowed");
  if (!to.is_coordinator() && (to.code < 1 || to.code > m_))
    throw std::invalid_argument("Network: machine index out of range");
  Message msg{from, to, round, std::move(payload), 0};
  msg.word_cost = rule_.cost_of(msg.payload);
  ledger_.record(round, /*up=*/to.is_coordinator(), msg.word_cost);
  next_[to.code].push_back(std::move(msg));
}

Network::RunResult Network::run(int max_rounds) {
  if (max_rounds < 0) throw std::invalid_argument("Network: max_rounds must be >= 0");
  int executed = 0;
  for (int round = 1; round <= max_rounds && !halted_; ++round) {
    current_round_ = round;
    now_ = std::move(next_);
    next_.assign(m_ + 1, {});
    for (int i = 1; i <= m_; ++i) {
      if (!machine_fn_) break;
      Outbox out(this, PartyId::machine(i), round);
      MachineCtx ctx{i, round, now_[i], out, rngs_[i]};
      machine_fn_(ctx);
    }
    if (coordinator_fn_) {
      Outbox out(this, PartyId::coordinator(), round);
      CoordinatorCtx ctx{round, now_[0], out, rngs_[0]};
      coordinator_fn_(ctx);
    }
    executed = round;
  }
  current_round_ = -1;  // invalidate any retained Outbox
  return RunResult{ledger_, executed};
}

}  // namespace distclust
