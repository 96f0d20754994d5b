#include "distclust/dist_kzc.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "distclust/aggregate.hpp"
#include "distclust/kzc.hpp"
#include "distclust/seeding.hpp"

namespace distclust {

std::vector<Point> partition_union(const Partition& parts) {
  std::vector<Point> all;
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

void DistKzcConfig::validate(std::size_t machines, std::size_t n) const {
  if (k < 1) throw std::invalid_argument("DistKzcConfig: k must be >= 1");
  if (z < 0 || static_cast<std::size_t>(z) >= n)
    throw std::invalid_argument("DistKzcConfig: need 0 <= z < n");
  if (!(eps > 0.0) || !(eps <= 1.0))
    throw std::invalid_argument("DistKzcConfig: eps must be in (0, 1]");
  if (machines < 1) throw std::invalid_argument("DistKzcConfig: need at least one machine");
  if (!submachine_splits.empty() && submachine_splits.size() != machines)
    throw std::invalid_argument("DistKzcConfig: one split factor per machine");
}

namespace {

// Coalesce exactly coincident locations, summing weights; the first entry of
// each location keeps its id. Arrival order is machine order, so the merge is
// deterministic.
WeightedPointSet merge_summaries(const std::vector<WeightedPointSet>& parts) {
  WeightedPointSet merged;
  for (const auto& part : parts) {
    for (std::size_t i = 0; i < part.size(); ++i) {
      bool folded = false;
      for (std::size_t j = 0; j < merged.size(); ++j) {
        if (same_location(merged.points[j], part.points[i])) {
          merged.weights[j] += part.weights[i];
          folded = true;
          break;
        }
      }
      if (!folded) merged.add(part.points[i], part.weights[i]);
    }
  }
  return merged;
}

double gate_cap(const DistKzcConfig& cfg, int m) {
  return static_cast<double>(cfg.k) * m * (1.0 + 1.0 / cfg.eps);
}

}  // namespace

GuessOutcome dist_kzc_single(double L, const DistKzcConfig& cfg, const Partition& partition) {
  const int m = static_cast<int>(partition.size());
  std::size_t n = 0;
  for (const auto& p : partition) n += p.size();
  cfg.validate(m, n);
  if (!(L >= 0.0)) throw std::invalid_argument("dist_kzc_single: L must be >= 0");

  const Metric metric = Metric::euclidean();
  const double y = cfg.eps * static_cast<double>(cfg.z) / (static_cast<double>(cfg.k) * m);

  GuessOutcome out;
  out.L = L;
  out.radius_bound = 24.0 * L;
  out.z_used = (1.0 + cfg.eps) * static_cast<double>(cfg.z);

  std::vector<WeightedPointSet> summaries(m + 1);
  Network net(m, CostingRule{cfg.words_per_point}, cfg.seed);

  net.on_machine([&](MachineCtx& ctx) {
    if (ctx.round == 1) {
      summaries[ctx.machine] =
          aggregate(partition[ctx.machine - 1], L, y, metric).summary;
      ctx.out.send_to_coordinator(static_cast<double>(summaries[ctx.machine].size()));
    } else if (ctx.round == 3) {
      for (const Message& msg : ctx.inbox) {
        if (std::get<Token>(msg.payload).text == "yes")
          ctx.out.send_to_coordinator(summaries[ctx.machine]);
      }
    }
  });

  net.on_coordinator([&](CoordinatorCtx& ctx) {
    if (ctx.round == 2) {
      double sum = 0.0;
      for (const Message& msg : ctx.inbox) sum += std::get<double>(msg.payload);
      if (sum > gate_cap(cfg, m)) {
        ctx.out.broadcast(Token{"no"});
        out.no = true;
        out.stage = GuessOutcome::Stage::Gate;
        ctx.out.halt();
      } else {
        ctx.out.broadcast(Token{"yes"});
      }
    } else if (ctx.round == 4) {
      std::vector<WeightedPointSet> received;
      for (const Message& msg : ctx.inbox)
        received.push_back(std::get<WeightedPointSet>(msg.payload));
      const WeightedPointSet merged = merge_summaries(received);
      const double z_prime =
          out.z_used + merged.total_weight() - static_cast<double>(n);
      if (z_prime < 0.0) {
        out.no = true;
        out.stage = GuessOutcome::Stage::NegativeBudget;
      } else {
        const KzcOutcome res = kzc(cfg.k, z_prime, merged, 5.0 * L, metric);
        if (res.no) {
          out.no = true;
          out.stage = GuessOutcome::Stage::Kzc;
        } else {
          out.no = false;
          out.stage = GuessOutcome::Stage::Solved;
          out.centers = res.centers;
        }
      }
      ctx.out.halt();
    }
  });

  const Network::RunResult run = net.run(4);
  out.ledger = run.ledger;
  out.rounds_executed = run.rounds_executed;
  return out;
}

namespace {

// Largest-exponent helpers on the shared (1+eps)^t grid. Log-based first
// guesses are corrected by direct comparison so grid values from different
// machines coincide bit for bit.
long long exponent_at_least(double value, double base) {
  long long t = static_cast<long long>(std::ceil(std::log(value) / std::log(base)));
  while (std::pow(base, t) < value) ++t;
  while (std::pow(base, t - 1) >= value) --t;
  return t;
}

long long exponent_below(double value, double base) {
  long long t = static_cast<long long>(std::floor(std::log(value) / std::log(base)));
  while (std::pow(base, t) >= value) --t;
  while (std::pow(base, t + 1) < value) ++t;
  return t;
}

}  // namespace

Ladder build_ladder(const Partition& partition, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("build_ladder: eps must be > 0");
  const double base = 1.0 + eps;
  Ladder lad;
  std::set<long long> exponents;
  for (const auto& machine : partition) {
    std::vector<double> rungs{0.0};
    const DistanceExtremes ex = nonzero_distance_extremes(machine);
    if (ex.has_value) {
      const long long lo = exponent_at_least(ex.d_min, base);
      const long long hi = exponent_below(base * ex.d_max, base);
      for (long long t = lo; t <= hi; ++t) {
        rungs.push_back(std::pow(base, t));
        exponents.insert(t);
      }
    }
    lad.per_machine.push_back(std::move(rungs));
  }
  lad.merged.push_back(0.0);
  for (long long t : exponents) lad.merged.push_back(std::pow(base, t));
  return lad;
}

namespace {

// Driver-side machine state: aggregation summaries are cached per rung so a
// completion never recomputes what its probe already built.
struct MachineCache {
  const std::vector<Point>* points = nullptr;
  std::map<double, WeightedPointSet> summaries;

  const WeightedPointSet& at(double L, double y, const Metric& metric) {
    auto it = summaries.find(L);
    if (it == summaries.end())
      it = summaries.emplace(L, aggregate(*points, L, y, metric).summary).first;
    return it->second;
  }
};

struct DriverState {
  const DistKzcConfig* cfg;
  const Partition* partition;
  int m = 0;
  std::size_t n = 0;
  double y = 0.0;
  Metric metric = Metric::euclidean();
  std::vector<MachineCache> cache;
  CommLedger ledger;
  int rounds = 0;
  std::uint64_t instance = 0;

  Network make_network() {
    return Network(m, CostingRule{cfg->words_per_point}, mix_seed(cfg->seed, ++instance));
  }
};

// One metadata round: every machine reports its nonzero distance extremes.
std::vector<DistanceExtremes> run_metadata_phase(DriverState& st) {
  std::vector<DistanceExtremes> endpoints(st.m + 1);
  Network net = st.make_network();
  net.on_machine([&](MachineCtx& ctx) {
    if (ctx.round != 1) return;
    const DistanceExtremes ex = nonzero_distance_extremes(*st.cache[ctx.machine].points);
    endpoints[ctx.machine] = ex;
    ctx.out.send_to_coordinator(ex.has_value ? ex.d_min : 0.0);
    ctx.out.send_to_coordinator(ex.has_value ? ex.d_max : 0.0);
  });
  net.on_coordinator([&](CoordinatorCtx& ctx) {
    if (ctx.round == 2) ctx.out.halt();
  });
  const Network::RunResult run = net.run(2);
  st.ledger.merge(run.ledger);
  st.rounds += run.rounds_executed;
  return endpoints;
}

// Size probe for one rung: the coordinator ships L, machines answer with
// their summary size. Costs 2m words like the first two rounds of a guess.
long long run_probe(DriverState& st, double L) {
  long long sum = 0;
  Network net = st.make_network();
  net.on_machine([&](MachineCtx& ctx) {
    if (ctx.round != 2) return;
    const double rung = std::get<double>(ctx.inbox.at(0).payload);
    ctx.out.send_to_coordinator(
        static_cast<double>(st.cache[ctx.machine].at(rung, st.y, st.metric).size()));
  });
  net.on_coordinator([&](CoordinatorCtx& ctx) {
    if (ctx.round == 1) {
      ctx.out.broadcast(L);
    } else if (ctx.round == 3) {
      for (const Message& msg : ctx.inbox)
        sum += static_cast<long long>(std::get<double>(msg.payload));
      ctx.out.halt();
    }
  });
  const Network::RunResult run = net.run(3);
  st.ledger.merge(run.ledger);
  st.rounds += run.rounds_executed;
  return sum;
}

// Data phase for one accepted rung: ship the summaries, solve at 5L.
GuessOutcome run_completion(DriverState& st, double L) {
  GuessOutcome out;
  out.L = L;
  out.radius_bound = 24.0 * L;
  out.z_used = (1.0 + st.cfg->eps) * static_cast<double>(st.cfg->z);

  Network net = st.make_network();
  net.on_machine([&](MachineCtx& ctx) {
    if (ctx.round != 2) return;
    const double rung = std::get<double>(ctx.inbox.at(0).payload);
    ctx.out.send_to_coordinator(st.cache[ctx.machine].at(rung, st.y, st.metric));
  });
  net.on_coordinator([&](CoordinatorCtx& ctx) {
    if (ctx.round == 1) {
      ctx.out.broadcast(L);
    } else if (ctx.round == 3) {
      std::vector<WeightedPointSet> received;
      for (const Message& msg : ctx.inbox)
        received.push_back(std::get<WeightedPointSet>(msg.payload));
      const WeightedPointSet merged = merge_summaries(received);
      const double z_prime =
          out.z_used + merged.total_weight() - static_cast<double>(st.n);
      if (z_prime < 0.0) {
        out.no = true;
        out.stage = GuessOutcome::Stage::NegativeBudget;
      } else {
        const KzcOutcome res = kzc(st.cfg->k, z_prime, merged, 5.0 * L, st.metric);
        out.no = res.no;
        out.stage = res.no ? GuessOutcome::Stage::Kzc : GuessOutcome::Stage::Solved;
        if (!res.no) out.centers = res.centers;
      }
      ctx.out.halt();
    }
  });
  const Network::RunResult run = net.run(3);
  st.ledger.merge(run.ledger);
  st.rounds += run.rounds_executed;
  return out;
}

}  // namespace

DistKzcReport dist_kzc_full(const DistKzcConfig& cfg, const Partition& partition,
                            DriverMode mode) {
  std::size_t n = 0;
  for (const auto& p : partition) n += p.size();
  // Splits address the partition as handed in, so validate before expanding.
  cfg.validate(partition.size(), n);
  Partition parts = cfg.submachine_splits.empty()
                        ? partition
                        : split_submachines(partition, cfg.submachine_splits, cfg.seed);
  const int m = static_cast<int>(parts.size());

  DriverState st;
  st.cfg = &cfg;
  st.partition = &parts;
  st.m = m;
  st.n = n;
  st.y = cfg.eps * static_cast<double>(cfg.z) / (static_cast<double>(cfg.k) * m);
  st.cache.resize(m + 1);
  for (int i = 1; i <= m; ++i) st.cache[i].points = &parts[i - 1];

  DistKzcReport report;
  report.mode = mode;
  report.machines = m;
  report.z_used = (1.0 + cfg.eps) * static_cast<double>(cfg.z);

  run_metadata_phase(st);
  report.ladder = build_ladder(parts, cfg.eps);
  const std::vector<double>& T = report.ladder.merged;
  const double cap = gate_cap(cfg, m);

  std::map<std::size_t, bool> gate;  // probed rung index -> gate verdict
  auto probe_gate = [&](std::size_t idx) {
    auto it = gate.find(idx);
    if (it != gate.end()) return it->second;
    const bool ok = static_cast<double>(run_probe(st, T[idx])) <= cap;
    gate.emplace(idx, ok);
    if (ok) report.gate_passed.push_back(T[idx]);
    return ok;
  };

  std::size_t start = 0;
  if (mode == DriverMode::ParallelGuesses) {
    // All probes conceptually run side by side: their ledgers sum, their
    // rounds overlap. Count the phase once, not per rung.
    const int before = st.rounds;
    for (std::size_t i = 0; i < T.size(); ++i) probe_gate(i);
    st.rounds = before + 3;
  } else {
    // Leftmost-accept binary search over the gate verdicts.
    std::size_t lo = 0, hi = T.size() - 1;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (probe_gate(mid))
        hi = mid;
      else
        lo = mid + 1;
    }
    start = lo;
  }

  std::optional<GuessOutcome> solved;
  for (std::size_t idx = start; idx < T.size() && !solved; ++idx) {
    if (!probe_gate(idx)) continue;
    GuessOutcome attempt = run_completion(st, T[idx]);
    if (!attempt.no) solved = std::move(attempt);
  }
  if (!solved) {
    const DistanceExtremes global = nonzero_distance_extremes(partition_union(parts));
    std::ostringstream msg;
    msg << "dist_kzc_full: no ladder rung yielded a solution (top rung "
        << (T.empty() ? 0.0 : T.back()) << ", global d_max "
        << (global.has_value ? global.d_max : 0.0) << ")";
    throw std::runtime_error(msg.str());
  }

  std::sort(report.gate_passed.begin(), report.gate_passed.end());
  report.selected_L = solved->L;
  report.radius_bound = solved->radius_bound;
  report.ledger = st.ledger;
  report.driver_rounds = st.rounds;

  const std::vector<Point> all = partition_union(parts);
  report.bicriteria_z =
      static_cast<long long>(std::floor((1.0 + cfg.eps) * static_cast<double>(cfg.z)));
  const Metric eu = Metric::euclidean();
  const auto safe_center_cost = [&](long long zz) {
    if (solved->centers.empty() || zz >= static_cast<long long>(all.size())) return 0.0;
    return center_cost_with_outliers(std::span<const Point>(all), solved->centers, zz, eu);
  };
  report.objective_at_z = safe_center_cost(cfg.z);
  report.objective_at_bicriteria_z = safe_center_cost(report.bicriteria_z);

  report.solution.kind = ObjectiveKind::Center;
  report.solution.centers = solved->centers;
  report.solution.objective = report.objective_at_bicriteria_z;
  report.solution.outliers_allowed = static_cast<double>(report.bicriteria_z);
  return report;
}

Partition split_submachines(const Partition& partition, const std::vector<int>& t,
                            std::uint64_t seed) {
  if (t.size() != partition.size())
    throw std::invalid_argument("split_submachines: one factor per machine");
  Partition out;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const std::size_t n_i = partition[i].size();
    const int t_i = t[i];
    if (t_i < 1) throw std::invalid_argument("split_submachines: factors must be >= 1");
    if (t_i == 1) {
      out.push_back(partition[i]);
      continue;
    }
    if (static_cast<std::size_t>(t_i) > n_i)
      throw std::invalid_argument("split_submachines: factor exceeds machine size");
    std::vector<Point> shuffled = partition[i];
    std::mt19937_64 rng = rng_for_stream(seed, i);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const std::size_t base = n_i / t_i;
    const std::size_t extra = n_i % t_i;
    std::size_t pos = 0;
    for (int s = 0; s < t_i; ++s) {
      const std::size_t len = base + (static_cast<std::size_t>(s) < extra ? 1 : 0);
      out.emplace_back(shuffled.begin() + pos, shuffled.begin() + pos + len);
      pos += len;
    }
  }
  return out;
}

nlohmann::json DistKzcReport::to_json() const {
  nlohmann::json centers = nlohmann::json::array();
  for (const Point& c : solution.centers) centers.push_back(c.coords);
  return {
      {"L", selected_L},
      {"centers", centers},
      {"radius_bound", radius_bound},
      {"z_used", z_used},
      {"bicriteria_z", bicriteria_z},
      {"objective_at_z", objective_at_z},
      {"objective_at_bicriteria_z", objective_at_bicriteria_z},
      {"ledger", ledger.to_json()},
      {"driver_rounds", driver_rounds},
      {"rounds_per_guess", rounds_per_guess},
      {"mode", mode == DriverMode::BinarySearch ? "binary-search" : "parallel"},
      {"machines", machines},
  };
}

}  // namespace distclust
