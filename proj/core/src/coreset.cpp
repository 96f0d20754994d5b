#include "distclust/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "distclust/baselines.hpp"
#include "distclust/seeding.hpp"
#include "distclust/text.hpp"

namespace distclust {
namespace {

double powed(double d, int ell) { return ell == 2 ? d * d : d; }

void validate(const Partition& partition, const CoresetConfig& config) {
  if (partition.empty()) throw std::invalid_argument("coreset: partition must be nonempty");
  if (config.k < 1) throw std::invalid_argument("coreset: k must be >= 1");
  if (config.ell != 1 && config.ell != 2)
    throw std::invalid_argument("coreset: ell must be 1 or 2");
  if (!(config.eps > 0.0 && config.eps < 1.0))
    throw std::invalid_argument("coreset: eps must lie in (0,1)");
  if (!(config.delta > 0.0 && config.delta < 1.0))
    throw std::invalid_argument("coreset: delta must lie in (0,1)");
  if (config.lloyd_iterations < 1)
    throw std::invalid_argument("coreset: lloyd_iterations must be >= 1");
  bool any = false;
  for (const auto& part : partition) any = any || !part.empty();
  if (!any) throw std::invalid_argument("coreset: no points");
}

// Largest-remainder split of `budget` proportionally to `shares` (ties to the
// lower index). Zero shares get zero. All-zero shares allocate nothing.
std::vector<std::size_t> largest_remainder_allocation(const std::vector<double>& shares,
                                                      std::size_t budget) {
  const std::size_t m = shares.size();
  std::vector<std::size_t> alloc(m, 0);
  double total = 0.0;
  for (double s : shares) total += s;
  if (!(total > 0.0) || budget == 0) return alloc;

  std::vector<double> remainder(m, 0.0);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double exact = static_cast<double>(budget) * shares[i] / total;
    alloc[i] = static_cast<std::size_t>(exact);
    remainder[i] = exact - static_cast<double>(alloc[i]);
    assigned += alloc[i];
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
    return a < b;
  });
  for (std::size_t j = 0; assigned < budget && j < m; ++j) {
    if (shares[order[j]] <= 0.0) continue;  // never allocate to zero-cost machines
    ++alloc[order[j]];
    ++assigned;
  }
  // A pathological share vector (one positive entry) cannot strand budget:
  // the positive entry absorbs the remainder above via its fractional slot.
  return alloc;
}

// Coalesce coincident locations, summing weights; first id wins.
WeightedPointSet merge_coincident(const WeightedPointSet& in) {
  WeightedPointSet out;
  for (std::size_t i = 0; i < in.points.size(); ++i) {
    bool merged = false;
    for (std::size_t j = 0; j < out.points.size(); ++j) {
      if (same_location(out.points[j], in.points[i])) {
        out.weights[j] += in.weights[i];
        merged = true;
        break;
      }
    }
    if (!merged) out.add(in.points[i], in.weights[i]);
  }
  return out;
}

struct MachineState {
  std::vector<Point> centers;
  std::vector<int> assignment;
  std::vector<double> point_cost;  // d_L^ell to the assigned center
  double local_cost = 0.0;
};

Coreset build_exact(const Partition& partition, double L, const CoresetConfig& config,
                    std::uint64_t seed) {
  const int m = static_cast<int>(partition.size());
  Network net(m, CostingRule{config.words_per_point}, seed);
  Coreset coreset;
  coreset.per_machine_samples.assign(static_cast<std::size_t>(m), 0);

  net.on_machine([&](MachineCtx& ctx) {
    if (ctx.round != 1) return;
    const auto& part = partition[static_cast<std::size_t>(ctx.machine) - 1];
    if (part.empty()) return;
    ctx.out.send_to_coordinator(unit_weighted(part));
  });
  net.on_coordinator([&](CoordinatorCtx& ctx) {
    if (ctx.round != 2) return;
    WeightedPointSet pooled;
    for (const Message& msg : ctx.inbox) {
      const auto& wps = std::get<WeightedPointSet>(msg.payload);
      coreset.per_machine_samples[static_cast<std::size_t>(msg.from.machine_index()) - 1] =
          wps.points.size();
      for (std::size_t i = 0; i < wps.points.size(); ++i) pooled.add(wps.points[i], wps.weights[i]);
    }
    coreset.entries = merge_coincident(pooled);
    ctx.out.halt();
  });
  const auto result = net.run(2);

  for (std::size_t i = 0; i < coreset.entries.points.size(); ++i) coreset.entries.points[i].id = i;
  coreset.L = L;
  coreset.seed = seed;
  coreset.source_size = partition_union(partition).size();
  coreset.ledger = result.ledger;
  coreset.rounds_executed = result.rounds_executed;
  return coreset;
}

}  // namespace

std::size_t coreset_sample_budget(const CoresetConfig& config, std::size_t n, std::size_t m,
                                  std::size_t dim) {
  std::size_t t = 0;
  switch (config.sizing) {
    case CoresetConfig::Sizing::Heuristic: {
      const std::size_t grid = std::max<std::size_t>(config.grid_size, 1);
      t = std::max<std::size_t>(10 * static_cast<std::size_t>(config.k),
                                n / (10 * std::max<std::size_t>(m, 1) * grid));
      break;
    }
    case CoresetConfig::Sizing::TheoremBound: {
      const double k = static_cast<double>(config.k);
      const double md = static_cast<double>(std::max<std::size_t>(m, 1));
      const double kd = k * static_cast<double>(std::max<std::size_t>(dim, 1));
      const double log_conf = std::log(1.0 / config.delta);
      const double inv_eps = 1.0 / config.eps;
      double phi = 0.0;
      if (config.ell == 1) {
        phi = inv_eps * inv_eps * (kd + log_conf) + md * k;
      } else {
        phi = std::pow(inv_eps, 4) * (kd + log_conf) + md * k * std::log(md * k / config.delta);
      }
      t = static_cast<std::size_t>(std::ceil(config.bound_constant * phi));
      break;
    }
    case CoresetConfig::Sizing::Explicit:
      t = config.explicit_budget;
      break;
  }
  // Allocation needs at least one slot per (machine, center) pair.
  return std::max<std::size_t>(t, static_cast<std::size_t>(config.k) * std::max<std::size_t>(m, 1));
}

Coreset build_coreset_distributed(const Partition& partition, double L, const Metric& base,
                                  const CoresetConfig& config, std::uint64_t seed) {
  validate(partition, config);
  if (!(L >= 0.0)) throw std::invalid_argument("coreset: L must be >= 0");
  if (config.exact) return build_exact(partition, L, config, seed);

  const int m = static_cast<int>(partition.size());
  const std::size_t n = partition_union(partition).size();
  const Metric d_L = Metric::truncated(base, L);

  Network net(m, CostingRule{config.words_per_point}, seed);
  std::vector<MachineState> machines(static_cast<std::size_t>(m));
  std::vector<std::size_t> allocation(static_cast<std::size_t>(m), 0);
  double total_cost = 0.0;
  std::size_t budget = 0;
  Coreset coreset;

  net.on_machine([&](MachineCtx& ctx) {
    const std::size_t mi = static_cast<std::size_t>(ctx.machine) - 1;
    const auto& part = partition[mi];
    if (part.empty()) return;
    MachineState& state = machines[mi];

    if (ctx.round == 1) {
      // Local constant-approximation under d_L: k-means++ seeding plus a few
      // Lloyd iterations. Ties in the truncated assignment break by the
      // untruncated distance so far points still spread across centers.
      BaselineConfig lloyd;
      lloyd.max_iterations = config.lloyd_iterations;
      LloydRun run = weighted_kmeans_minus_minus(unit_weighted(part), config.k, 0.0, config.ell,
                                                 d_L, &base, lloyd, ctx.rng);
      state.centers = std::move(run.centers);
      state.assignment = std::move(run.assignment);
      state.point_cost.resize(part.size());
      state.local_cost = 0.0;
      for (std::size_t j = 0; j < part.size(); ++j) {
        const auto c = static_cast<std::size_t>(state.assignment[j]);
        state.point_cost[j] = powed(d_L(part[j], state.centers[c]), config.ell);
        state.local_cost += state.point_cost[j];
      }
      ctx.out.send_to_coordinator(state.local_cost);
      ctx.out.send_to_coordinator(state.centers);
      return;
    }

    if (ctx.round == 3) {
      // Inbox: our allocation, the global cost, and the global budget.
      std::vector<double> scalars;
      for (const Message& msg : ctx.inbox) scalars.push_back(std::get<double>(msg.payload));
      if (scalars.size() != 3)
        throw std::logic_error("coreset: machine expected 3 allocation scalars");
      const auto draws = static_cast<std::size_t>(scalars[0]);
      const double global_cost = scalars[1];
      const double global_budget = scalars[2];

      // Importance sampling with replacement; aggregate repeated draws.
      std::vector<double> sample_weight(part.size(), 0.0);
      for (std::size_t r = 0; r < draws; ++r) {
        const std::size_t pick = sample_index(state.point_cost, ctx.rng);
        if (pick >= part.size()) break;  // zero local cost: nothing samplable
        sample_weight[pick] += global_cost / (global_budget * state.point_cost[pick]);
      }

      // Per-cluster bookkeeping for the center weights.
      std::vector<double> cluster_size(state.centers.size(), 0.0);
      std::vector<double> cluster_sample_weight(state.centers.size(), 0.0);
      for (std::size_t j = 0; j < part.size(); ++j) {
        const auto c = static_cast<std::size_t>(state.assignment[j]);
        cluster_size[c] += 1.0;
        cluster_sample_weight[c] += sample_weight[j];
      }
      // A cluster whose samples outweigh its population would force a
      // negative center weight; rescale its samples to the population and
      // zero the center instead, keeping the machine total at n_i exactly.
      std::vector<double> scale(state.centers.size(), 1.0);
      std::vector<double> center_weight(state.centers.size(), 0.0);
      for (std::size_t c = 0; c < state.centers.size(); ++c) {
        if (cluster_sample_weight[c] > cluster_size[c]) {
          scale[c] = cluster_size[c] / cluster_sample_weight[c];
          center_weight[c] = 0.0;
        } else {
          center_weight[c] = cluster_size[c] - cluster_sample_weight[c];
        }
      }

      WeightedPointSet samples;
      for (std::size_t j = 0; j < part.size(); ++j) {
        if (sample_weight[j] <= 0.0) continue;
        const auto c = static_cast<std::size_t>(state.assignment[j]);
        samples.add(part[j], sample_weight[j] * scale[c]);
      }
      if (!samples.points.empty()) ctx.out.send_to_coordinator(std::move(samples));
      for (double w : center_weight) ctx.out.send_to_coordinator(w);
      return;
    }
  });

  net.on_coordinator([&](CoordinatorCtx& ctx) {
    if (ctx.round == 2) {
      // Pair each machine's cost scalar with its center list.
      std::vector<double> costs(static_cast<std::size_t>(m), 0.0);
      std::size_t dim = 1;
      for (const Message& msg : ctx.inbox) {
        const std::size_t mi = static_cast<std::size_t>(msg.from.machine_index()) - 1;
        if (const auto* cost = std::get_if<double>(&msg.payload)) {
          costs[mi] = *cost;
        } else if (const auto* centers = std::get_if<std::vector<Point>>(&msg.payload)) {
          if (!centers->empty()) dim = (*centers)[0].dim();
        }
      }
      total_cost = std::accumulate(costs.begin(), costs.end(), 0.0);
      budget = coreset_sample_budget(config, n, static_cast<std::size_t>(m), dim);
      allocation = largest_remainder_allocation(costs, budget);
      for (int i = 1; i <= m; ++i) {
        const std::size_t mi = static_cast<std::size_t>(i) - 1;
        ctx.out.send_to_machine(i, static_cast<double>(allocation[mi]));
        ctx.out.send_to_machine(i, total_cost);
        ctx.out.send_to_machine(i, static_cast<double>(budget));
      }
      return;
    }

    if (ctx.round == 4) {
      // Per machine: optional sample set, then one weight per local center.
      WeightedPointSet pooled;
      std::vector<std::size_t> weight_cursor(static_cast<std::size_t>(m), 0);
      for (const Message& msg : ctx.inbox) {
        const std::size_t mi = static_cast<std::size_t>(msg.from.machine_index()) - 1;
        if (const auto* samples = std::get_if<WeightedPointSet>(&msg.payload)) {
          for (std::size_t i = 0; i < samples->points.size(); ++i)
            pooled.add(samples->points[i], samples->weights[i]);
        } else if (const auto* weight = std::get_if<double>(&msg.payload)) {
          const std::size_t c = weight_cursor[mi]++;
          if (*weight > 0.0) pooled.add(machines[mi].centers[c], *weight);
        }
      }
      coreset.entries = merge_coincident(pooled);
      ctx.out.halt();
      return;
    }
  });

  const auto result = net.run(4);

  for (std::size_t i = 0; i < coreset.entries.points.size(); ++i) coreset.entries.points[i].id = i;
  coreset.L = L;
  coreset.seed = seed;
  coreset.source_size = n;
  coreset.per_machine_samples = allocation;
  coreset.ledger = result.ledger;
  coreset.rounds_executed = result.rounds_executed;
  return coreset;
}

nlohmann::json Coreset::to_json() const {
  nlohmann::json entries_json = nlohmann::json::array();
  for (std::size_t i = 0; i < entries.points.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (double x : entries.points[i].coords) row.push_back(x);
    row.push_back(entries.weights[i]);
    entries_json.push_back(std::move(row));
  }
  return nlohmann::json{{"L", L},
                        {"n", source_size},
                        {"seed", seed},
                        {"entries", std::move(entries_json)},
                        {"per_machine_samples", per_machine_samples},
                        {"ledger", ledger.to_json()}};
}

void Coreset::write_csv(std::ostream& os) const {
  os << "# L=" << format_double(L) << " n=" << source_size << " seed=" << seed << "\n";
  const std::size_t dim = entries.points.empty() ? 0 : entries.points[0].dim();
  for (std::size_t d = 0; d < dim; ++d) os << "x" << d << ",";
  os << "weight\n";
  for (std::size_t i = 0; i < entries.points.size(); ++i) {
    for (double x : entries.points[i].coords) os << format_double(x) << ",";
    os << format_double(entries.weights[i]) << "\n";
  }
}

}  // namespace distclust
