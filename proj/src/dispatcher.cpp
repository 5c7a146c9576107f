#include "dpdp/dispatcher.hpp"

#include <algorithm>
#include <chrono>
#include <unordered_set>

namespace dpdp {

namespace {

using Clock = std::chrono::steady_clock;

// Relative tolerance for "strictly lower cost"; ties are non-improving so
// rounding noise cannot make the descent cycle.
bool improves(double candidate, double current) {
  return candidate < current - 1e-9 * std::max(1.0, std::abs(current));
}

std::vector<SimVehicle> to_sim_inputs(const Instance& inst, const State& state,
                                      const std::vector<Route>& routes) {
  std::vector<SimVehicle> sims(routes.size());
  for (std::size_t v = 0; v < routes.size(); ++v) {
    const VehicleStatus& status = state.statuses[v];
    sims[v].vehicle = static_cast<VehicleIndex>(v);
    sims[v].docked = status.current;
    if (status.in_transit()) sims[v].arrival = status.plan.front().arrival;
    sims[v].visits = to_visits(routes[v], inst);
  }
  return sims;
}

}  // namespace

CfaConfig default_config(const Instance& inst) {
  CfaConfig config;
  config.lambdas = {inst.lambda1(), inst.params.lambda2, inst.params.lambda3,
                    inst.params.lambda4};
  config.urgency_s = inst.params.urgency_s;
  return config;
}

CostBreakdown evaluate_solution(const Instance& inst, const State& state,
                                const std::vector<Route>& routes, const Multipliers& lambdas) {
  const auto sims = to_sim_inputs(inst, state, routes);
  const Timeline timeline = simulate(inst, sims, state.time);
  return cost_terms(inst, sims, timeline, lambdas, CostMode::Perturbed,
                    state.time + inst.params.epoch_s);
}

WorkingSolution reconstruct(const Instance& inst, const State& state,
                            const Multipliers& lambdas) {
  WorkingSolution solution;
  solution.routes.reserve(state.statuses.size());
  for (std::size_t v = 0; v < state.statuses.size(); ++v) {
    const VehicleStatus& status = state.statuses[v];
    Route route(static_cast<VehicleIndex>(v));
    route.set_carried(status.carried);
    std::vector<RouteNode> nodes;
    for (const PlanVisit& visit : status.plan) {
      for (OrderIndex o : visit.deliveries) nodes.push_back({NodeKind::Delivery, o});
      for (OrderIndex o : visit.pickups) nodes.push_back({NodeKind::Pickup, o});
    }
    route.set_nodes(std::move(nodes));
    if (status.in_transit()) {
      route.set_lock(DestinationLock{status.plan.front().factory, status.plan.front().deliveries});
    }
    solution.routes.push_back(std::move(route));
  }
  solution.cost = evaluate_solution(inst, state, solution.routes, lambdas);
  return solution;
}

UrgencyPartition classify_and_order(const Instance& inst, const State& state,
                                    const std::vector<Route>& routes,
                                    Seconds urgency_threshold) {
  std::unordered_set<OrderIndex> assigned;
  for (const Route& route : routes) {
    for (OrderIndex o : route.carried()) assigned.insert(o);
    for (const RouteNode& n : route.nodes()) assigned.insert(n.order);
  }

  struct Entry {
    OrderIndex order;
    FactoryIndex pickup;
    Seconds delay;
  };
  std::vector<Entry> urgent, rest;
  for (OrderIndex o : state.unprocessed) {
    if (assigned.count(o)) continue;
    const Seconds ed = estimated_delay(inst, o, state.time);
    Entry e{o, inst.order(o).pickup, ed};
    (ed <= urgency_threshold ? urgent : rest).push_back(e);
  }
  auto order_entries = [](std::vector<Entry>& entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
      if (a.pickup != b.pickup) return a.pickup < b.pickup;
      if (a.delay != b.delay) return a.delay > b.delay;  // larger delay first
      return a.order < b.order;
    });
  };
  order_entries(urgent);
  order_entries(rest);

  UrgencyPartition partition;
  for (const Entry& e : urgent) partition.urgent.push_back(e.order);
  for (const Entry& e : rest) partition.non_urgent.push_back(e.order);
  return partition;
}

void cheapest_insertion(const Instance& inst, const State& state, WorkingSolution& solution,
                        OrderIndex order, const Multipliers& lambdas) {
  std::optional<WorkingSolution> best;
  for (std::size_t v = 0; v < solution.routes.size(); ++v) {
    const Route& route = solution.routes[v];
    const int n = route.size();
    for (int pg = 0; pg <= n; ++pg) {
      for (int dg = pg + 1; dg <= n + 1; ++dg) {
        auto candidate = insert_order(route, inst, order, pg, dg, inst.params.capacity);
        if (!candidate) continue;
        std::vector<Route> routes = solution.routes;
        routes[v] = std::move(*candidate);
        CostBreakdown cost = evaluate_solution(inst, state, routes, lambdas);
        if (!best || cost.weighted_total < best->cost.weighted_total) {
          best = WorkingSolution{std::move(routes), cost};
        }
      }
    }
  }
  if (!best) {
    throw EpisodeError("no feasible insertion for order " + inst.order(order).id);
  }
  solution = std::move(*best);
}

namespace {

std::vector<RouteNode> erase_span(const std::vector<RouteNode>& nodes, int start, int end) {
  std::vector<RouteNode> out(nodes.begin(), nodes.begin() + start);
  out.insert(out.end(), nodes.begin() + end + 1, nodes.end());
  return out;
}

std::vector<RouteNode> insert_span(const std::vector<RouteNode>& nodes,
                                   const std::vector<RouteNode>& span, int gap) {
  std::vector<RouteNode> out(nodes.begin(), nodes.begin() + gap);
  out.insert(out.end(), span.begin(), span.end());
  out.insert(out.end(), nodes.begin() + gap, nodes.end());
  return out;
}

// Shared scaffolding for the three operators: applies a candidate (one or two
// modified routes), drops infeasible ones, and keeps the least-cost result.
class BestTracker {
public:
  BestTracker(const Instance& inst, const State& state, const WorkingSolution& base,
              const Multipliers& lambdas)
      : inst_(inst), state_(state), base_(base), lambdas_(lambdas) {}

  void offer(std::size_t v1, Route r1, std::optional<std::size_t> v2 = std::nullopt,
             std::optional<Route> r2 = std::nullopt) {
    if (!route_feasible(r1, inst_, inst_.params.capacity)) return;
    if (r2 && !route_feasible(*r2, inst_, inst_.params.capacity)) return;
    if (r1 == base_.routes[v1] && (!r2 || *r2 == base_.routes[*v2])) return;  // no-op
    std::vector<Route> routes = base_.routes;
    routes[v1] = std::move(r1);
    if (r2) routes[*v2] = std::move(*r2);
    CostBreakdown cost = evaluate_solution(inst_, state_, routes, lambdas_);
    if (!best_ || cost.weighted_total < best_->cost.weighted_total) {
      best_ = WorkingSolution{std::move(routes), cost};
    }
  }

  std::optional<WorkingSolution> take() { return std::move(best_); }

private:
  const Instance& inst_;
  const State& state_;
  const WorkingSolution& base_;
  const Multipliers& lambdas_;
  std::optional<WorkingSolution> best_;
};

void scan_relocate_block(const WorkingSolution& base, BestTracker& tracker) {
  for (std::size_t v1 = 0; v1 < base.routes.size(); ++v1) {
    const Route& src = base.routes[v1];
    for (const Block& block : enumerate_blocks(src)) {
      std::vector<RouteNode> span(src.nodes().begin() + block.start,
                                  src.nodes().begin() + block.end + 1);
      Route removed = src;
      removed.set_nodes(erase_span(src.nodes(), block.start, block.end));
      for (std::size_t v2 = 0; v2 < base.routes.size(); ++v2) {
        const Route& dst = v2 == v1 ? removed : base.routes[v2];
        for (int gap = 0; gap <= dst.size(); ++gap) {
          Route target = dst;
          target.set_nodes(insert_span(dst.nodes(), span, gap));
          if (v2 == v1) {
            tracker.offer(v1, std::move(target));
          } else {
            tracker.offer(v1, removed, v2, std::move(target));
          }
        }
      }
    }
  }
}

void scan_block_exchange(const WorkingSolution& base, BestTracker& tracker) {
  struct Site {
    std::size_t vehicle;
    Block block;
  };
  std::vector<Site> sites;
  for (std::size_t v = 0; v < base.routes.size(); ++v) {
    for (const Block& b : enumerate_blocks(base.routes[v])) sites.push_back({v, b});
  }
  for (std::size_t i = 0; i < sites.size(); ++i) {
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      const Site& a = sites[i];
      const Site& b = sites[j];
      const auto& na = base.routes[a.vehicle].nodes();
      const auto& nb = base.routes[b.vehicle].nodes();
      std::vector<RouteNode> span_a(na.begin() + a.block.start, na.begin() + a.block.end + 1);
      std::vector<RouteNode> span_b(nb.begin() + b.block.start, nb.begin() + b.block.end + 1);
      if (a.vehicle == b.vehicle) {
        // Disjoint spans only; nested blocks cannot be exchanged.
        const Block& first = a.block.start < b.block.start ? a.block : b.block;
        const Block& second = a.block.start < b.block.start ? b.block : a.block;
        if (first.end >= second.start) continue;
        const auto& sf = a.block.start < b.block.start ? span_a : span_b;
        const auto& ss = a.block.start < b.block.start ? span_b : span_a;
        std::vector<RouteNode> nodes(na.begin(), na.begin() + first.start);
        nodes.insert(nodes.end(), ss.begin(), ss.end());
        nodes.insert(nodes.end(), na.begin() + first.end + 1, na.begin() + second.start);
        nodes.insert(nodes.end(), sf.begin(), sf.end());
        nodes.insert(nodes.end(), na.begin() + second.end + 1, na.end());
        Route route = base.routes[a.vehicle];
        route.set_nodes(std::move(nodes));
        tracker.offer(a.vehicle, std::move(route));
      } else {
        Route ra = base.routes[a.vehicle];
        Route rb = base.routes[b.vehicle];
        ra.set_nodes(
            insert_span(erase_span(na, a.block.start, a.block.end), span_b, a.block.start));
        rb.set_nodes(
            insert_span(erase_span(nb, b.block.start, b.block.end), span_a, b.block.start));
        tracker.offer(a.vehicle, std::move(ra), b.vehicle, std::move(rb));
      }
    }
  }
}

void scan_relocate_bridge(const Instance& inst, const WorkingSolution& base,
                          BestTracker& tracker) {
  for (std::size_t v1 = 0; v1 < base.routes.size(); ++v1) {
    const Route& src = base.routes[v1];
    for (const Bridge& bridge : enumerate_maximal_bridges(src, inst)) {
      const auto& nodes = src.nodes();
      // The relocated segment keeps the pickup run and puts the delivery run
      // immediately after it.
      std::vector<RouteNode> segment(nodes.begin() + bridge.pickup_start,
                                     nodes.begin() + bridge.pickup_start + bridge.size);
      segment.insert(segment.end(), nodes.begin() + bridge.delivery_start,
                     nodes.begin() + bridge.delivery_start + bridge.size);
      Route removed = src;
      removed.set_nodes(erase_span(erase_span(nodes, bridge.delivery_start,
                                              bridge.delivery_start + bridge.size - 1),
                                   bridge.pickup_start, bridge.pickup_start + bridge.size - 1));
      for (std::size_t v2 = 0; v2 < base.routes.size(); ++v2) {
        const Route& dst = v2 == v1 ? removed : base.routes[v2];
        for (int gap = 0; gap <= dst.size(); ++gap) {
          Route target = dst;
          target.set_nodes(insert_span(dst.nodes(), segment, gap));
          if (v2 == v1) {
            tracker.offer(v1, std::move(target));
          } else {
            tracker.offer(v1, removed, v2, std::move(target));
          }
        }
      }
    }
  }
}

}  // namespace

std::optional<WorkingSolution> neighborhood_best(const Instance& inst, const State& state,
                                                 const WorkingSolution& solution, Operator op,
                                                 const Multipliers& lambdas) {
  BestTracker tracker(inst, state, solution, lambdas);
  switch (op) {
    case Operator::RelocateBridge:
      scan_relocate_bridge(inst, solution, tracker);
      break;
    case Operator::BlockExchange:
      scan_block_exchange(solution, tracker);
      break;
    case Operator::RelocateBlock:
      scan_relocate_block(solution, tracker);
      break;
  }
  return tracker.take();
}

WorkingSolution vns(const Instance& inst, const State& state, WorkingSolution solution,
                    const CfaConfig& config, VnsStats* stats) {
  const auto start = Clock::now();
  auto out_of_budget = [&](std::int64_t iterations) {
    if (config.vns_budget_iterations > 0 && iterations >= config.vns_budget_iterations) {
      return true;
    }
    if (config.vns_budget_seconds > 0.0) {
      const std::chrono::duration<double> elapsed = Clock::now() - start;
      if (elapsed.count() >= config.vns_budget_seconds) return true;
    }
    return false;
  };

  std::mt19937_64 rng(config.seed);
  std::int64_t iterations = 0;
  static constexpr Operator kOrder[] = {Operator::RelocateBridge, Operator::BlockExchange,
                                        Operator::RelocateBlock};
  while (!out_of_budget(iterations)) {
    ++iterations;
    bool accepted = false;
    for (Operator op : kOrder) {
      auto neighbor = neighborhood_best(inst, state, solution, op, config.lambdas);
      if (neighbor && improves(neighbor->cost.weighted_total, solution.cost.weighted_total)) {
        solution = std::move(*neighbor);
        if (stats) stats->accepted_costs.push_back(solution.cost.weighted_total);
        accepted = true;
        break;  // restart from the first operator
      }
    }
    if (!accepted) {
      if (config.disturbance_enabled && config.disturbance_hook &&
          config.disturbance_hook(solution.routes, rng)) {
        solution.cost = evaluate_solution(inst, state, solution.routes, config.lambdas);
        continue;
      }
      break;  // local optimum
    }
  }
  if (stats) stats->iterations = iterations;
  return solution;
}

CfaDispatcher::CfaDispatcher(const Instance& inst, CfaConfig config)
    : inst_(inst), config_(std::move(config)), rng_(config_.seed) {}

Action CfaDispatcher::decide(const State& state) {
  const auto start = Clock::now();
  auto out_of_time = [&]() {
    if (config_.vns_budget_seconds <= 0.0) return false;
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    return elapsed.count() >= config_.vns_budget_seconds;
  };

  WorkingSolution solution = reconstruct(inst_, state, config_.lambdas);
  const UrgencyPartition partition =
      classify_and_order(inst_, state, solution.routes, config_.urgency_s);
  for (const auto* group : {&partition.urgent, &partition.non_urgent}) {
    for (OrderIndex o : *group) {
      if (out_of_time()) break;  // keep the best complete solution so far
      cheapest_insertion(inst_, state, solution, o, config_.lambdas);
    }
  }

  CfaConfig vns_config = config_;
  if (config_.vns_budget_seconds > 0.0) {
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    vns_config.vns_budget_seconds =
        std::max(1e-3, config_.vns_budget_seconds - elapsed.count());
  }
  solution = vns(inst_, state, std::move(solution), vns_config);

  // Emit the plans with the timing of the final joint simulation.
  auto sims = to_sim_inputs(inst_, state, solution.routes);
  const Timeline timeline = simulate(inst_, sims, state.time);
  Action action;
  action.plans.resize(sims.size());
  for (std::size_t v = 0; v < sims.size(); ++v) {
    action.plans[v] = std::move(sims[v].visits);
    for (const VisitRecord* r : timeline.vehicle_records(static_cast<VehicleIndex>(v))) {
      action.plans[v][static_cast<std::size_t>(r->visit)].arrival = r->arrival;
      action.plans[v][static_cast<std::size_t>(r->visit)].departure = r->departure;
    }
  }
  return action;
}

DispatcherFn CfaDispatcher::callback() {
  return [this](const State& state, const Instance&) { return decide(state); };
}

}  // namespace dpdp
