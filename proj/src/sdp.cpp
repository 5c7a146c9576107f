#include "dpdp/sdp.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace dpdp {

bool State::has_unprocessed(OrderIndex o) const {
  return std::binary_search(unprocessed.begin(), unprocessed.end(), o);
}

std::vector<OrderIndex> reveal(const Instance& inst, int epoch) {
  if (epoch < 1) throw EpisodeError("reveal needs epoch >= 1");
  const Seconds lo = static_cast<Seconds>(epoch - 1) * inst.params.epoch_s;
  const Seconds hi = static_cast<Seconds>(epoch) * inst.params.epoch_s;
  std::vector<OrderIndex> out;
  for (OrderIndex i = 0; i < inst.order_count(); ++i) {
    const Seconds t = inst.order(i).release;
    if (lo < t && t <= hi) out.push_back(i);
  }
  return out;
}

State initial_state(const Instance& inst) {
  State s;
  s.epoch = 0;
  s.time = 0;
  s.statuses.resize(inst.vehicles.size());
  for (std::size_t v = 0; v < inst.vehicles.size(); ++v) {
    s.statuses[v].current = DockedState{inst.vehicles[v].start, 0};
  }
  for (OrderIndex i = 0; i < inst.order_count(); ++i) {
    if (inst.order(i).release <= 0) s.unprocessed.push_back(i);
  }
  return s;
}

namespace {

void check_vehicle_plan(const State& state, const Instance& inst, VehicleIndex v,
                        const std::vector<PlanVisit>& plan, std::vector<Violation>& out) {
  const VehicleStatus& status = state.statuses[static_cast<std::size_t>(v)];
  auto add = [&](const std::string& kind, const std::string& detail) {
    out.push_back({v, kind, detail});
  };

  if (status.in_transit()) {
    if (plan.empty()) {
      add("destination lock", "in-transit vehicle must keep its destination visit");
      return;
    }
    const PlanVisit& locked = status.plan.front();
    if (plan.front().factory != locked.factory) {
      add("destination lock", "first visit factory changed while in transit");
    }
    std::set<OrderIndex> want(locked.deliveries.begin(), locked.deliveries.end());
    std::set<OrderIndex> got(plan.front().deliveries.begin(), plan.front().deliveries.end());
    if (want != got) add("destination lock", "deliveries at the destination visit changed");
  }

  // Order consistency: deliveries == carried + pickups, each exactly once.
  std::unordered_set<OrderIndex> owned(status.carried.begin(), status.carried.end());
  std::unordered_map<OrderIndex, int> pickup_visit;
  for (std::size_t j = 0; j < plan.size(); ++j) {
    if (plan[j].factory < 0 || plan[j].factory >= inst.factory_count()) {
      add("factory", "visit " + std::to_string(j) + " references an unknown factory");
      return;
    }
    for (OrderIndex o : plan[j].pickups) {
      if (o < 0 || o >= inst.order_count()) {
        add("order", "unknown order in pickups");
        return;
      }
      if (!owned.insert(o).second) {
        add("order consistency", "order " + inst.order(o).id + " picked up twice or carried");
      }
      if (!pickup_visit.emplace(o, static_cast<int>(j)).second) continue;
      if (inst.order(o).pickup != plan[j].factory) {
        add("factory", "order " + inst.order(o).id + " picked up at the wrong factory");
      }
      if (!state.has_unprocessed(o)) {
        add("order consistency", "order " + inst.order(o).id + " is not unprocessed");
      }
    }
  }
  std::unordered_set<OrderIndex> delivered;
  for (std::size_t j = 0; j < plan.size(); ++j) {
    for (OrderIndex o : plan[j].deliveries) {
      if (o < 0 || o >= inst.order_count()) {
        add("order", "unknown order in deliveries");
        return;
      }
      if (!delivered.insert(o).second) {
        add("order consistency", "order " + inst.order(o).id + " delivered twice");
      }
      if (inst.order(o).delivery != plan[j].factory) {
        add("factory", "order " + inst.order(o).id + " delivered at the wrong factory");
      }
      if (!owned.count(o)) {
        add("order consistency", "order " + inst.order(o).id + " delivered but never on board");
      }
      auto it = pickup_visit.find(o);
      if (it != pickup_visit.end() && it->second >= static_cast<int>(j)) {
        add("order consistency", "order " + inst.order(o).id + " delivered at or before its pickup");
      }
    }
  }
  for (OrderIndex o : owned) {
    if (!delivered.count(o)) {
      add("order consistency", "order " + inst.order(o).id + " on board but never delivered");
    }
  }

  // LIFO over the concatenation carried, D1, P1, D2, P2, ...
  std::vector<OrderIndex> stack(status.carried);
  bool lifo_fail = false;
  for (const PlanVisit& visit : plan) {
    for (OrderIndex o : visit.deliveries) {
      if (stack.empty() || stack.back() != o) {
        lifo_fail = true;
        break;
      }
      stack.pop_back();
    }
    if (lifo_fail) break;
    for (OrderIndex o : visit.pickups) stack.push_back(o);
  }
  if (lifo_fail) add("lifo", "unload sequence is not last-in-first-out");

  // Capacity after each visit.
  Quarters load = 0;
  for (OrderIndex o : status.carried) load += inst.order(o).quantity;
  if (load > inst.params.capacity) add("capacity", "carried load exceeds capacity");
  for (const PlanVisit& visit : plan) {
    for (OrderIndex o : visit.deliveries) load -= inst.order(o).quantity;
    for (OrderIndex o : visit.pickups) load += inst.order(o).quantity;
    if (load > inst.params.capacity) {
      add("capacity", "load exceeds capacity after a visit to " +
                          inst.factory(visit.factory).id);
      break;
    }
  }
}

}  // namespace

std::vector<Violation> validate_action(const State& state, const Action& action,
                                       const Instance& inst) {
  std::vector<Violation> out;
  if (action.plans.size() != state.statuses.size()) {
    out.push_back({-1, "shape", "action must carry one plan per vehicle"});
    return out;
  }
  for (std::size_t v = 0; v < action.plans.size(); ++v) {
    check_vehicle_plan(state, inst, static_cast<VehicleIndex>(v), action.plans[v], out);
  }
  // Mutual compatibility: no order served by two vehicles.
  std::unordered_map<OrderIndex, VehicleIndex> owner;
  for (std::size_t v = 0; v < action.plans.size(); ++v) {
    const auto& status = state.statuses[v];
    auto claim = [&](OrderIndex o) {
      auto [it, inserted] = owner.emplace(o, static_cast<VehicleIndex>(v));
      if (!inserted && it->second != static_cast<VehicleIndex>(v)) {
        out.push_back({static_cast<VehicleIndex>(v), "compatibility",
                       "order " + inst.order(o).id + " is served by two vehicles"});
      }
    };
    for (OrderIndex o : status.carried) claim(o);
    for (const auto& visit : action.plans[v]) {
      for (OrderIndex o : visit.pickups) claim(o);
    }
  }
  return out;
}

TransitionResult transition(const State& state, const Action& action, const Instance& inst) {
  {
    auto violations = validate_action(state, action, inst);
    if (!violations.empty()) {
      throw EpisodeError("transition on invalid action: " + violations.front().kind + ": " +
                         violations.front().detail);
    }
  }

  const Seconds tau_next = static_cast<Seconds>(state.epoch + 1) * inst.params.epoch_s;

  std::vector<SimVehicle> sims(state.statuses.size());
  for (std::size_t v = 0; v < state.statuses.size(); ++v) {
    const VehicleStatus& status = state.statuses[v];
    sims[v].vehicle = static_cast<VehicleIndex>(v);
    sims[v].docked = status.current;
    if (status.in_transit()) sims[v].arrival = status.plan.front().arrival;
    sims[v].visits = action.plans[v];
  }
  const Timeline timeline = simulate(inst, sims, state.time);

  TransitionResult result;
  result.next.epoch = state.epoch + 1;
  result.next.time = tau_next;
  result.next.statuses.resize(state.statuses.size());

  std::vector<OrderIndex> picked_up;

  for (std::size_t v = 0; v < state.statuses.size(); ++v) {
    const VehicleStatus& status = state.statuses[v];
    const auto records = timeline.vehicle_records(static_cast<VehicleIndex>(v));
    std::vector<PlanVisit> timed = action.plans[v];
    for (const VisitRecord* r : records) {
      timed[static_cast<std::size_t>(r->visit)].arrival = r->arrival;
      timed[static_cast<std::size_t>(r->visit)].departure = r->departure;
    }

    VehicleStatus& next = result.next.statuses[v];
    next.carried = status.carried;

    // Visits whose arrival fell inside the epoch become history.
    int done = 0;
    while (done < static_cast<int>(records.size()) && records[done]->arrival <= tau_next) {
      const PlanVisit& visit = timed[static_cast<std::size_t>(done)];
      for (OrderIndex o : visit.deliveries) {
        next.carried.erase(std::find(next.carried.begin(), next.carried.end(), o));
      }
      for (OrderIndex o : visit.pickups) {
        next.carried.push_back(o);
        picked_up.push_back(o);
      }
      result.completed.push_back({static_cast<VehicleIndex>(v), visit.factory, visit.arrival,
                                  records[done]->waiting, visit.departure, visit.deliveries,
                                  visit.pickups});
      ++done;
    }

    std::vector<PlanVisit> remaining(timed.begin() + done, timed.end());
    if (done == 0) {
      if (status.current) {
        if (status.current->depart > tau_next) {
          next.current = status.current;          // case 1: still docked
          next.plan = std::move(remaining);
        } else if (remaining.empty()) {
          next.current = DockedState{status.current->factory, tau_next};  // case 2a: parked
        } else {
          next.current.reset();                   // case 2b: departed
          next.plan = std::move(remaining);
        }
      } else {
        next.current.reset();                     // case 3: still in transit
        next.plan = std::move(remaining);
      }
    } else {
      const VisitRecord* last = records[static_cast<std::size_t>(done - 1)];
      if (last->departure > tau_next) {
        next.current = DockedState{last->factory, last->departure};  // case 4: arrived
        next.plan = std::move(remaining);
      } else if (!remaining.empty()) {
        next.current.reset();  // served and moved on within the epoch
        next.plan = std::move(remaining);
      } else {
        next.current = DockedState{last->factory, tau_next};  // finished everything, parked
      }
    }
  }

  // Unprocessed orders: drop everything picked up, add the new reveal.
  std::sort(picked_up.begin(), picked_up.end());
  std::vector<OrderIndex> unprocessed;
  for (OrderIndex o : state.unprocessed) {
    if (!std::binary_search(picked_up.begin(), picked_up.end(), o)) unprocessed.push_back(o);
  }
  for (OrderIndex o : reveal(inst, result.next.epoch)) unprocessed.push_back(o);
  std::sort(unprocessed.begin(), unprocessed.end());
  result.next.unprocessed = std::move(unprocessed);
  return result;
}

CostBreakdown realized_cost(const Instance& inst, const std::vector<RealizedVisit>& realized) {
  CostBreakdown cost;
  std::vector<FactoryIndex> position(inst.vehicles.size());
  for (std::size_t v = 0; v < inst.vehicles.size(); ++v) position[v] = inst.vehicles[v].start;

  std::map<std::string, Seconds> parent_tardiness;
  for (const RealizedVisit& visit : realized) {
    cost.distance += inst.travel.dist(position[static_cast<std::size_t>(visit.vehicle)], visit.factory);
    position[static_cast<std::size_t>(visit.vehicle)] = visit.factory;
    cost.waiting_s += visit.waiting;
    for (OrderIndex oi : visit.deliveries) {
      const Order& o = inst.order(oi);
      const Seconds late = std::max<Seconds>(0, visit.arrival - o.due);
      const std::string& key = o.parent ? *o.parent : o.id;
      auto [it, inserted] = parent_tardiness.emplace(key, late);
      if (!inserted) it->second = std::max(it->second, late);
    }
  }
  for (const auto& [key, late] : parent_tardiness) cost.tardiness_s += late;
  cost.weighted_total = inst.lambda1() * cost.distance +
                        inst.params.lambda2 * static_cast<double>(cost.tardiness_s);
  return cost;
}

std::vector<Violation> verify_realized(const Instance& inst,
                                       const std::vector<RealizedVisit>& realized) {
  std::vector<Violation> out;
  std::vector<std::vector<const RealizedVisit*>> per_vehicle(inst.vehicles.size());
  for (const RealizedVisit& v : realized) {
    per_vehicle[static_cast<std::size_t>(v.vehicle)].push_back(&v);
  }

  std::unordered_map<OrderIndex, VehicleIndex> picked, delivered;
  for (std::size_t v = 0; v < per_vehicle.size(); ++v) {
    const auto& visits = per_vehicle[v];
    auto add = [&](const std::string& kind, const std::string& detail) {
      out.push_back({static_cast<VehicleIndex>(v), kind, detail});
    };

    std::vector<OrderIndex> stack;
    Quarters load = 0;
    std::unordered_map<OrderIndex, std::size_t> pickup_pos;
    FactoryIndex prev_factory = inst.vehicles[v].start;
    Seconds prev_departure = -1;

    for (std::size_t j = 0; j < visits.size(); ++j) {
      const RealizedVisit& visit = *visits[j];
      if (j == 0) {
        if (visit.arrival < inst.travel.travel(prev_factory, visit.factory)) {
          add("travel", "first arrival earlier than the travel time allows");
        }
      } else if (visit.arrival - prev_departure != inst.travel.travel(prev_factory, visit.factory)) {
        add("travel", "arrival does not match departure + travel at visit " + std::to_string(j));
      }
      const Seconds service = service_seconds(inst, visit.deliveries, visit.pickups);
      if (visit.departure != visit.arrival + visit.waiting + service) {
        add("service", "departure != arrival + waiting + service at visit " + std::to_string(j));
      }
      for (OrderIndex o : visit.deliveries) {
        if (stack.empty() || stack.back() != o) {
          add("lifo", "order " + inst.order(o).id + " unloaded out of LIFO order");
          stack.clear();
          break;
        }
        stack.pop_back();
        load -= inst.order(o).quantity;
        if (inst.order(o).delivery != visit.factory) {
          add("factory", "order " + inst.order(o).id + " delivered at the wrong factory");
        }
        auto [it, inserted] = delivered.emplace(o, static_cast<VehicleIndex>(v));
        if (!inserted) add("partition", "order " + inst.order(o).id + " delivered twice");
        auto pit = pickup_pos.find(o);
        if (pit == pickup_pos.end() || pit->second >= j) {
          add("precedence", "order " + inst.order(o).id + " delivered before pickup");
        }
      }
      for (OrderIndex o : visit.pickups) {
        stack.push_back(o);
        load += inst.order(o).quantity;
        pickup_pos[o] = j;
        if (inst.order(o).pickup != visit.factory) {
          add("factory", "order " + inst.order(o).id + " picked up at the wrong factory");
        }
        if (visit.arrival < inst.order(o).release) {
          add("release", "order " + inst.order(o).id + " picked up before release");
        }
        auto [it, inserted] = picked.emplace(o, static_cast<VehicleIndex>(v));
        if (!inserted) add("partition", "order " + inst.order(o).id + " picked up twice");
      }
      if (load > inst.params.capacity) {
        add("capacity", "load exceeds capacity at visit " + std::to_string(j));
      }
      prev_factory = visit.factory;
      prev_departure = visit.departure;
    }
    if (!stack.empty()) add("partition", "vehicle ends with undelivered orders on board");
  }

  for (OrderIndex i = 0; i < inst.order_count(); ++i) {
    auto pit = picked.find(i);
    auto dit = delivered.find(i);
    if (pit == picked.end() || dit == delivered.end()) {
      out.push_back({-1, "partition", "order " + inst.order(i).id + " was not served"});
    } else if (pit->second != dit->second) {
      out.push_back({-1, "partition",
                     "order " + inst.order(i).id + " picked and delivered by different vehicles"});
    }
  }
  return out;
}

EpisodeResult run_episode(const Instance& inst, const DispatcherFn& dispatcher,
                          const EpisodeConfig& config) {
  EpisodeResult result;
  State state = initial_state(inst);
  const std::size_t total = static_cast<std::size_t>(inst.order_count());
  std::size_t delivered = 0;

  while (delivered < total) {
    if (state.epoch >= config.max_epochs) {
      throw EpisodeError("episode exceeded the epoch cap without delivering all orders");
    }

    Action action = dispatcher(state, inst);
    auto violations = validate_action(state, action, inst);

    EpochLogRecord record;
    record.epoch = state.epoch;
    record.tau = state.time;
    record.revealed =
        state.epoch == 0 ? state.unprocessed : reveal(inst, state.epoch);
    record.action = action;
    for (const RealizedVisit& v : result.realized) {
      if (v.arrival <= state.time && state.time < v.arrival + v.waiting) ++record.waiting_vehicles;
    }
    double committed_total = 0;
    for (const auto& status : state.statuses) {
      committed_total += static_cast<double>(committed_seconds(status, state.time));
    }
    record.mean_committed_s = committed_total / static_cast<double>(state.statuses.size());
    result.log.push_back(std::move(record));

    if (!violations.empty()) {
      result.violations = std::move(violations);
      result.epochs = state.epoch;
      return result;
    }

    TransitionResult tr = transition(state, action, inst);
    for (auto& visit : tr.completed) {
      delivered += visit.deliveries.size();
      result.realized.push_back(std::move(visit));
    }
    state = std::move(tr.next);
    result.epochs = state.epoch;
  }

  result.all_delivered = delivered == total;
  auto realized_violations = verify_realized(inst, result.realized);
  if (!realized_violations.empty()) {
    result.violations = std::move(realized_violations);
    result.all_delivered = false;
  }
  result.breakdown = realized_cost(inst, result.realized);
  result.score = result.breakdown.weighted_total;
  return result;
}

}  // namespace dpdp
