#include "dpdp/evaluator.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <unordered_map>

#include "dpdp/docking.hpp"

namespace dpdp {

std::vector<const VisitRecord*> Timeline::vehicle_records(VehicleIndex v) const {
  std::vector<const VisitRecord*> out;
  for (const auto& r : records) {
    if (r.vehicle == v) out.push_back(&r);
  }
  std::sort(out.begin(), out.end(),
            [](const VisitRecord* a, const VisitRecord* b) { return a->visit < b->visit; });
  return out;
}

namespace {

enum class EventKind : std::uint8_t { Departure = 0, Arrival = 1 };

struct Event {
  Seconds time;
  EventKind kind;
  VehicleIndex vehicle;

  // min-heap: earliest time first, departures before arrivals, then vehicle.
  bool operator>(const Event& other) const {
    if (time != other.time) return time > other.time;
    if (kind != other.kind) return kind > other.kind;
    return vehicle > other.vehicle;
  }
};

struct VehicleProgress {
  const SimVehicle* input = nullptr;
  int next_visit = 0;          // visit the next arrival refers to
  FactoryIndex at = kNoFactory;  // factory currently occupied (docked/serving)
  bool holds_port_entry = false;
};

}  // namespace

Timeline simulate(const Instance& inst, std::span<const SimVehicle> vehicles, Seconds start) {
  std::vector<ReservationList> lists;
  lists.reserve(inst.factories.size());
  for (std::size_t f = 0; f < inst.factories.size(); ++f) {
    lists.emplace_back(static_cast<FactoryIndex>(f), inst.factory(static_cast<FactoryIndex>(f)).ports);
  }

  std::unordered_map<VehicleIndex, VehicleProgress> progress;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> queue;

  auto check_visit = [&](const PlanVisit& visit) {
    if (visit.factory < 0 || visit.factory >= inst.factory_count()) {
      throw SimulationError("route references unknown factory");
    }
    for (OrderIndex o : visit.deliveries) {
      if (o < 0 || o >= inst.order_count()) throw SimulationError("route references unknown order");
    }
    for (OrderIndex o : visit.pickups) {
      if (o < 0 || o >= inst.order_count()) throw SimulationError("route references unknown order");
    }
  };

  // Step 1: docked vehicles that are mid-service keep their reservation
  // entries and get departure events; in-transit vehicles get arrival events.
  for (const SimVehicle& sv : vehicles) {
    for (const auto& v : sv.visits) check_visit(v);
    VehicleProgress p;
    p.input = &sv;
    if (sv.docked) {
      if (sv.docked->factory < 0 || sv.docked->factory >= inst.factory_count()) {
        throw SimulationError("vehicle docked at unknown factory");
      }
      p.at = sv.docked->factory;
      const Seconds depart = std::max(sv.docked->depart, start);
      if (sv.docked->depart > start) {
        lists[static_cast<std::size_t>(p.at)].restore(sv.vehicle, sv.docked->depart);
        p.holds_port_entry = true;
      }
      if (!sv.visits.empty()) {
        queue.push({depart, EventKind::Departure, sv.vehicle});
      } else if (p.holds_port_entry) {
        queue.push({sv.docked->depart, EventKind::Departure, sv.vehicle});
      }
    } else {
      if (sv.visits.empty()) throw SimulationError("in-transit vehicle without a destination");
      if (sv.arrival < start) throw SimulationError("in-transit arrival before simulation start");
      queue.push({sv.arrival, EventKind::Arrival, sv.vehicle});
    }
    progress.emplace(sv.vehicle, p);
  }

  Timeline timeline;

  // Step 2: drain events.
  while (!queue.empty()) {
    const Event ev = queue.top();
    queue.pop();
    VehicleProgress& p = progress.at(ev.vehicle);
    const SimVehicle& sv = *p.input;

    if (ev.kind == EventKind::Departure) {
      if (p.holds_port_entry) {
        lists[static_cast<std::size_t>(p.at)].release(ev.vehicle);
        p.holds_port_entry = false;
      }
      if (p.next_visit < static_cast<int>(sv.visits.size())) {
        const FactoryIndex next = sv.visits[static_cast<std::size_t>(p.next_visit)].factory;
        queue.push({ev.time + inst.travel.travel(p.at, next), EventKind::Arrival, ev.vehicle});
        p.at = kNoFactory;
      }
    } else {
      const PlanVisit& visit = sv.visits[static_cast<std::size_t>(p.next_visit)];
      const Seconds service = service_seconds(inst, visit.deliveries, visit.pickups);
      const auto slot =
          lists[static_cast<std::size_t>(visit.factory)].enqueue(ev.vehicle, ev.time, service);
      p.at = visit.factory;
      p.holds_port_entry = true;
      timeline.records.push_back(
          {ev.vehicle, p.next_visit, visit.factory, ev.time, slot.waiting, slot.departure});
      ++p.next_visit;
      queue.push({slot.departure, EventKind::Departure, ev.vehicle});
    }
  }
  return timeline;
}

CostBreakdown cost_terms(const Instance& inst, std::span<const SimVehicle> vehicles,
                         const Timeline& timeline, const Multipliers& lambdas, CostMode mode,
                         std::optional<Seconds> epoch_end) {
  if (mode == CostMode::Perturbed && !epoch_end) {
    throw SimulationError("perturbed cost needs the end of the epoch");
  }

  CostBreakdown cost;

  for (const SimVehicle& sv : vehicles) {
    if (sv.visits.empty()) continue;
    if (sv.docked) {
      cost.distance += inst.travel.dist(sv.docked->factory, sv.visits.front().factory);
    }
    for (std::size_t j = 1; j < sv.visits.size(); ++j) {
      cost.distance += inst.travel.dist(sv.visits[j - 1].factory, sv.visits[j].factory);
    }
  }

  // Tardiness per delivery; split fragments resolve against their parent in
  // the true objective (max over fragments, charged once).
  std::map<std::string, Seconds> parent_tardiness;
  std::unordered_map<VehicleIndex, const SimVehicle*> by_vehicle;
  for (const SimVehicle& sv : vehicles) by_vehicle.emplace(sv.vehicle, &sv);
  for (const VisitRecord& rec : timeline.records) {
    cost.waiting_s += rec.waiting;
    const SimVehicle& sv = *by_vehicle.at(rec.vehicle);
    for (OrderIndex oi : sv.visits[static_cast<std::size_t>(rec.visit)].deliveries) {
      const Order& o = inst.order(oi);
      const Seconds late = std::max<Seconds>(0, rec.arrival - o.due);
      if (mode == CostMode::TrueObjective) {
        const std::string& key = o.parent ? *o.parent : o.id;
        auto [it, inserted] = parent_tardiness.emplace(key, late);
        if (!inserted) it->second = std::max(it->second, late);
      } else {
        cost.tardiness_s += late;
      }
    }
  }
  if (mode == CostMode::TrueObjective) {
    for (const auto& [key, late] : parent_tardiness) cost.tardiness_s += late;
  }

  if (mode == CostMode::Perturbed) {
    for (const SimVehicle& sv : vehicles) {
      if (sv.visits.empty() && sv.docked && sv.docked->depart < *epoch_end) {
        ++cost.idle_vehicles;
      }
    }
  }

  const double l3 = mode == CostMode::TrueObjective ? 0.0 : lambdas.l3;
  const double l4 = mode == CostMode::TrueObjective ? 0.0 : lambdas.l4;
  cost.weighted_total = lambdas.l1 * cost.distance +
                        lambdas.l2 * static_cast<double>(cost.tardiness_s) +
                        l3 * static_cast<double>(cost.waiting_s) +
                        l4 * static_cast<double>(cost.idle_vehicles);
  return cost;
}

Seconds committed_seconds(const VehicleStatus& status, Seconds now) {
  if (status.current) return std::max<Seconds>(0, status.current->depart - now);
  if (status.plan.empty()) throw SimulationError("in-transit vehicle without a destination");
  return status.plan.front().departure - now;
}

SimVehicle to_sim_vehicle(VehicleIndex vehicle, const VehicleStatus& status) {
  SimVehicle sv;
  sv.vehicle = vehicle;
  sv.docked = status.current;
  if (!status.current) {
    if (status.plan.empty()) throw SimulationError("in-transit vehicle without a destination");
    sv.arrival = status.plan.front().arrival;
  }
  sv.visits = status.plan;
  return sv;
}

std::vector<PlanVisit> to_visits(const Route& route, const Instance& inst) {
  std::vector<PlanVisit> visits;
  for (const RouteNode& n : route.nodes()) {
    const FactoryIndex f = node_factory(inst, n);
    if (visits.empty() || visits.back().factory != f) {
      visits.push_back(PlanVisit{f, {}, {}, 0, 0});
    }
    if (n.kind == NodeKind::Pickup) {
      visits.back().pickups.push_back(n.order);
    } else {
      visits.back().deliveries.push_back(n.order);
    }
  }
  if (route.lock() && (visits.empty() || visits.front().factory != route.lock()->factory)) {
    visits.insert(visits.begin(), PlanVisit{route.lock()->factory, {}, {}, 0, 0});
  }
  return visits;
}

std::string timeline_to_jsonl(const Instance& inst, const Timeline& timeline) {
  std::string out;
  for (const VisitRecord& r : timeline.records) {
    out += "{\"vehicle\":\"" + inst.vehicles[static_cast<std::size_t>(r.vehicle)].id +
           "\",\"visit\":" + std::to_string(r.visit) + ",\"factory\":\"" +
           inst.factory(r.factory).id + "\",\"arrival\":" + std::to_string(r.arrival) +
           ",\"waiting\":" + std::to_string(r.waiting) +
           ",\"departure\":" + std::to_string(r.departure) + "}\n";
  }
  return out;
}

}  // namespace dpdp
