#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpdp/feasibility.hpp"
#include "dpdp/model.hpp"

namespace dpdp {

class SimulationError : public std::runtime_error {
public:
  explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

// One factory visit of a route plan. Arrival/departure are filled in by the
// joint simulation; deliveries happen before pickups within the visit.
struct PlanVisit {
  FactoryIndex factory = kNoFactory;
  std::vector<OrderIndex> deliveries;
  std::vector<OrderIndex> pickups;
  Seconds arrival = 0;
  Seconds departure = 0;

  bool operator==(const PlanVisit&) const = default;
};

struct DockedState {
  FactoryIndex factory = kNoFactory;
  Seconds depart = 0;  // earliest departure from the current factory

  bool operator==(const DockedState&) const = default;
};

// Simulation input for one vehicle: either docked/parked at a factory, or
// in transit arriving at visits[0] at `arrival`.
struct SimVehicle {
  VehicleIndex vehicle = -1;
  std::optional<DockedState> docked;
  Seconds arrival = 0;  // used only when !docked
  std::vector<PlanVisit> visits;
};

struct VisitRecord {
  VehicleIndex vehicle = -1;
  int visit = 0;  // index into SimVehicle::visits
  FactoryIndex factory = kNoFactory;
  Seconds arrival = 0;
  Seconds waiting = 0;
  Seconds departure = 0;
};

struct Timeline {
  std::vector<VisitRecord> records;  // in event completion order

  // Records of one vehicle, in visit order.
  std::vector<const VisitRecord*> vehicle_records(VehicleIndex v) const;
};

// Event-driven joint simulation of all vehicles' planned routes. Docked
// vehicles with a departure in the future hold their reservation entries;
// everything departs as early as possible. Deterministic: ties are processed
// departures first, then by vehicle.
Timeline simulate(const Instance& inst, std::span<const SimVehicle> vehicles, Seconds start);

enum class CostMode { TrueObjective, Perturbed };

struct Multipliers {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
  double l4 = 0.0;
};

// f1 = distance over plan legs (plus the current->first leg when docked),
// f2 = tardiness at the delivering visit's arrival, f3 = waiting, f4 = idle
// vehicles. TrueObjective forces l3 = l4 = 0 and aggregates split-order
// tardiness as the max over fragments of a parent; Perturbed charges each
// fragment and requires epoch_end for the idle-vehicle count.
CostBreakdown cost_terms(const Instance& inst, std::span<const SimVehicle> vehicles,
                         const Timeline& timeline, const Multipliers& lambdas, CostMode mode,
                         std::optional<Seconds> epoch_end = std::nullopt);

// Status of one vehicle at an update point: docked/parked at `current`, or
// in transit to plan.front() when current is empty. Plan visits carry the
// times of the last joint simulation.
struct VehicleStatus {
  std::optional<DockedState> current;
  std::vector<OrderIndex> carried;  // loading order
  std::vector<PlanVisit> plan;

  bool in_transit() const { return !current.has_value(); }
  bool parked(Seconds now) const { return current && current->depart <= now && plan.empty(); }

  bool operator==(const VehicleStatus&) const = default;
};

// Time span after `now` the next decision can no longer affect: until the
// earliest departure when docked, until the end of service at the destination
// when in transit.
Seconds committed_seconds(const VehicleStatus& status, Seconds now);

// Simulation input from a status (times in the plan are recomputed).
SimVehicle to_sim_vehicle(VehicleIndex vehicle, const VehicleStatus& status);

// Converts a route into its visit sequence: maximal same-factory node runs
// merge into one visit; a locked route that lost all nodes at its locked
// destination keeps an empty visit there.
std::vector<PlanVisit> to_visits(const Route& route, const Instance& inst);

// One JSON object per visit record, newline separated.
std::string timeline_to_jsonl(const Instance& inst, const Timeline& timeline);

}  // namespace dpdp
