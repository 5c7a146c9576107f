#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpdp/evaluator.hpp"
#include "dpdp/model.hpp"

namespace dpdp {

class EpisodeError : public std::runtime_error {
public:
  explicit EpisodeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct State {
  int epoch = 0;
  Seconds time = 0;  // tau_k = epoch * delta
  std::vector<VehicleStatus> statuses;   // by vehicle index
  std::vector<OrderIndex> unprocessed;   // sorted; released, not yet picked up

  bool has_unprocessed(OrderIndex o) const;
};

// One feasible route plan per vehicle.
struct Action {
  std::vector<std::vector<PlanVisit>> plans;  // by vehicle index
};

struct Violation {
  VehicleIndex vehicle = -1;  // -1 for cross-vehicle violations
  std::string kind;
  std::string detail;
};

// Orders released in (tau_{k-1}, tau_k].
std::vector<OrderIndex> reveal(const Instance& inst, int epoch);

// Initial state: vehicles parked at their start factories, orders released
// at time zero already visible.
State initial_state(const Instance& inst);

// All Appendix-style feasibility checks on an action against a state:
// order consistency, cross-vehicle compatibility, pickups within the
// unprocessed set, LIFO, capacity, pickup-before-delivery, and the
// destination lock of in-transit vehicles. Violations are data, not errors.
std::vector<Violation> validate_action(const State& state, const Action& action,
                                       const Instance& inst);

// A visit that has begun (the vehicle arrived); fixed history.
struct RealizedVisit {
  VehicleIndex vehicle = -1;
  FactoryIndex factory = kNoFactory;
  Seconds arrival = 0;
  Seconds waiting = 0;
  Seconds departure = 0;
  std::vector<OrderIndex> deliveries;
  std::vector<OrderIndex> pickups;
};

struct TransitionResult {
  State next;
  std::vector<RealizedVisit> completed;  // visits whose arrival fell in this epoch
};

// Applies the action, jointly simulates to tau_{k+1}, and classifies every
// vehicle (still docked / departed / in transit / arrived / parked). An
// arrival at exactly tau_{k+1} counts as arrived.
TransitionResult transition(const State& state, const Action& action, const Instance& inst);

using DispatcherFn = std::function<Action(const State&, const Instance&)>;

struct EpochLogRecord {
  int epoch = 0;
  Seconds tau = 0;
  std::vector<OrderIndex> revealed;
  Action action;
  int waiting_vehicles = 0;     // vehicles queued for a port at tau
  double mean_committed_s = 0;  // over all vehicles at tau
};

struct EpisodeResult {
  bool all_delivered = false;
  double score = 0.0;          // lambda1 f1 + lambda2 f2 over the realized solution
  CostBreakdown breakdown;     // true-objective terms (f3/f4 reported unweighted)
  std::vector<RealizedVisit> realized;  // chronological
  std::vector<EpochLogRecord> log;
  int epochs = 0;
  std::vector<Violation> violations;  // nonempty when the episode aborted
};

struct EpisodeConfig {
  int max_epochs = 100000;  // safety stop for a stuck dispatcher
};

// reveal -> dispatch -> validate -> transition until every order is
// delivered; the realized solution is verified against the full-solution
// feasibility predicates before scoring.
EpisodeResult run_episode(const Instance& inst, const DispatcherFn& dispatcher,
                          const EpisodeConfig& config = {});

// Recomputes the realized score (lambda1 * distance + lambda2 * tardiness
// with split orders charged at their parent's max) from the visit history.
CostBreakdown realized_cost(const Instance& inst, const std::vector<RealizedVisit>& realized);

// Full-solution feasibility (episode postcondition): every order delivered
// exactly once by one vehicle, pickup before delivery, LIFO, capacity, and
// the travel-time identities.
std::vector<Violation> verify_realized(const Instance& inst,
                                       const std::vector<RealizedVisit>& realized);

}  // namespace dpdp
