#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "dpdp/evaluator.hpp"
#include "dpdp/feasibility.hpp"
#include "dpdp/sdp.hpp"

namespace dpdp {

struct CfaConfig {
  Multipliers lambdas;                     // perturbed reward multipliers
  Seconds urgency_s = 3600;                // U
  double vns_budget_seconds = 0.0;         // 0 = no wall-clock budget
  std::int64_t vns_budget_iterations = 0;  // 0 = no iteration budget
  std::uint64_t seed = 0;
  bool disturbance_enabled = false;
  // Called at a local optimum when enabled; return true to keep searching.
  std::function<bool(std::vector<Route>&, std::mt19937_64&)> disturbance_hook;
};

CfaConfig default_config(const Instance& inst);

// One set of candidate routes with its perturbed-reward evaluation.
struct WorkingSolution {
  std::vector<Route> routes;  // by vehicle index
  CostBreakdown cost;
};

struct UrgencyPartition {
  std::vector<OrderIndex> urgent;      // estimated delay <= U, in insertion order
  std::vector<OrderIndex> non_urgent;  // in insertion order
};

enum class Operator { RelocateBridge, BlockExchange, RelocateBlock };

// Joint simulation of all routes from the state's clock, scored with the
// perturbed reward (idle vehicles counted against the end of this epoch).
CostBreakdown evaluate_solution(const Instance& inst, const State& state,
                                const std::vector<Route>& routes, const Multipliers& lambdas);

// Routes carried over from the previous epoch: the state's plans already
// exclude executed pickups and deliveries, so this rebuilds node sequences
// and applies destination locks.
WorkingSolution reconstruct(const Instance& inst, const State& state, const Multipliers& lambdas);

// Splits the insertable orders (unprocessed minus those already routed) into
// urgent and non-urgent sets; each set is ordered by pickup factory, then by
// descending estimated delay.
UrgencyPartition classify_and_order(const Instance& inst, const State& state,
                                    const std::vector<Route>& routes, Seconds urgency_threshold);

// Inserts `order` at the feasible (vehicle, pickup gap, delivery gap) with
// the least perturbed-cost increase; ties go to the smallest such triple.
// Throws EpisodeError when no feasible insertion exists.
void cheapest_insertion(const Instance& inst, const State& state, WorkingSolution& solution,
                        OrderIndex order, const Multipliers& lambdas);

// Best feasible neighbor under one operator, or nullopt when the operator
// yields no feasible candidate. Candidates that reproduce the current routes
// are skipped.
std::optional<WorkingSolution> neighborhood_best(const Instance& inst, const State& state,
                                                 const WorkingSolution& solution, Operator op,
                                                 const Multipliers& lambdas);

struct VnsStats {
  std::int64_t iterations = 0;
  std::vector<double> accepted_costs;  // cost after each accepted move
};

// Best-improvement descent cycling relocate-bridge, block-exchange,
// relocate-block; restarts from the first operator after every acceptance
// and stops at a local optimum or when the budget runs out.
WorkingSolution vns(const Instance& inst, const State& state, WorkingSolution solution,
                    const CfaConfig& config, VnsStats* stats = nullptr);

// The CFA-VNS policy: reconstruct, insert urgent then non-urgent orders by
// cheapest insertion, improve with VNS, and emit the plans with the timing
// of the final joint simulation.
class CfaDispatcher {
public:
  CfaDispatcher(const Instance& inst, CfaConfig config);

  Action decide(const State& state);

  // Adapter for sdp::run_episode.
  DispatcherFn callback();

  const CfaConfig& config() const { return config_; }

private:
  const Instance& inst_;
  CfaConfig config_;
  std::mt19937_64 rng_;
};

}  // namespace dpdp
