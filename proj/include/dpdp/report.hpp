#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dpdp/dispatcher.hpp"
#include "dpdp/sdp.hpp"

namespace dpdp {

struct Report {
  std::string instance_id;
  std::string config_digest;
  bool all_delivered = false;
  double score = 0.0;               // true objective of the realized solution
  CostBreakdown breakdown;
  int epochs = 0;
  std::vector<EpochLogRecord> log;  // carries the per-epoch metric series
  double wall_seconds = 0.0;

  // include_timing=false drops the wall-clock stats, leaving only
  // run-to-run-stable content (the determinism check compares these bytes).
  nlohmann::json to_json(bool include_timing = true) const;
};

std::string digest_config(const CfaConfig& config);

Report make_report(const Instance& inst, const EpisodeResult& episode, const CfaConfig& config,
                   double wall_seconds);

// epoch,tau,waiting_vehicles,mean_committed_s
std::string series_to_csv(const Report& report);

// One JSON object per epoch with the revealed orders, the full action, and
// the metrics; enough to replay the episode.
std::string episode_to_jsonl(const Instance& inst, const EpisodeResult& episode);

// One JSON object per realized visit.
std::string realized_to_jsonl(const Instance& inst, const std::vector<RealizedVisit>& realized);

std::vector<Action> actions_from_jsonl(const Instance& inst, const std::string& text);

// Re-runs the decision process with the logged actions.
EpisodeResult replay_episode(const Instance& inst, const std::vector<Action>& actions);

}  // namespace dpdp
