#include "dpdp/report.hpp"

#include <sstream>

namespace dpdp {

namespace {

using nlohmann::json;

json cost_to_json(const CostBreakdown& c) {
  return {{"distance", c.distance},
          {"tardiness_s", c.tardiness_s},
          {"waiting_s", c.waiting_s},
          {"idle_vehicles", c.idle_vehicles},
          {"weighted_total", c.weighted_total}};
}

json action_to_json(const Instance& inst, const Action& action) {
  json out = json::array();
  for (std::size_t v = 0; v < action.plans.size(); ++v) {
    json visits = json::array();
    for (const PlanVisit& visit : action.plans[v]) {
      json jd = json::array();
      for (OrderIndex o : visit.deliveries) jd.push_back(inst.order(o).id);
      json jp = json::array();
      for (OrderIndex o : visit.pickups) jp.push_back(inst.order(o).id);
      visits.push_back({{"factory", inst.factory(visit.factory).id},
                        {"arrival", visit.arrival},
                        {"departure", visit.departure},
                        {"deliveries", std::move(jd)},
                        {"pickups", std::move(jp)}});
    }
    out.push_back({{"vehicle", inst.vehicles[v].id}, {"visits", std::move(visits)}});
  }
  return out;
}

}  // namespace

std::string digest_config(const CfaConfig& config) {
  // FNV-1a over the canonical config rendering; stable across runs.
  std::ostringstream text;
  text << config.lambdas.l1 << '|' << config.lambdas.l2 << '|' << config.lambdas.l3 << '|'
       << config.lambdas.l4 << '|' << config.urgency_s << '|' << config.vns_budget_seconds << '|'
       << config.vns_budget_iterations << '|' << config.seed << '|'
       << config.disturbance_enabled;
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (char c : text.str()) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream hex;
  hex << std::hex << hash;
  return hex.str();
}

json Report::to_json(bool include_timing) const {
  json series = json::array();
  for (const EpochLogRecord& r : log) {
    series.push_back({{"epoch", r.epoch},
                      {"tau", r.tau},
                      {"waiting_vehicles", r.waiting_vehicles},
                      {"mean_committed_s", r.mean_committed_s}});
  }
  json doc = {{"instance", instance_id},
              {"config_digest", config_digest},
              {"all_delivered", all_delivered},
              {"score", score},
              {"breakdown", cost_to_json(breakdown)},
              {"epochs", epochs},
              {"series", std::move(series)}};
  if (include_timing) doc["wall_seconds"] = wall_seconds;
  return doc;
}

Report make_report(const Instance& inst, const EpisodeResult& episode, const CfaConfig& config,
                   double wall_seconds) {
  Report report;
  report.instance_id = inst.id;
  report.config_digest = digest_config(config);
  report.all_delivered = episode.all_delivered;
  report.score = episode.score;
  report.breakdown = episode.breakdown;
  report.epochs = episode.epochs;
  report.log = episode.log;
  report.wall_seconds = wall_seconds;
  return report;
}

std::string series_to_csv(const Report& report) {
  std::ostringstream out;
  out << "epoch,tau,waiting_vehicles,mean_committed_s\n";
  for (const EpochLogRecord& r : report.log) {
    out << r.epoch << ',' << r.tau << ',' << r.waiting_vehicles << ',' << r.mean_committed_s
        << '\n';
  }
  return out.str();
}

std::string episode_to_jsonl(const Instance& inst, const EpisodeResult& episode) {
  std::string out;
  for (const EpochLogRecord& r : episode.log) {
    json revealed = json::array();
    for (OrderIndex o : r.revealed) revealed.push_back(inst.order(o).id);
    json record = {{"epoch", r.epoch},
                   {"tau", r.tau},
                   {"revealed", std::move(revealed)},
                   {"waiting_vehicles", r.waiting_vehicles},
                   {"mean_committed_s", r.mean_committed_s},
                   {"action", action_to_json(inst, r.action)}};
    out += record.dump() + "\n";
  }
  return out;
}

std::string realized_to_jsonl(const Instance& inst, const std::vector<RealizedVisit>& realized) {
  std::string out;
  for (const RealizedVisit& v : realized) {
    json jd = json::array();
    for (OrderIndex o : v.deliveries) jd.push_back(inst.order(o).id);
    json jp = json::array();
    for (OrderIndex o : v.pickups) jp.push_back(inst.order(o).id);
    json record = {{"vehicle", inst.vehicles[static_cast<std::size_t>(v.vehicle)].id},
                   {"factory", inst.factory(v.factory).id},
                   {"arrival", v.arrival},
                   {"waiting", v.waiting},
                   {"departure", v.departure},
                   {"deliveries", std::move(jd)},
                   {"pickups", std::move(jp)}};
    out += record.dump() + "\n";
  }
  return out;
}

std::vector<Action> actions_from_jsonl(const Instance& inst, const std::string& text) {
  std::vector<Action> actions;
  std::istringstream in(text);
  std::string line;
  auto order_index = [&](const std::string& id) {
    auto idx = inst.find_order(id);
    if (!idx) throw InstanceError("episode log references unknown order " + id);
    return *idx;
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json record = json::parse(line);
    Action action;
    action.plans.resize(inst.vehicles.size());
    for (const json& jv : record.at("action")) {
      const std::string vid = jv.at("vehicle").get<std::string>();
      std::size_t v = 0;
      while (v < inst.vehicles.size() && inst.vehicles[v].id != vid) ++v;
      if (v == inst.vehicles.size()) {
        throw InstanceError("episode log references unknown vehicle " + vid);
      }
      for (const json& jvisit : jv.at("visits")) {
        PlanVisit visit;
        auto f = inst.find_factory(jvisit.at("factory").get<std::string>());
        if (!f) throw InstanceError("episode log references an unknown factory");
        visit.factory = *f;
        visit.arrival = jvisit.value("arrival", 0);
        visit.departure = jvisit.value("departure", 0);
        for (const json& o : jvisit.at("deliveries")) {
          visit.deliveries.push_back(order_index(o.get<std::string>()));
        }
        for (const json& o : jvisit.at("pickups")) {
          visit.pickups.push_back(order_index(o.get<std::string>()));
        }
        action.plans[v].push_back(std::move(visit));
      }
    }
    actions.push_back(std::move(action));
  }
  return actions;
}

EpisodeResult replay_episode(const Instance& inst, const std::vector<Action>& actions) {
  std::size_t next = 0;
  DispatcherFn dispatcher = [&](const State& state, const Instance&) -> Action {
    if (next >= actions.size()) {
      throw EpisodeError("episode log ended at epoch " + std::to_string(state.epoch) +
                         " before all orders were delivered");
    }
    return actions[next++];
  };
  EpisodeConfig config;
  config.max_epochs = static_cast<int>(actions.size());
  return run_episode(inst, dispatcher, config);
}

}  // namespace dpdp
