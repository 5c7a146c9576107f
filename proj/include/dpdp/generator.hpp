#pragma once

#include <cstdint>
#include <string>

#include "dpdp/model.hpp"

namespace dpdp {

enum class TemporalModel { Uniform, Bursty };

// Synthetic instance shapes: factories on uniform planar coordinates with
// Euclidean distances and travel = distance / speed; every order gets the
// same time window length.
struct GeneratorSpec {
  std::string id = "generated";
  int factory_count = 10;
  int port_count = 6;
  int vehicle_count = 5;
  int order_count = 50;
  Seconds planning_horizon_s = 4 * 3600;
  Seconds due_offset_s = 14400;
  double box_m = 30000.0;    // square side, meters
  double speed_mps = 10.0;
  TemporalModel temporal = TemporalModel::Uniform;
  // item mix: box (0.25, 15 s), small pallet (0.5, 30 s), standard (1.0, 60 s)
  double weight_box = 0.4;
  double weight_small = 0.3;
  double weight_standard = 0.3;
  int max_items_per_order = 4;
  std::uint64_t seed = 1;
};

Instance generate(const GeneratorSpec& spec);

// One hub factory with a single docking port, vehicles parked there, and
// orders fanning out to spread-out spokes: waiting dominates unless hub
// visits are consolidated.
Instance congested_preset(std::uint64_t seed);

// Two vehicles at one pickup factory, a couple of far consolidatable orders
// up front and tighter return hauls later: keeping a vehicle idle early is
// cheap now and expensive soon.
Instance sparse_preset(std::uint64_t seed);

}  // namespace dpdp
