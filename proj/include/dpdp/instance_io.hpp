#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "dpdp/model.hpp"

namespace dpdp {

// Canonical instance schema, one JSON document:
//   factories: [{id, ports}]
//   travel:    {distance: [[..]], time: [[..]]}   (dense, row-major, factory order)
//   vehicles:  [{id, factory}]
//   orders:    [{id, pickup, delivery, release, due,
//                items: [{size, count?, handling?}]}]
//   params:    {capacity, dock_seconds, epoch_seconds, urgency_seconds,
//               lambda1?, lambda2, lambda3, lambda4}
// Quantities (capacity, item sizes) are decimal strings in 0.25 steps.
// Item handling seconds default by size: 0.25 -> 15, 0.5 -> 30, 1.0 -> 60.
// Oversized orders are split on load.
Instance instance_from_json(const nlohmann::json& doc, const std::string& id);
nlohmann::json instance_to_json(const Instance& inst);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

// Hook for foreign on-disk formats (e.g. competition dumps); implementations
// translate into the canonical Instance.
class InstanceAdapter {
public:
  virtual ~InstanceAdapter() = default;
  virtual Instance load(const std::filesystem::path& path) const = 0;
};

}  // namespace dpdp
