#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace dpdp {

// All times are integer seconds. Quantities are stored in quarter units
// (0.25 -> 1) so capacity arithmetic is exact.
using Seconds = std::int64_t;
using Quarters = std::int32_t;

using FactoryIndex = std::int32_t;
using VehicleIndex = std::int32_t;
using OrderIndex = std::int32_t;

constexpr FactoryIndex kNoFactory = -1;

class InstanceError : public std::runtime_error {
public:
  explicit InstanceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Factory {
  std::string id;
  int ports = 1;  // docking ports, c >= 1
};

// Dense distance / travel-time matrices, row-major in factory order.
class TravelModel {
public:
  TravelModel() = default;
  TravelModel(int factory_count, std::vector<double> dist, std::vector<Seconds> travel);

  double dist(FactoryIndex from, FactoryIndex to) const {
    return dist_[static_cast<std::size_t>(from) * n_ + to];
  }
  Seconds travel(FactoryIndex from, FactoryIndex to) const {
    return travel_[static_cast<std::size_t>(from) * n_ + to];
  }
  int factory_count() const { return n_; }

private:
  int n_ = 0;
  std::vector<double> dist_;
  std::vector<Seconds> travel_;
};

struct Order {
  std::string id;
  FactoryIndex pickup = kNoFactory;    // f^p
  FactoryIndex delivery = kNoFactory;  // f^d
  Seconds release = 0;                 // t^p
  Seconds due = 0;                     // t^d
  Quarters quantity = 0;               // q
  Seconds load_s = 0;                  // h^p
  Seconds unload_s = 0;                // h^d
  std::optional<std::string> parent;   // set when this is a split fragment
};

struct Vehicle {
  std::string id;
  FactoryIndex start = kNoFactory;
};

struct Params {
  Quarters capacity = 60;         // Q, 15.0 units
  Seconds dock_s = 1800;          // h_docking
  Seconds epoch_s = 600;          // delta
  Seconds urgency_s = 3600;       // U
  double lambda1 = 0.0;           // 0 means "derive 1/n from vehicle count"
  double lambda2 = 10000.0 / 3600.0;
  double lambda3 = 0.5 * 10000.0 / 3600.0;
  double lambda4 = 5.0;
};

struct Instance {
  std::string id;
  std::vector<Factory> factories;
  TravelModel travel;
  std::vector<Vehicle> vehicles;
  std::vector<Order> orders;  // sorted by release time
  Params params;

  const Order& order(OrderIndex i) const { return orders[static_cast<std::size_t>(i)]; }
  const Factory& factory(FactoryIndex i) const { return factories[static_cast<std::size_t>(i)]; }
  int factory_count() const { return static_cast<int>(factories.size()); }
  int vehicle_count() const { return static_cast<int>(vehicles.size()); }
  int order_count() const { return static_cast<int>(orders.size()); }

  double lambda1() const {
    return params.lambda1 > 0.0 ? params.lambda1 : 1.0 / static_cast<double>(vehicles.size());
  }

  std::optional<FactoryIndex> find_factory(const std::string& fid) const;
  std::optional<OrderIndex> find_order(const std::string& oid) const;

  // Checks the structural invariants and builds lookup tables. Throws
  // InstanceError on violation.
  void finalize();

private:
  std::unordered_map<std::string, FactoryIndex> factory_by_id_;
  std::unordered_map<std::string, OrderIndex> order_by_id_;
};

struct CostBreakdown {
  double distance = 0.0;        // f1
  Seconds tardiness_s = 0;      // f2
  Seconds waiting_s = 0;        // f3
  int idle_vehicles = 0;        // f4
  double weighted_total = 0.0;
};

// Dock approach plus the unload times of `deliveries` and load times of `pickups`.
Seconds service_seconds(const Instance& inst, std::span<const OrderIndex> deliveries,
                        std::span<const OrderIndex> pickups);

// (t^d - now) - (h_docking + h^p + travel(f^p, f^d)); negative means the order
// cannot be delivered on time any more.
Seconds estimated_delay(const Instance& inst, OrderIndex order, Seconds now);

// One physical item of an order; `handling` applies to both loading and unloading.
struct OrderItem {
  Quarters size = 0;
  Seconds handling = 0;
};

// An order before item splitting.
struct OrderDraft {
  std::string id;
  FactoryIndex pickup = kNoFactory;
  FactoryIndex delivery = kNoFactory;
  Seconds release = 0;
  Seconds due = 0;
  std::vector<OrderItem> items;
};

// First-fit split of an oversized order into capacity-feasible fragments.
// Items are placed in non-increasing size order; each bin becomes a fragment
// carrying the parent id. An order that fits whole comes back as a singleton
// without a parent id. A single item larger than `capacity` is an error.
std::vector<Order> split_order(const OrderDraft& draft, Quarters capacity);

// "0.25"/"1.5"/"15" -> quarter units; rejects anything that is not a multiple
// of 0.25. Used by the instance schema, which serializes quantities as strings.
Quarters parse_quarters(const std::string& text);
std::string format_quarters(Quarters q);

}  // namespace dpdp
