#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dpdp/model.hpp"

namespace dpdp {

class RouteError : public std::runtime_error {
public:
  explicit RouteError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class NodeKind : std::uint8_t { Pickup, Delivery };

struct RouteNode {
  NodeKind kind;
  OrderIndex order;

  bool operator==(const RouteNode&) const = default;
};

// First visit of an in-transit vehicle: the factory it is heading to and the
// deliveries promised there can no longer change; pickups there still can.
struct DestinationLock {
  FactoryIndex factory = kNoFactory;
  std::vector<OrderIndex> deliveries;

  bool operator==(const DestinationLock&) const = default;
};

// A vehicle route: the head node carries the orders already on board (in
// loading order), inner nodes are pickups/deliveries, the terminal is
// implicit. For an in-transit vehicle the first visited factory is locked.
class Route {
public:
  Route() = default;
  explicit Route(VehicleIndex vehicle) : vehicle_(vehicle) {}

  VehicleIndex vehicle() const { return vehicle_; }
  const std::vector<OrderIndex>& carried() const { return carried_; }
  const std::vector<RouteNode>& nodes() const { return nodes_; }
  const std::optional<DestinationLock>& lock() const { return lock_; }

  void set_carried(std::vector<OrderIndex> carried) { carried_ = std::move(carried); }
  void set_lock(std::optional<DestinationLock> lock) { lock_ = std::move(lock); }
  void set_nodes(std::vector<RouteNode> nodes) { nodes_ = std::move(nodes); }

  bool empty() const { return nodes_.empty(); }
  int size() const { return static_cast<int>(nodes_.size()); }

  bool operator==(const Route&) const = default;

private:
  VehicleIndex vehicle_ = -1;
  std::vector<OrderIndex> carried_;
  std::vector<RouteNode> nodes_;
  std::optional<DestinationLock> lock_;
};

// Contiguous node span from the pickup of an order to its delivery,
// inclusive. Interior nodes always form complete nested pairs.
struct Block {
  int start = 0;  // pickup node index
  int end = 0;    // delivery node index of the same order

  bool operator==(const Block&) const = default;
};

// Consecutive same-factory pickups (l_1..l_k) paired in reverse with
// consecutive same-factory deliveries (r_k..r_1) of the same orders.
struct Bridge {
  int pickup_start = 0;    // index of l_1
  int delivery_start = 0;  // index of r_k
  int size = 0;            // k

  bool operator==(const Bridge&) const = default;
};

FactoryIndex node_factory(const Instance& inst, const RouteNode& node);

// Throws RouteError unless every order appears as a matched pickup/delivery
// pair and carried orders appear as deliveries only.
void check_order_consistent(const Route& route);

// LIFO position condition over the carried prefix plus the node sequence.
// Equivalent to a pickup-push / delivery-pop-top stack run.
bool lifo_ok(const Route& route);

// Running load (carried first, +q on pickup, -q on delivery) never exceeds Q.
bool capacity_ok(const Route& route, const Instance& inst, Quarters capacity);

// All (pickup, matching delivery) spans, ordered by delivery position.
// Carried orders contribute no blocks.
std::vector<Block> enumerate_blocks(const Route& route);

// All maximal bridges, ordered by pickup position.
std::vector<Bridge> enumerate_maximal_bridges(const Route& route, const Instance& inst);

// Structural feasibility used when vetting candidate routes: LIFO, capacity,
// and for a locked route that the first node (if any) stays at the locked
// factory and the leading visit still delivers exactly the locked set.
bool route_feasible(const Route& route, const Instance& inst, Quarters capacity);

// Inserts o+ at gap `pickup_gap` and then o- at gap `delivery_gap` of the
// updated route (gap g = before the g-th inner node; gap size() = at the
// tail). Returns nullopt when the result is structurally infeasible; throws
// RouteError on out-of-range gaps, delivery_gap <= pickup_gap, or an order
// already present.
std::optional<Route> insert_order(const Route& route, const Instance& inst, OrderIndex order,
                                  int pickup_gap, int delivery_gap, Quarters capacity);

// Removes both nodes of `order`; throws RouteError if the order has no
// pickup node in the route.
Route remove_order(const Route& route, OrderIndex order);

// One line per node: "<seq> <kind> <order-id> <factory-id>".
std::string dump(const Route& route, const Instance& inst);

}  // namespace dpdp
