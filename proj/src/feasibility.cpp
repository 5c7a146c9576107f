#include "dpdp/feasibility.hpp"

#include <algorithm>
#include <unordered_map>

namespace dpdp {

FactoryIndex node_factory(const Instance& inst, const RouteNode& node) {
  const Order& o = inst.order(node.order);
  return node.kind == NodeKind::Pickup ? o.pickup : o.delivery;
}

void check_order_consistent(const Route& route) {
  // state: 0 unseen, 1 carried (awaiting delivery), 2 picked (awaiting
  // delivery), 3 closed
  std::unordered_map<OrderIndex, int> state;
  for (OrderIndex o : route.carried()) {
    if (!state.emplace(o, 1).second) {
      throw RouteError("order " + std::to_string(o) + " carried twice");
    }
  }
  for (const RouteNode& n : route.nodes()) {
    auto& st = state[n.order];
    if (n.kind == NodeKind::Pickup) {
      if (st != 0) throw RouteError("order " + std::to_string(n.order) + " picked up twice or carried");
      st = 2;
    } else {
      if (st != 1 && st != 2) {
        throw RouteError("order " + std::to_string(n.order) + " delivered without pickup");
      }
      st = 3;
    }
  }
  for (const auto& [o, st] : state) {
    if (st == 1 || st == 2) throw RouteError("order " + std::to_string(o) + " never delivered");
  }
}

bool lifo_ok(const Route& route) {
  check_order_consistent(route);
  // Position condition over the concatenated list (carried prefix, then the
  // node sequence): whenever o_i is loaded before o_j, either o_i leaves
  // before o_j boards or o_j leaves while o_i is still on board.
  std::unordered_map<OrderIndex, int> pos_plus, pos_minus;
  int pos = 0;
  for (OrderIndex o : route.carried()) pos_plus[o] = pos++;
  for (const RouteNode& n : route.nodes()) {
    (n.kind == NodeKind::Pickup ? pos_plus : pos_minus)[n.order] = pos++;
  }
  for (const auto& [oi, i_plus] : pos_plus) {
    const int i_minus = pos_minus.at(oi);
    for (const auto& [oj, j_plus] : pos_plus) {
      if (oi == oj || i_plus >= j_plus) continue;
      if (!(i_minus <= j_plus || pos_minus.at(oj) <= i_minus)) return false;
    }
  }
  return true;
}

bool capacity_ok(const Route& route, const Instance& inst, Quarters capacity) {
  check_order_consistent(route);
  Quarters load = 0;
  for (OrderIndex o : route.carried()) load += inst.order(o).quantity;
  if (load > capacity) return false;
  for (const RouteNode& n : route.nodes()) {
    if (n.kind == NodeKind::Pickup) {
      load += inst.order(n.order).quantity;
      if (load > capacity) return false;
    } else {
      load -= inst.order(n.order).quantity;
    }
  }
  return true;
}

std::vector<Block> enumerate_blocks(const Route& route) {
  std::unordered_map<OrderIndex, int> pickup_at;
  std::vector<Block> blocks;
  const auto& nodes = route.nodes();
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (nodes[i].kind == NodeKind::Pickup) {
      pickup_at[nodes[i].order] = i;
    } else {
      auto it = pickup_at.find(nodes[i].order);
      if (it != pickup_at.end()) blocks.push_back({it->second, i});
    }
  }
  return blocks;  // delivery positions are visited in order, so sorted by end
}

namespace {

// Grows the size-1 bridge seeded at pickup node `a` to its maximal extent.
Bridge grow_bridge(const Route& route, const Instance& inst, int a, int b) {
  const auto& nodes = route.nodes();
  const int n = static_cast<int>(nodes.size());
  const FactoryIndex pf = node_factory(inst, nodes[a]);
  const FactoryIndex df = node_factory(inst, nodes[b]);
  int k = 1;
  // Extend with succ(l_k) / pred(r_k): (a, k, b) -> (a, k+1, b-1).
  while (true) {
    const int lp = a + k;  // candidate pickup
    const int rd = b - 1;  // its required delivery slot
    if (lp >= n || rd <= lp) break;
    if (nodes[lp].kind != NodeKind::Pickup || nodes[rd].kind != NodeKind::Delivery) break;
    if (nodes[lp].order != nodes[rd].order) break;
    if (node_factory(inst, nodes[lp]) != pf || node_factory(inst, nodes[rd]) != df) break;
    ++k;
    --b;
  }
  // Extend with pred(l_1) / succ(r_1): (a, k, b) -> (a-1, k+1, b).
  while (true) {
    const int lp = a - 1;
    const int rd = b + k;  // succ of current r_1
    if (lp < 0 || rd >= n) break;
    if (nodes[lp].kind != NodeKind::Pickup || nodes[rd].kind != NodeKind::Delivery) break;
    if (nodes[lp].order != nodes[rd].order) break;
    if (node_factory(inst, nodes[lp]) != pf || node_factory(inst, nodes[rd]) != df) break;
    --a;
    ++k;
  }
  return {a, b, k};
}

}  // namespace

std::vector<Bridge> enumerate_maximal_bridges(const Route& route, const Instance& inst) {
  const auto& nodes = route.nodes();
  const int n = static_cast<int>(nodes.size());
  std::unordered_map<OrderIndex, int> delivery_at;
  for (int i = 0; i < n; ++i) {
    if (nodes[i].kind == NodeKind::Delivery) delivery_at[nodes[i].order] = i;
  }
  std::vector<Bridge> bridges;
  for (int i = 0; i < n; ++i) {
    if (nodes[i].kind != NodeKind::Pickup) continue;
    auto it = delivery_at.find(nodes[i].order);
    if (it == delivery_at.end()) continue;
    Bridge b = grow_bridge(route, inst, i, it->second);
    if (std::find(bridges.begin(), bridges.end(), b) == bridges.end()) bridges.push_back(b);
  }
  std::sort(bridges.begin(), bridges.end(),
            [](const Bridge& x, const Bridge& y) { return x.pickup_start < y.pickup_start; });
  return bridges;
}

bool route_feasible(const Route& route, const Instance& inst, Quarters capacity) {
  if (route.lock()) {
    const DestinationLock& lock = *route.lock();
    if (!route.nodes().empty() &&
        node_factory(inst, route.nodes().front()) != lock.factory) {
      return false;
    }
    // Deliveries of the leading run at the locked factory must match the
    // promised set exactly.
    std::vector<OrderIndex> leading;
    for (const RouteNode& n : route.nodes()) {
      if (node_factory(inst, n) != lock.factory) break;
      if (n.kind == NodeKind::Delivery) leading.push_back(n.order);
    }
    std::vector<OrderIndex> want = lock.deliveries;
    std::sort(leading.begin(), leading.end());
    std::sort(want.begin(), want.end());
    if (leading != want) return false;
  }
  return lifo_ok(route) && capacity_ok(route, inst, capacity);
}

std::optional<Route> insert_order(const Route& route, const Instance& inst, OrderIndex order,
                                  int pickup_gap, int delivery_gap, Quarters capacity) {
  const int n = route.size();
  if (pickup_gap < 0 || pickup_gap > n) throw RouteError("pickup gap out of range");
  if (delivery_gap <= pickup_gap || delivery_gap > n + 1) {
    throw RouteError("delivery gap must follow the inserted pickup");
  }
  for (const RouteNode& node : route.nodes()) {
    if (node.order == order) throw RouteError("order already in route");
  }
  for (OrderIndex o : route.carried()) {
    if (o == order) throw RouteError("order already carried");
  }

  Route result = route;
  std::vector<RouteNode> nodes = route.nodes();
  nodes.insert(nodes.begin() + pickup_gap, RouteNode{NodeKind::Pickup, order});
  nodes.insert(nodes.begin() + delivery_gap, RouteNode{NodeKind::Delivery, order});
  result.set_nodes(std::move(nodes));
  if (!route_feasible(result, inst, capacity)) return std::nullopt;
  return result;
}

Route remove_order(const Route& route, OrderIndex order) {
  bool had_pickup = false;
  std::vector<RouteNode> nodes;
  nodes.reserve(route.nodes().size());
  for (const RouteNode& n : route.nodes()) {
    if (n.order == order) {
      if (n.kind == NodeKind::Pickup) had_pickup = true;
      continue;
    }
    nodes.push_back(n);
  }
  if (!had_pickup) throw RouteError("order has no pickup node in this route");
  Route result = route;
  result.set_nodes(std::move(nodes));
  return result;
}

std::string dump(const Route& route, const Instance& inst) {
  std::string out;
  int seq = 0;
  auto line = [&](const std::string& kind, const std::string& order, const std::string& factory) {
    out += std::to_string(seq++) + " " + kind + " " + order + " " + factory + "\n";
  };
  std::string head_factory = "-";
  if (route.lock()) head_factory = inst.factory(route.lock()->factory).id;
  line("head", "-", head_factory);
  for (const RouteNode& n : route.nodes()) {
    line(n.kind == NodeKind::Pickup ? "pickup" : "delivery", inst.order(n.order).id,
         inst.factory(node_factory(inst, n)).id);
  }
  line("terminal", "-", "-");
  return out;
}

}  // namespace dpdp
