#pragma once

// Independent brute-force oracles. Everything here recomputes results from
// first principles so the library implementations have something honest to
// disagree with.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "dpdp/evaluator.hpp"
#include "dpdp/feasibility.hpp"
#include "dpdp/model.hpp"

namespace dpdp::testing {

// Stack run over carried prefix + node sequence: push on pickup, the popped
// delivery must be the top.
inline bool stack_lifo_oracle(const Route& route) {
  std::vector<OrderIndex> stack(route.carried());
  for (const RouteNode& n : route.nodes()) {
    if (n.kind == NodeKind::Pickup) {
      stack.push_back(n.order);
    } else {
      if (stack.empty() || stack.back() != n.order) return false;
      stack.pop_back();
    }
  }
  return true;
}

// Time-stepped port simulator: c ports, FCFS by (arrival, vehicle).
struct PortArrival {
  VehicleIndex vehicle;
  Seconds arrival;
  Seconds service;
};

inline std::map<VehicleIndex, Seconds> stepped_port_oracle(int ports,
                                                           std::vector<PortArrival> arrivals) {
  std::sort(arrivals.begin(), arrivals.end(), [](const PortArrival& a, const PortArrival& b) {
    if (a.arrival != b.arrival) return a.arrival < b.arrival;
    return a.vehicle < b.vehicle;
  });
  std::map<VehicleIndex, Seconds> departures;
  std::vector<Seconds> port_free(static_cast<std::size_t>(ports), 0);
  Seconds horizon = 0;
  for (const auto& a : arrivals) horizon = std::max(horizon, a.arrival);
  horizon += 1;
  for (const auto& a : arrivals) horizon += a.service;

  std::size_t next = 0;
  std::vector<PortArrival> waiting;
  for (Seconds t = 0; t <= horizon; ++t) {
    while (next < arrivals.size() && arrivals[next].arrival == t) {
      waiting.push_back(arrivals[next++]);
    }
    // Serve in arrival order while a port is free at t.
    while (!waiting.empty()) {
      auto port = std::min_element(port_free.begin(), port_free.end());
      if (*port > t) break;
      const PortArrival a = waiting.front();
      waiting.erase(waiting.begin());
      *port = t + a.service;
      departures[a.vehicle] = t + a.service;
    }
  }
  return departures;
}

// Single vehicle, all ports free: visit times follow from prefix sums.
inline std::vector<std::pair<Seconds, Seconds>> free_port_prefix_oracle(
    const Instance& inst, FactoryIndex start_factory, Seconds depart,
    const std::vector<PlanVisit>& visits) {
  std::vector<std::pair<Seconds, Seconds>> out;
  FactoryIndex at = start_factory;
  Seconds clock = depart;
  for (const PlanVisit& v : visits) {
    const Seconds arrival = clock + inst.travel.travel(at, v.factory);
    Seconds service = inst.params.dock_s;
    for (OrderIndex o : v.deliveries) service += inst.order(o).unload_s;
    for (OrderIndex o : v.pickups) service += inst.order(o).load_s;
    out.emplace_back(arrival, arrival + service);
    clock = arrival + service;
    at = v.factory;
  }
  return out;
}

// Enumerates every order-consistent route over the given orders: each order
// is carried (delivery node only) or picked up and delivered, pickup first.
inline void enumerate_routes(const std::vector<OrderIndex>& orders,
                             const std::function<void(const Route&)>& visit) {
  const std::size_t n = orders.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<OrderIndex> carried, normal;
    for (std::size_t i = 0; i < n; ++i) {
      ((mask >> i) & 1 ? carried : normal).push_back(orders[i]);
    }
    std::sort(carried.begin(), carried.end());
    do {  // every loading order of the carried prefix
      std::vector<RouteNode> sequence;
      std::vector<bool> carried_placed(carried.size(), false);
      std::vector<int> normal_state(normal.size(), 0);  // 0 unplaced, 1 picked, 2 done
      std::function<void()> place = [&]() {
        if (sequence.size() == carried.size() + 2 * normal.size()) {
          Route route;
          route.set_carried(carried);
          route.set_nodes(sequence);
          visit(route);
          return;
        }
        for (std::size_t i = 0; i < carried.size(); ++i) {
          if (carried_placed[i]) continue;
          carried_placed[i] = true;
          sequence.push_back({NodeKind::Delivery, carried[i]});
          place();
          sequence.pop_back();
          carried_placed[i] = false;
        }
        for (std::size_t i = 0; i < normal.size(); ++i) {
          if (normal_state[i] == 2) continue;
          sequence.push_back(
              {normal_state[i] == 0 ? NodeKind::Pickup : NodeKind::Delivery, normal[i]});
          ++normal_state[i];
          place();
          --normal_state[i];
          sequence.pop_back();
        }
      };
      place();
    } while (std::next_permutation(carried.begin(), carried.end()));
  }
}

// All bridges of a route by definition: pickup span [a, a+k), delivery span
// [b, b+k), same factories within each span, reversed pairing. Maximal =
// contained in no other bridge.
inline std::vector<Bridge> brute_force_maximal_bridges(const Route& route, const Instance& inst) {
  const auto& nodes = route.nodes();
  const int n = static_cast<int>(nodes.size());
  auto is_bridge = [&](int a, int b, int k) {
    if (a < 0 || b < 0 || k < 1 || a + k > n || b + k > n || a + k > b) return false;
    for (int j = 0; j < k; ++j) {
      const RouteNode& lp = nodes[a + j];
      const RouteNode& rd = nodes[b + k - 1 - j];
      if (lp.kind != NodeKind::Pickup || rd.kind != NodeKind::Delivery) return false;
      if (lp.order != rd.order) return false;
      if (node_factory(inst, lp) != node_factory(inst, nodes[a])) return false;
      if (node_factory(inst, rd) != node_factory(inst, nodes[b])) return false;
    }
    return true;
  };
  std::vector<Bridge> all;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int k = 1; a + k <= n && b + k <= n; ++k) {
        if (is_bridge(a, b, k)) all.push_back({a, b, k});
      }
    }
  }
  auto contains = [](const Bridge& big, const Bridge& small) {
    if (big.size <= small.size) return false;
    const int offset = small.pickup_start - big.pickup_start;
    if (offset < 0 || small.pickup_start + small.size > big.pickup_start + big.size) return false;
    // Reversed pairing: l_j at pickup offset j pairs with delivery at
    // (start + size - 1 - j); the sub-span must sit at the mirrored slot.
    const int big_rj_of_small_lk = big.delivery_start + big.size - 1 -
                                   (offset + small.size - 1);
    return big_rj_of_small_lk == small.delivery_start;
  };
  std::vector<Bridge> maximal;
  for (const Bridge& b : all) {
    bool dominated = false;
    for (const Bridge& other : all) {
      if (contains(other, b)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maximal.push_back(b);
  }
  std::sort(maximal.begin(), maximal.end(),
            [](const Bridge& x, const Bridge& y) { return x.pickup_start < y.pickup_start; });
  return maximal;
}

// Naive structural feasibility for candidate routes, written against the
// route rules from scratch: stack LIFO, prefix capacity, and the destination
// lock (first node at the locked factory, leading-run deliveries unchanged).
inline bool naive_route_feasible(const Route& route, const Instance& inst, Quarters capacity) {
  if (route.lock()) {
    const auto& lock = *route.lock();
    if (!route.nodes().empty() && node_factory(inst, route.nodes().front()) != lock.factory) {
      return false;
    }
    std::vector<OrderIndex> leading, want = lock.deliveries;
    for (const RouteNode& n : route.nodes()) {
      if (node_factory(inst, n) != lock.factory) break;
      if (n.kind == NodeKind::Delivery) leading.push_back(n.order);
    }
    std::sort(leading.begin(), leading.end());
    std::sort(want.begin(), want.end());
    if (leading != want) return false;
  }
  if (!stack_lifo_oracle(route)) return false;
  Quarters load = 0;
  for (OrderIndex o : route.carried()) load += inst.order(o).quantity;
  if (load > capacity) return false;
  for (const RouteNode& n : route.nodes()) {
    load += (n.kind == NodeKind::Pickup ? 1 : -1) * inst.order(n.order).quantity;
    if (load > capacity) return false;
  }
  return true;
}

// Every structurally feasible way to place one order into a set of routes,
// by naive vector surgery.
inline std::vector<std::vector<Route>> oracle_all_insertions(const Instance& inst,
                                                             const std::vector<Route>& routes,
                                                             OrderIndex order) {
  std::vector<std::vector<Route>> candidates;
  for (std::size_t v = 0; v < routes.size(); ++v) {
    const auto& nodes = routes[v].nodes();
    const int n = static_cast<int>(nodes.size());
    for (int pg = 0; pg <= n; ++pg) {
      for (int dg = pg + 1; dg <= n + 1; ++dg) {
        std::vector<RouteNode> modified = nodes;
        modified.insert(modified.begin() + pg, RouteNode{NodeKind::Pickup, order});
        modified.insert(modified.begin() + dg, RouteNode{NodeKind::Delivery, order});
        Route candidate = routes[v];
        candidate.set_nodes(std::move(modified));
        if (!naive_route_feasible(candidate, inst, inst.params.capacity)) continue;
        std::vector<Route> solution = routes;
        solution[v] = std::move(candidate);
        candidates.push_back(std::move(solution));
      }
    }
  }
  return candidates;
}

// All matched pickup/delivery spans of a route, recomputed naively.
inline std::vector<Block> naive_blocks(const Route& route) {
  std::vector<Block> blocks;
  const auto& nodes = route.nodes();
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    if (nodes[i].kind != NodeKind::Pickup) continue;
    for (int j = i + 1; j < static_cast<int>(nodes.size()); ++j) {
      if (nodes[j].order == nodes[i].order) {
        blocks.push_back({i, j});
        break;
      }
    }
  }
  return blocks;
}

// Brute-force candidate sets for the three neighborhood operators: every
// block (or maximal bridge) moved or swapped in every admissible way.
inline std::vector<std::vector<Route>> oracle_operator_candidates(const Instance& inst,
                                                                  const std::vector<Route>& routes,
                                                                  int which_operator) {
  std::vector<std::vector<Route>> out;
  auto keep_if_feasible = [&](std::vector<Route> candidate) {
    for (const Route& r : candidate) {
      if (!naive_route_feasible(r, inst, inst.params.capacity)) return;
    }
    bool same = true;
    for (std::size_t v = 0; v < routes.size(); ++v) {
      if (!(candidate[v] == routes[v])) same = false;
    }
    if (same) return;
    out.push_back(std::move(candidate));
  };

  auto erase_block = [](std::vector<RouteNode> nodes, int start, int end) {
    nodes.erase(nodes.begin() + start, nodes.begin() + end + 1);
    return nodes;
  };

  if (which_operator == 0 || which_operator == 2) {  // relocate block / bridge
    for (std::size_t v1 = 0; v1 < routes.size(); ++v1) {
      const auto& nodes = routes[v1].nodes();
      std::vector<std::pair<std::vector<RouteNode>, std::vector<RouteNode>>> moves;
      if (which_operator == 0) {
        for (const Block& b : naive_blocks(routes[v1])) {
          std::vector<RouteNode> span(nodes.begin() + b.start, nodes.begin() + b.end + 1);
          moves.emplace_back(span, erase_block(nodes, b.start, b.end));
        }
      } else {
        for (const Bridge& b : brute_force_maximal_bridges(routes[v1], inst)) {
          std::vector<RouteNode> span(nodes.begin() + b.pickup_start,
                                      nodes.begin() + b.pickup_start + b.size);
          span.insert(span.end(), nodes.begin() + b.delivery_start,
                      nodes.begin() + b.delivery_start + b.size);
          auto rest = erase_block(nodes, b.delivery_start, b.delivery_start + b.size - 1);
          rest = erase_block(rest, b.pickup_start, b.pickup_start + b.size - 1);
          moves.emplace_back(span, rest);
        }
      }
      for (const auto& [span, rest] : moves) {
        for (std::size_t v2 = 0; v2 < routes.size(); ++v2) {
          const std::vector<RouteNode>& target = v2 == v1 ? rest : routes[v2].nodes();
          for (int gap = 0; gap <= static_cast<int>(target.size()); ++gap) {
            std::vector<RouteNode> modified = target;
            modified.insert(modified.begin() + gap, span.begin(), span.end());
            std::vector<Route> candidate = routes;
            if (v2 == v1) {
              candidate[v1].set_nodes(modified);
            } else {
              candidate[v1].set_nodes(rest);
              candidate[v2].set_nodes(modified);
            }
            keep_if_feasible(std::move(candidate));
          }
        }
      }
    }
  } else {  // block exchange
    struct Site {
      std::size_t vehicle;
      Block block;
    };
    std::vector<Site> sites;
    for (std::size_t v = 0; v < routes.size(); ++v) {
      for (const Block& b : naive_blocks(routes[v])) sites.push_back({v, b});
    }
    for (std::size_t i = 0; i < sites.size(); ++i) {
      for (std::size_t j = i + 1; j < sites.size(); ++j) {
        const Site& a = sites[i];
        const Site& b = sites[j];
        const auto& na = routes[a.vehicle].nodes();
        const auto& nb = routes[b.vehicle].nodes();
        std::vector<RouteNode> sa(na.begin() + a.block.start, na.begin() + a.block.end + 1);
        std::vector<RouteNode> sb(nb.begin() + b.block.start, nb.begin() + b.block.end + 1);
        std::vector<Route> candidate = routes;
        if (a.vehicle == b.vehicle) {
          const Block& first = a.block.start < b.block.start ? a.block : b.block;
          const Block& second = a.block.start < b.block.start ? b.block : a.block;
          if (first.end >= second.start) continue;
          const auto& sf = a.block.start < b.block.start ? sa : sb;
          const auto& ss = a.block.start < b.block.start ? sb : sa;
          std::vector<RouteNode> modified(na.begin(), na.begin() + first.start);
          modified.insert(modified.end(), ss.begin(), ss.end());
          modified.insert(modified.end(), na.begin() + first.end + 1, na.begin() + second.start);
          modified.insert(modified.end(), sf.begin(), sf.end());
          modified.insert(modified.end(), na.begin() + second.end + 1, na.end());
          candidate[a.vehicle].set_nodes(std::move(modified));
        } else {
          std::vector<RouteNode> ma = erase_block(na, a.block.start, a.block.end);
          ma.insert(ma.begin() + a.block.start, sb.begin(), sb.end());
          std::vector<RouteNode> mb = erase_block(nb, b.block.start, b.block.end);
          mb.insert(mb.begin() + b.block.start, sa.begin(), sa.end());
          candidate[a.vehicle].set_nodes(std::move(ma));
          candidate[b.vehicle].set_nodes(std::move(mb));
        }
        keep_if_feasible(std::move(candidate));
      }
    }
  }
  return out;
}

// First-fit bin count over sizes sorted non-increasing.
inline int first_fit_bin_count(std::vector<Quarters> sizes, Quarters capacity) {
  std::stable_sort(sizes.begin(), sizes.end(), std::greater<>());
  std::vector<Quarters> bins;
  for (Quarters s : sizes) {
    bool placed = false;
    for (Quarters& b : bins) {
      if (b + s <= capacity) {
        b += s;
        placed = true;
        break;
      }
    }
    if (!placed) bins.push_back(s);
  }
  return static_cast<int>(bins.size());
}

}  // namespace dpdp::testing
