#pragma once

#include <string>
#include <vector>

#include "dpdp/model.hpp"

namespace dpdp::testing {

// Uniform travel model: every distinct pair has the same distance/time.
inline TravelModel uniform_travel(int n, double dist, Seconds time) {
  std::vector<double> d(static_cast<std::size_t>(n) * n, dist);
  std::vector<Seconds> t(static_cast<std::size_t>(n) * n, time);
  for (int i = 0; i < n; ++i) {
    d[static_cast<std::size_t>(i) * n + i] = 0.0;
    t[static_cast<std::size_t>(i) * n + i] = 0;
  }
  return TravelModel(n, std::move(d), std::move(t));
}

struct OrderSpec {
  std::string id;
  FactoryIndex pickup;
  FactoryIndex delivery;
  Seconds release = 0;
  Seconds due = 1000000;
  Quarters quantity = 4;
  Seconds load_s = 60;
  Seconds unload_s = 60;
};

inline Instance make_instance(int factories, int ports, std::vector<FactoryIndex> vehicle_starts,
                              std::vector<OrderSpec> orders, double dist, Seconds travel,
                              Params params = {}) {
  Instance inst;
  inst.id = "test";
  for (int f = 0; f < factories; ++f) {
    inst.factories.push_back({"f" + std::to_string(f), ports});
  }
  inst.travel = uniform_travel(factories, dist, travel);
  for (std::size_t v = 0; v < vehicle_starts.size(); ++v) {
    inst.vehicles.push_back({"v" + std::to_string(v), vehicle_starts[v]});
  }
  for (const OrderSpec& s : orders) {
    Order o;
    o.id = s.id;
    o.pickup = s.pickup;
    o.delivery = s.delivery;
    o.release = s.release;
    o.due = s.due;
    o.quantity = s.quantity;
    o.load_s = s.load_s;
    o.unload_s = s.unload_s;
    inst.orders.push_back(std::move(o));
  }
  inst.params = params;
  inst.finalize();
  return inst;
}

// The minutes-scale demo world used across the golden tests: seven factories,
// 11 time units between any two, 2 units of dock approach, 1 unit to load or
// unload an order, 10-unit epochs. Orders: o1 f1->f2, o2 f1->f3, o3 f4->f5,
// o4 f6->f5.
inline Instance minutes_demo_instance() {
  Params params;
  params.capacity = 40;
  params.dock_s = 2;
  params.epoch_s = 10;
  params.urgency_s = 0;  // nothing counts as urgent at this scale
  return make_instance(
      7, 2, {0},
      {{"o1", 1, 2, 5, 500, 4, 1, 1},
       {"o2", 1, 3, 5, 500, 4, 1, 1},
       {"o3", 4, 5, 25, 500, 4, 1, 1},
       {"o4", 6, 5, 35, 500, 4, 1, 1}},
      1.0, 11, params);
}

}  // namespace dpdp::testing
