#include "dpdp/model.hpp"

#include <algorithm>
#include <numeric>

namespace dpdp {

TravelModel::TravelModel(int factory_count, std::vector<double> dist, std::vector<Seconds> travel)
    : n_(factory_count), dist_(std::move(dist)), travel_(std::move(travel)) {
  const auto expected = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  if (dist_.size() != expected || travel_.size() != expected) {
    throw InstanceError("travel model matrices must be " + std::to_string(n_) + "x" +
                        std::to_string(n_));
  }
  for (int i = 0; i < n_; ++i) {
    if (this->dist(i, i) != 0.0 || this->travel(i, i) != 0) {
      throw InstanceError("travel model diagonal must be zero (factory " + std::to_string(i) + ")");
    }
  }
  for (std::size_t k = 0; k < expected; ++k) {
    if (dist_[k] < 0.0 || travel_[k] < 0) {
      throw InstanceError("travel model entries must be nonnegative");
    }
  }
}

std::optional<FactoryIndex> Instance::find_factory(const std::string& fid) const {
  auto it = factory_by_id_.find(fid);
  if (it == factory_by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<OrderIndex> Instance::find_order(const std::string& oid) const {
  auto it = order_by_id_.find(oid);
  if (it == order_by_id_.end()) return std::nullopt;
  return it->second;
}

void Instance::finalize() {
  if (factories.empty()) throw InstanceError("instance has no factories");
  if (vehicles.empty()) throw InstanceError("instance has no vehicles");
  if (travel.factory_count() != factory_count()) {
    throw InstanceError("travel model size does not match factory count");
  }
  if (params.capacity <= 0) throw InstanceError("capacity must be positive");
  if (params.epoch_s <= 0) throw InstanceError("epoch length must be positive");
  if (params.dock_s < 0) throw InstanceError("dock approach time must be nonnegative");
  if (params.lambda1 < 0.0 || params.lambda2 <= 0.0) {
    throw InstanceError("lambda1 must be >= 0 and lambda2 > 0");
  }
  if (params.lambda3 < 0.0 || params.lambda4 < 0.0) {
    throw InstanceError("lambda3 and lambda4 must be nonnegative");
  }

  factory_by_id_.clear();
  for (std::size_t i = 0; i < factories.size(); ++i) {
    const auto& f = factories[i];
    if (f.ports < 1) throw InstanceError("factory " + f.id + " must have at least one port");
    if (!factory_by_id_.emplace(f.id, static_cast<FactoryIndex>(i)).second) {
      throw InstanceError("duplicate factory id " + f.id);
    }
  }
  for (const auto& v : vehicles) {
    if (v.start < 0 || v.start >= factory_count()) {
      throw InstanceError("vehicle " + v.id + " starts at unknown factory");
    }
  }
  if (!std::is_sorted(orders.begin(), orders.end(),
                      [](const Order& a, const Order& b) { return a.release < b.release; })) {
    std::stable_sort(orders.begin(), orders.end(),
                     [](const Order& a, const Order& b) { return a.release < b.release; });
  }
  order_by_id_.clear();
  for (std::size_t i = 0; i < orders.size(); ++i) {
    const auto& o = orders[i];
    if (o.pickup < 0 || o.pickup >= factory_count() || o.delivery < 0 ||
        o.delivery >= factory_count()) {
      throw InstanceError("order " + o.id + " references an unknown factory");
    }
    if (o.pickup == o.delivery) {
      throw InstanceError("order " + o.id + " has identical pickup and delivery factory");
    }
    if (o.release >= o.due) throw InstanceError("order " + o.id + " must have release < due");
    if (o.quantity <= 0) throw InstanceError("order " + o.id + " must have positive quantity");
    if (o.quantity > params.capacity) {
      throw InstanceError("order " + o.id + " exceeds vehicle capacity after splitting");
    }
    if (!order_by_id_.emplace(o.id, static_cast<OrderIndex>(i)).second) {
      throw InstanceError("duplicate order id " + o.id);
    }
  }
}

Seconds service_seconds(const Instance& inst, std::span<const OrderIndex> deliveries,
                        std::span<const OrderIndex> pickups) {
  Seconds s = inst.params.dock_s;
  for (OrderIndex i : deliveries) s += inst.order(i).unload_s;
  for (OrderIndex i : pickups) s += inst.order(i).load_s;
  return s;
}

Seconds estimated_delay(const Instance& inst, OrderIndex order, Seconds now) {
  const Order& o = inst.order(order);
  const Seconds minimum = inst.params.dock_s + o.load_s + inst.travel.travel(o.pickup, o.delivery);
  return (o.due - now) - minimum;
}

std::vector<Order> split_order(const OrderDraft& draft, Quarters capacity) {
  Quarters total = 0;
  Seconds handling_total = 0;
  for (const auto& item : draft.items) {
    if (item.size <= 0) throw InstanceError("order " + draft.id + " has a non-positive item size");
    if (item.size > capacity) {
      throw InstanceError("order " + draft.id + " contains an item larger than the capacity");
    }
    total += item.size;
    handling_total += item.handling;
  }
  if (draft.items.empty()) throw InstanceError("order " + draft.id + " has no items");

  auto make_order = [&](const std::string& id, Quarters quantity, Seconds handling,
                        std::optional<std::string> parent) {
    Order o;
    o.id = id;
    o.pickup = draft.pickup;
    o.delivery = draft.delivery;
    o.release = draft.release;
    o.due = draft.due;
    o.quantity = quantity;
    o.load_s = handling;
    o.unload_s = handling;
    o.parent = std::move(parent);
    return o;
  };

  if (total <= capacity) {
    return {make_order(draft.id, total, handling_total, std::nullopt)};
  }

  // First fit with items in non-increasing size order (stable, so equal sizes
  // keep their input order).
  std::vector<std::size_t> idx(draft.items.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return draft.items[a].size > draft.items[b].size;
  });

  struct Bin {
    Quarters sum = 0;
    Seconds handling = 0;
  };
  std::vector<Bin> bins;
  for (std::size_t k : idx) {
    const auto& item = draft.items[k];
    bool placed = false;
    for (auto& bin : bins) {
      if (bin.sum + item.size <= capacity) {
        bin.sum += item.size;
        bin.handling += item.handling;
        placed = true;
        break;
      }
    }
    if (!placed) bins.push_back({item.size, item.handling});
  }

  std::vector<Order> fragments;
  fragments.reserve(bins.size());
  for (std::size_t b = 0; b < bins.size(); ++b) {
    fragments.push_back(make_order(draft.id + "#" + std::to_string(b + 1), bins[b].sum,
                                   bins[b].handling, draft.id));
  }
  return fragments;
}

Quarters parse_quarters(const std::string& text) {
  const auto bad = [&]() -> InstanceError {
    return InstanceError("quantity '" + text + "' is not a nonnegative multiple of 0.25");
  };
  if (text.empty()) throw bad();
  std::size_t dot = text.find('.');
  const std::string whole = dot == std::string::npos ? text : text.substr(0, dot);
  const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
  if (whole.empty() && frac.empty()) throw bad();
  long long units = 0;
  for (char c : whole) {
    if (c < '0' || c > '9') throw bad();
    units = units * 10 + (c - '0');
    if (units > (1LL << 30)) throw bad();
  }
  long long quarters = units * 4;
  if (!frac.empty()) {
    // Accept up to two significant fractional digits; .25 steps only.
    std::string f = frac;
    while (f.size() < 2) f += '0';
    for (char c : f) {
      if (c < '0' || c > '9') throw bad();
    }
    if (f.size() > 2 && f.find_first_not_of('0', 2) != std::string::npos) throw bad();
    const int cents = (f[0] - '0') * 10 + (f[1] - '0');
    if (cents % 25 != 0) throw bad();
    quarters += cents / 25;
  }
  return static_cast<Quarters>(quarters);
}

std::string format_quarters(Quarters q) {
  static const char* kFrac[] = {"", ".25", ".5", ".75"};
  std::string s = std::to_string(q / 4);
  s += kFrac[q % 4];
  return s;
}

}  // namespace dpdp
