#include "dpdp/generator.hpp"

#include <algorithm>
#include <cmath>

namespace dpdp {

namespace {

// Minimal splitmix64-based sampler; keeps generated instances identical
// across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double gauss() {
    // Box-Muller; fine for release-time bursts.
    const double u1 = std::max(uniform(), 1e-12);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

private:
  std::uint64_t state_;
};

struct Point {
  double x, y;
};

TravelModel travel_from_points(const std::vector<Point>& pts, double speed_mps) {
  const int n = static_cast<int>(pts.size());
  std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<Seconds> time(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dx = pts[i].x - pts[j].x;
      const double dy = pts[i].y - pts[j].y;
      const double meters = std::sqrt(dx * dx + dy * dy);
      dist[static_cast<std::size_t>(i) * n + j] = meters / 1000.0;  // km
      time[static_cast<std::size_t>(i) * n + j] =
          static_cast<Seconds>(std::llround(meters / speed_mps));
    }
  }
  return TravelModel(n, std::move(dist), std::move(time));
}

OrderItem sample_item(Rng& rng, const GeneratorSpec& spec) {
  const double total = spec.weight_box + spec.weight_small + spec.weight_standard;
  const double r = rng.uniform() * total;
  if (r < spec.weight_box) return {1, 15};
  if (r < spec.weight_box + spec.weight_small) return {2, 30};
  return {4, 60};
}

}  // namespace

Instance generate(const GeneratorSpec& spec) {
  if (spec.factory_count < 2) throw InstanceError("generator needs at least two factories");
  if (spec.vehicle_count < 1 || spec.order_count < 0) {
    throw InstanceError("generator needs vehicles and a nonnegative order count");
  }
  Rng rng(spec.seed);
  Instance inst;
  inst.id = spec.id;

  std::vector<Point> pts;
  for (int f = 0; f < spec.factory_count; ++f) {
    inst.factories.push_back({"f" + std::to_string(f), spec.port_count});
    pts.push_back({rng.uniform(0.0, spec.box_m), rng.uniform(0.0, spec.box_m)});
  }
  inst.travel = travel_from_points(pts, spec.speed_mps);

  for (int v = 0; v < spec.vehicle_count; ++v) {
    inst.vehicles.push_back({"v" + std::to_string(v),
                             static_cast<FactoryIndex>(rng.uniform_int(0, spec.factory_count - 1))});
  }

  for (int i = 0; i < spec.order_count; ++i) {
    OrderDraft draft;
    draft.id = "o" + std::to_string(i);
    draft.pickup = static_cast<FactoryIndex>(rng.uniform_int(0, spec.factory_count - 1));
    do {
      draft.delivery = static_cast<FactoryIndex>(rng.uniform_int(0, spec.factory_count - 1));
    } while (draft.delivery == draft.pickup);

    Seconds release = 0;
    if (spec.temporal == TemporalModel::Uniform) {
      release = static_cast<Seconds>(rng.uniform_int(0, spec.planning_horizon_s));
    } else {
      // Two bursts around 25% and 70% of the horizon.
      const double h = static_cast<double>(spec.planning_horizon_s);
      const double center = rng.uniform() < 0.5 ? 0.25 * h : 0.70 * h;
      const double t = center + rng.gauss() * h / 12.0;
      release = static_cast<Seconds>(std::llround(std::clamp(t, 0.0, h)));
    }
    draft.release = release;
    draft.due = release + spec.due_offset_s;

    const int items = static_cast<int>(rng.uniform_int(1, spec.max_items_per_order));
    for (int k = 0; k < items; ++k) draft.items.push_back(sample_item(rng, spec));

    for (Order& fragment : split_order(draft, inst.params.capacity)) {
      inst.orders.push_back(std::move(fragment));
    }
  }

  inst.finalize();
  return inst;
}

Instance congested_preset(std::uint64_t seed) {
  Rng rng(seed);
  Instance inst;
  inst.id = "congested-" + std::to_string(seed);

  // Hub with one port, five spokes on a ring far enough apart that serving
  // each spoke from the hub is shorter than hopping between spokes.
  const int spokes = 5;
  const double radius_m = 10000.0;
  std::vector<Point> pts;
  inst.factories.push_back({"hub", 1});
  pts.push_back({0.0, 0.0});
  for (int s = 0; s < spokes; ++s) {
    const double angle =
        2.0 * 3.14159265358979323846 * (static_cast<double>(s) + rng.uniform(-0.05, 0.05)) /
        spokes;
    inst.factories.push_back({"s" + std::to_string(s), 6});
    pts.push_back({radius_m * std::cos(angle), radius_m * std::sin(angle)});
  }
  inst.travel = travel_from_points(pts, 10.0);

  for (int v = 0; v < 6; ++v) inst.vehicles.push_back({"v" + std::to_string(v), 0});

  // Two waves of one order per spoke, pickup at the hub, loose due dates so
  // queueing never becomes a tardiness problem by itself.
  int oid = 0;
  auto add_wave = [&](Seconds base) {
    for (int s = 0; s < spokes; ++s) {
      OrderDraft draft;
      draft.id = "o" + std::to_string(oid++);
      draft.pickup = 0;
      draft.delivery = static_cast<FactoryIndex>(1 + s);
      draft.release = base + rng.uniform_int(0, 120);
      draft.due = draft.release + 21600;
      draft.items.push_back({4, 60});
      for (Order& o : split_order(draft, inst.params.capacity)) {
        inst.orders.push_back(std::move(o));
      }
    }
  };
  add_wave(0);
  add_wave(5400);

  inst.params.lambda3 = 0.0;  // the sweep under test sets it
  inst.params.lambda4 = 0.0;
  inst.finalize();
  return inst;
}

Instance sparse_preset(std::uint64_t seed) {
  Rng rng(seed);
  Instance inst;
  inst.id = "sparse-" + std::to_string(seed);

  // p with two delivery factories 12 km out and 4 km apart: consolidating
  // both early orders on one vehicle is distance-cheaper than spreading.
  std::vector<Point> pts = {{0.0, 0.0}, {12000.0, -2000.0}, {12000.0, 2000.0}};
  inst.factories.push_back({"p", 6});
  inst.factories.push_back({"a", 6});
  inst.factories.push_back({"b", 6});
  inst.travel = travel_from_points(pts, 10.0);

  inst.vehicles.push_back({"v0", 0});
  inst.vehicles.push_back({"v1", 0});

  int oid = 0;
  auto add_order = [&](FactoryIndex pickup, FactoryIndex delivery, Seconds release, Seconds window) {
    OrderDraft draft;
    draft.id = "o" + std::to_string(oid++);
    draft.pickup = pickup;
    draft.delivery = delivery;
    draft.release = release + rng.uniform_int(0, 60);
    draft.due = draft.release + window;
    draft.items.push_back({4, 60});
    for (Order& o : split_order(draft, inst.params.capacity)) {
      inst.orders.push_back(std::move(o));
    }
  };
  // Early outbound pair, generous windows.
  add_order(0, 1, 0, 21600);
  add_order(0, 2, 0, 21600);
  // Return hauls released shortly after, tight enough that one busy chain
  // cannot cover both sides in time.
  add_order(1, 0, 1200, 7200);
  add_order(2, 0, 1500, 7200);

  inst.params.lambda4 = 0.0;  // the comparison under test sets it
  inst.finalize();
  return inst;
}

}  // namespace dpdp
