#include <doctest.h>

#include <random>

#include "dpdp/model.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dpdp;
using namespace dpdp::testing;

TEST_CASE("service time sums dock approach, unloads, loads") {
  // Two one-minute pickups after a two-minute dock approach.
  Instance demo = minutes_demo_instance();
  const OrderIndex o1 = *demo.find_order("o1");
  const OrderIndex o2 = *demo.find_order("o2");
  const std::vector<OrderIndex> pickups = {o2, o1};
  CHECK(service_seconds(demo, {}, pickups) == 4);

  Params p;
  p.dock_s = 1800;
  Instance empty = make_instance(2, 1, {0}, {}, 1.0, 100, p);
  CHECK(service_seconds(empty, {}, {}) == 1800);

  Instance items = make_instance(2, 1, {0},
                                 {{"box", 0, 1, 0, 100, 1, 15, 15},
                                  {"std", 0, 1, 0, 100, 4, 60, 60},
                                  {"small", 0, 1, 0, 100, 2, 30, 30}},
                                 1.0, 100, p);
  const std::vector<OrderIndex> dels = {*items.find_order("box"), *items.find_order("std")};
  const std::vector<OrderIndex> pks = {*items.find_order("small")};
  CHECK(service_seconds(items, dels, pks) == 1905);
}

TEST_CASE("estimated delay is slack against the fastest possible delivery") {
  Params p;
  p.dock_s = 1800;
  Instance inst =
      make_instance(2, 1, {0}, {{"o", 0, 1, 0, 14400, 4, 60, 60}}, 1.0, 3600, p);
  const OrderIndex o = *inst.find_order("o");
  CHECK(estimated_delay(inst, o, 0) == 14400 - (1800 + 60 + 3600));
  CHECK(estimated_delay(inst, o, 0) == 8940);

  // boundary: exactly zero slack
  Instance b = make_instance(2, 1, {0}, {{"o", 0, 1, 0, 5460, 4, 60, 60}}, 1.0, 3600, p);
  CHECK(estimated_delay(b, *b.find_order("o"), 0) == 0);

  Params p2;
  p2.dock_s = 1800;
  Instance neg =
      make_instance(2, 1, {0}, {{"o", 0, 1, 0, 3000, 4, 600, 600}}, 1.0, 1200, p2);
  CHECK(estimated_delay(neg, *neg.find_order("o"), 0) == -600);
}

TEST_CASE("estimated delay shifts one-for-one with the clock") {
  Params p;
  p.dock_s = 1800;
  Instance inst =
      make_instance(2, 1, {0}, {{"o", 0, 1, 0, 14400, 4, 60, 60}}, 1.0, 3600, p);
  const OrderIndex o = *inst.find_order("o");
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    const Seconds now = static_cast<Seconds>(rng() % 10000);
    const Seconds delta = static_cast<Seconds>(rng() % 5000);
    CHECK(estimated_delay(inst, o, now + delta) == estimated_delay(inst, o, now) - delta);
  }
}

TEST_CASE("service time is additive over disjoint pickup sets") {
  Params p;
  p.dock_s = 1800;
  Instance inst = make_instance(2, 1, {0},
                                {{"a", 0, 1, 0, 100, 1, 15, 15},
                                 {"b", 0, 1, 0, 100, 2, 30, 30},
                                 {"c", 0, 1, 0, 100, 4, 60, 60}},
                                1.0, 100, p);
  const std::vector<OrderIndex> a = {*inst.find_order("a")};
  const std::vector<OrderIndex> bc = {*inst.find_order("b"), *inst.find_order("c")};
  std::vector<OrderIndex> all = a;
  all.insert(all.end(), bc.begin(), bc.end());
  CHECK(service_seconds(inst, {}, all) ==
        service_seconds(inst, {}, a) + service_seconds(inst, {}, bc) - p.dock_s);
}

TEST_CASE("split keeps small orders whole") {
  OrderDraft draft{"o", 0, 1, 0, 14400, {}};
  // 14.75 units in mixed items
  for (int i = 0; i < 14; ++i) draft.items.push_back({4, 60});
  draft.items.push_back({3, 45});  // 0.75 as an explicit odd size
  auto result = split_order(draft, 60);
  REQUIRE(result.size() == 1);
  CHECK(result[0].id == "o");
  CHECK(result[0].quantity == 59);
  CHECK(!result[0].parent.has_value());
  CHECK(result[0].load_s == 14 * 60 + 45);
}

TEST_CASE("split divides twenty standard pallets into 15 + 5") {
  OrderDraft draft{"big", 0, 1, 0, 14400, {}};
  for (int i = 0; i < 20; ++i) draft.items.push_back({4, 60});
  auto result = split_order(draft, 60);
  REQUIRE(result.size() == 2);
  CHECK(result[0].quantity == 60);
  CHECK(result[1].quantity == 20);
  CHECK(result[0].parent == "big");
  CHECK(result[1].parent == "big");
  CHECK(result[0].id != result[1].id);
}

TEST_CASE("split places items first-fit in non-increasing size order") {
  OrderDraft draft{"mix", 0, 1, 0, 14400, {}};
  for (int i = 0; i < 10; ++i) draft.items.push_back({4, 60});
  for (int i = 0; i < 12; ++i) draft.items.push_back({2, 30});
  auto result = split_order(draft, 60);
  REQUIRE(result.size() == 2);
  CHECK(result[0].quantity == 60);  // 10 x 1.0 + 10 x 0.5
  CHECK(result[1].quantity == 4);   // 2 x 0.5
}

TEST_CASE("an unsplittable item is an instance error") {
  OrderDraft draft{"huge", 0, 1, 0, 14400, {{80, 60}}};
  CHECK_THROWS_AS(split_order(draft, 60), InstanceError);
}

TEST_CASE("split fragments partition the items and match the first-fit oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    OrderDraft draft{"o", 0, 1, 0, 14400, {}};
    const int items = 1 + static_cast<int>(rng() % 30);
    std::vector<Quarters> sizes;
    Quarters total = 0;
    for (int i = 0; i < items; ++i) {
      const Quarters size = (rng() % 3 == 0) ? 1 : (rng() % 2 == 0 ? 2 : 4);
      draft.items.push_back({size, size * 15});
      sizes.push_back(size);
      total += size;
    }
    auto result = split_order(draft, 60);
    Quarters sum = 0;
    Seconds handling = 0;
    for (const Order& o : result) {
      CHECK(o.quantity <= 60);
      sum += o.quantity;
      handling += o.load_s;
    }
    CHECK(sum == total);
    CHECK(handling == total * 15);
    if (total <= 60) {
      CHECK(result.size() == 1);
    } else {
      CHECK(static_cast<int>(result.size()) == first_fit_bin_count(sizes, 60));
    }
  }
}

TEST_CASE("quantity strings parse in quarter steps") {
  CHECK(parse_quarters("0.25") == 1);
  CHECK(parse_quarters("0.5") == 2);
  CHECK(parse_quarters("0.50") == 2);
  CHECK(parse_quarters("1.0") == 4);
  CHECK(parse_quarters("15") == 60);
  CHECK(parse_quarters("1.75") == 7);
  CHECK_THROWS_AS(parse_quarters("0.3"), InstanceError);
  CHECK_THROWS_AS(parse_quarters("abc"), InstanceError);
  CHECK_THROWS_AS(parse_quarters(""), InstanceError);
  CHECK(format_quarters(1) == "0.25");
  CHECK(format_quarters(60) == "15");
  CHECK(format_quarters(7) == "1.75");
}
