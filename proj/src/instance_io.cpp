#include "dpdp/instance_io.hpp"

#include <fstream>

namespace dpdp {

namespace {

using nlohmann::json;

Seconds default_handling(Quarters size) {
  switch (size) {
    case 1: return 15;   // box
    case 2: return 30;   // small pallet
    case 4: return 60;   // standard pallet
    default: return -1;
  }
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InstanceError(where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

}  // namespace

Instance instance_from_json(const json& doc, const std::string& id) {
  if (!doc.is_object()) fail("instance", "top level must be an object");
  Instance inst;
  inst.id = doc.value("id", id);

  const json& jfactories = require(doc, "factories", "instance");
  if (!jfactories.is_array() || jfactories.empty()) fail("factories", "must be a nonempty array");
  for (std::size_t i = 0; i < jfactories.size(); ++i) {
    const std::string where = "factories[" + std::to_string(i) + "]";
    const json& jf = jfactories[i];
    Factory f;
    f.id = require(jf, "id", where).get<std::string>();
    f.ports = jf.value("ports", 1);
    if (f.ports < 1) fail(where, "ports must be >= 1");
    inst.factories.push_back(std::move(f));
  }
  const int n = inst.factory_count();

  const json& jtravel = require(doc, "travel", "instance");
  auto load_matrix = [&](const char* key, auto& flat, auto cast) {
    const json& rows = require(jtravel, key, "travel");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
      fail(std::string("travel.") + key, "expected " + std::to_string(n) + " rows");
    }
    for (int r = 0; r < n; ++r) {
      const json& row = rows[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<int>(row.size()) != n) {
        fail(std::string("travel.") + key + "[" + std::to_string(r) + "]",
             "expected " + std::to_string(n) + " entries");
      }
      for (int c = 0; c < n; ++c) {
        const json& cell = row[static_cast<std::size_t>(c)];
        if (!cell.is_number()) {
          fail(std::string("travel.") + key + "[" + std::to_string(r) + "]",
               "entries must be numbers");
        }
        flat.push_back(cast(cell));
      }
    }
  };
  std::vector<double> dist;
  std::vector<Seconds> time;
  load_matrix("distance", dist, [](const json& c) { return c.get<double>(); });
  load_matrix("time", time, [](const json& c) { return static_cast<Seconds>(c.get<double>()); });
  inst.travel = TravelModel(n, std::move(dist), std::move(time));

  auto factory_index = [&](const std::string& fid, const std::string& where) {
    for (int i = 0; i < n; ++i) {
      if (inst.factories[static_cast<std::size_t>(i)].id == fid) return static_cast<FactoryIndex>(i);
    }
    fail(where, "unknown factory '" + fid + "'");
  };

  const json& jvehicles = require(doc, "vehicles", "instance");
  if (!jvehicles.is_array() || jvehicles.empty()) fail("vehicles", "must be a nonempty array");
  for (std::size_t i = 0; i < jvehicles.size(); ++i) {
    const std::string where = "vehicles[" + std::to_string(i) + "]";
    const json& jv = jvehicles[i];
    Vehicle v;
    v.id = require(jv, "id", where).get<std::string>();
    v.start = factory_index(require(jv, "factory", where).get<std::string>(), where);
    inst.vehicles.push_back(std::move(v));
  }

  if (auto it = doc.find("params"); it != doc.end()) {
    const json& jp = *it;
    if (jp.contains("capacity")) inst.params.capacity = parse_quarters(jp["capacity"].get<std::string>());
    inst.params.dock_s = jp.value("dock_seconds", inst.params.dock_s);
    inst.params.epoch_s = jp.value("epoch_seconds", inst.params.epoch_s);
    inst.params.urgency_s = jp.value("urgency_seconds", inst.params.urgency_s);
    inst.params.lambda1 = jp.value("lambda1", inst.params.lambda1);
    inst.params.lambda2 = jp.value("lambda2", inst.params.lambda2);
    inst.params.lambda3 = jp.value("lambda3", inst.params.lambda3);
    inst.params.lambda4 = jp.value("lambda4", inst.params.lambda4);
  }

  const json& jorders = require(doc, "orders", "instance");
  if (!jorders.is_array()) fail("orders", "must be an array");
  for (std::size_t i = 0; i < jorders.size(); ++i) {
    const std::string where = "orders[" + std::to_string(i) + "]";
    const json& jo = jorders[i];
    OrderDraft draft;
    draft.id = require(jo, "id", where).get<std::string>();
    draft.pickup = factory_index(require(jo, "pickup", where).get<std::string>(), where);
    draft.delivery = factory_index(require(jo, "delivery", where).get<std::string>(), where);
    draft.release = require(jo, "release", where).get<Seconds>();
    draft.due = require(jo, "due", where).get<Seconds>();
    const json& jitems = require(jo, "items", where);
    if (!jitems.is_array() || jitems.empty()) fail(where + ".items", "must be a nonempty array");
    for (std::size_t k = 0; k < jitems.size(); ++k) {
      const std::string iw = where + ".items[" + std::to_string(k) + "]";
      const json& ji = jitems[k];
      OrderItem item;
      item.size = parse_quarters(require(ji, "size", iw).get<std::string>());
      item.handling = ji.value("handling", default_handling(item.size));
      if (item.handling < 0) fail(iw, "handling seconds required for non-standard item size");
      const int count = ji.value("count", 1);
      if (count < 1) fail(iw, "count must be >= 1");
      for (int c = 0; c < count; ++c) draft.items.push_back(item);
    }
    std::vector<Order> fragments = split_order(draft, inst.params.capacity);
    // A re-serialized fragment keeps its original parent.
    if (fragments.size() == 1 && jo.contains("parent")) {
      fragments.front().parent = jo["parent"].get<std::string>();
    }
    for (Order& fragment : fragments) inst.orders.push_back(std::move(fragment));
  }

  inst.finalize();
  return inst;
}

nlohmann::json instance_to_json(const Instance& inst) {
  json doc;
  doc["id"] = inst.id;
  for (const Factory& f : inst.factories) {
    doc["factories"].push_back({{"id", f.id}, {"ports", f.ports}});
  }
  const int n = inst.factory_count();
  json dist = json::array();
  json time = json::array();
  for (int r = 0; r < n; ++r) {
    json drow = json::array();
    json trow = json::array();
    for (int c = 0; c < n; ++c) {
      drow.push_back(inst.travel.dist(r, c));
      trow.push_back(inst.travel.travel(r, c));
    }
    dist.push_back(std::move(drow));
    time.push_back(std::move(trow));
  }
  doc["travel"] = {{"distance", std::move(dist)}, {"time", std::move(time)}};
  for (const Vehicle& v : inst.vehicles) {
    doc["vehicles"].push_back(
        {{"id", v.id}, {"factory", inst.factory(v.start).id}});
  }
  // Orders are emitted post-split as single items, which reloads unchanged.
  for (const Order& o : inst.orders) {
    json jo = {{"id", o.id},
               {"pickup", inst.factory(o.pickup).id},
               {"delivery", inst.factory(o.delivery).id},
               {"release", o.release},
               {"due", o.due},
               {"items", json::array({{{"size", format_quarters(o.quantity)},
                                       {"handling", o.load_s}}})}};
    if (o.parent) jo["parent"] = *o.parent;
    doc["orders"].push_back(std::move(jo));
  }
  doc["params"] = {{"capacity", format_quarters(inst.params.capacity)},
                   {"dock_seconds", inst.params.dock_s},
                   {"epoch_seconds", inst.params.epoch_s},
                   {"urgency_seconds", inst.params.urgency_s},
                   {"lambda1", inst.params.lambda1},
                   {"lambda2", inst.params.lambda2},
                   {"lambda3", inst.params.lambda3},
                   {"lambda4", inst.params.lambda4}};
  return doc;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InstanceError("cannot open instance file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw InstanceError("instance file " + path.string() + " is not valid JSON: " + e.what());
  }
  return instance_from_json(doc, path.stem().string());
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InstanceError("cannot write instance file " + path.string());
  out << instance_to_json(inst).dump(2) << "\n";
}

}  // namespace dpdp
