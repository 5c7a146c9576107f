#include "dpdp/docking.hpp"

#include <algorithm>
#include <limits>

namespace dpdp {

ReservationList::ReservationList(FactoryIndex factory, int ports)
    : factory_(factory), ports_(ports) {
  if (ports_ < 1) throw DockingError("factory needs at least one docking port");
}

void ReservationList::insert_sorted(VehicleIndex vehicle, Seconds departure) {
  // After equal departure times: earlier insertions keep their place.
  auto it = std::upper_bound(entries_.begin(), entries_.end(), departure,
                             [](Seconds d, const Entry& e) { return d < e.departure; });
  entries_.insert(it, Entry{vehicle, departure});
}

ReservationList::ServiceSlot ReservationList::enqueue(VehicleIndex vehicle, Seconds arrival,
                                                      Seconds service) {
  if (arrival < clock_) {
    throw DockingError("enqueue at " + std::to_string(arrival) + " before clock " +
                       std::to_string(clock_));
  }
  clock_ = arrival;
  if (contains(vehicle)) throw DockingError("vehicle already at factory");

  ServiceSlot slot;
  const int k = static_cast<int>(entries_.size());
  if (k < ports_) {
    slot.waiting = 0;
    slot.departure = arrival + service;
  } else {
    // Wait for the (k-c+1)-th smallest departure among present vehicles.
    const Seconds freed = entries_[static_cast<std::size_t>(k - ports_)].departure;
    if (freed < arrival) {
      throw DockingError("stale reservation entry; departed vehicles must be released");
    }
    slot.waiting = freed - arrival;
    slot.departure = freed + service;
  }
  insert_sorted(vehicle, slot.departure);
  return slot;
}

void ReservationList::restore(VehicleIndex vehicle, Seconds departure) {
  if (contains(vehicle)) throw DockingError("vehicle already at factory");
  insert_sorted(vehicle, departure);
}

void ReservationList::release(VehicleIndex vehicle) {
  auto it = std::find_if(entries_.begin(), entries_.end(),
                         [&](const Entry& e) { return e.vehicle == vehicle; });
  if (it == entries_.end()) throw DockingError("vehicle not present in reservation list");
  entries_.erase(it);
}

bool ReservationList::contains(VehicleIndex vehicle) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [&](const Entry& e) { return e.vehicle == vehicle; });
}

}  // namespace dpdp
