#pragma once

#include <limits>
#include <string>
#include <vector>

#include "dpdp/model.hpp"

namespace dpdp {

class DockingError : public std::runtime_error {
public:
  explicit DockingError(const std::string& msg) : std::runtime_error(msg) {}
};

// First-come-first-served docking queue of one factory with c ports.
// Entries are the vehicles currently at the factory, sorted by earliest
// departure; an arriving vehicle with all ports taken waits for the
// (k-c+1)-th departure. Callers must release vehicles when they depart and
// feed events in nondecreasing time order.
class ReservationList {
public:
  ReservationList(FactoryIndex factory, int ports);

  struct Entry {
    VehicleIndex vehicle;
    Seconds departure;
  };

  struct ServiceSlot {
    Seconds waiting = 0;
    Seconds departure = 0;
  };

  // Vehicle arrives at `arrival` needing `service` seconds of dock time.
  ServiceSlot enqueue(VehicleIndex vehicle, Seconds arrival, Seconds service);

  // Reinserts a vehicle whose departure time was fixed earlier (evaluator
  // initialization of mid-service vehicles).
  void restore(VehicleIndex vehicle, Seconds departure);

  void release(VehicleIndex vehicle);

  bool contains(VehicleIndex vehicle) const;
  const std::vector<Entry>& entries() const { return entries_; }
  FactoryIndex factory() const { return factory_; }
  int ports() const { return ports_; }

private:
  void insert_sorted(VehicleIndex vehicle, Seconds departure);

  FactoryIndex factory_;
  int ports_;
  Seconds clock_ = std::numeric_limits<Seconds>::min();
  std::vector<Entry> entries_;
};

}  // namespace dpdp
