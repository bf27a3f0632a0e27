#pragma once

#include <vector>

#include "vrpdr/core.hpp"

namespace vrpdr::finder {

using Routes = std::vector<std::vector<int>>;
// Per truck, route-aligned (node, arrival) pairs.
using Timeline = std::vector<std::vector<TimelineEntry>>;

/// A customer that neither a truck nor any sortie can serve.
class UnservedError : public Error {
public:
    UnservedError(const std::string& what, std::vector<int> ids) : Error(what), ids_(std::move(ids)) {}
    const std::vector<int>& ids() const { return ids_; }

private:
    std::vector<int> ids_;
};

struct VehicleState {
    VehicleKind kind = VehicleKind::drone;
    int id = 0;
    double available_from = 0.0;  // h
    int truck = -1;               // carrying truck, -1 while still at the depot
    int position = 0;             // route position where it boarded
    BatteryLedger ledger;
    std::vector<int> served;
};

struct Config {
    int nearest = 10;  // candidate pool size per launch
    // Reject sorties whose weighted cost exceeds the truck detour they save.
    bool cost_filter = false;
};

/// Nearest-neighbour construction: up to max(3, |C| / 2T) truck-reachable
/// customers per truck. Unused trucks get [0, 0].
Routes construct_truck_routes(const Instance& inst, const FleetSpec& fleet);

Timeline build_timeline(const Routes& routes, const Instance& inst, const FleetSpec& fleet);

std::vector<VehicleState> initial_states(const FleetSpec& fleet);

struct Assignment {
    std::vector<Sortie> sorties;  // acceptance order
    std::vector<VehicleState> states;
    std::vector<int> unserved;
};

/// Walks truck stops in time order and greedily launches each available
/// vehicle on the best feasible candidate sortie over nearby unserved customers.
Assignment assign_sorties(const Routes& routes, const Timeline& timeline, const std::vector<int>& unserved,
                          std::vector<VehicleState> states, const Instance& inst, const FleetSpec& fleet,
                          const ModelOptions& options, const Config& config = {});

struct ChargeSchedule {
    std::vector<ChargingEvent> events;
    std::vector<BatteryLedger> ledgers;
};

/// Charges every vehicle on each leg it rides (not the leg out of the depot)
/// at its rate for the leg duration, clamped at capacity.
ChargeSchedule apply_enroute_charging(const Routes& routes, const Timeline& timeline,
                                      const std::vector<Sortie>& sorties, const Instance& inst,
                                      const FleetSpec& fleet, const ModelOptions& options);

/// Inserts each customer at the (truck, position) with the smallest
/// Manhattan detour; ties go to the lower truck id, then position.
Routes insert_unserved(Routes routes, const std::vector<int>& unserved, const Instance& inst);

/// Manhattan detour of visiting c between a and b.
double insertion_delta(const Instance& inst, int a, int c, int b);

/// Full heuristic. Throws UnservedError for truck-unreachable customers left
/// without a sortie.
Plan solve_finder(const Instance& inst, const FleetSpec& fleet, const ModelOptions& options,
                  const Config& config = {});

}  // namespace vrpdr::finder
