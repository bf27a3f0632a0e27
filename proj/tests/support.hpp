#pragma once

#include <tuple>
#include <vector>

#include "vrpdr/core.hpp"
#include "vrpdr/finder.hpp"
#include "vrpdr/milp.hpp"

namespace vrpdr::testing {

struct C {
    double x, y, w;
    bool reachable = true;
};

// Depot at `depot`, customers numbered from 1 in the given order.
inline Instance make_instance(const std::vector<C>& customers, Point depot = {0.0, 0.0}) {
    Instance inst;
    inst.nodes.push_back(Node{0, depot, 0.0, true});
    int id = 1;
    for (const C& c : customers) inst.nodes.push_back(Node{id++, {c.x, c.y}, c.w, c.reachable});
    return inst;
}

inline FleetSpec truck_only(int trucks = 1) {
    FleetSpec f;
    f.num_trucks = trucks;
    f.num_drones = 0;
    f.num_robots = 0;
    return f;
}

// Arrivals from the no-wait timeline and the objective filled in.
inline Plan make_plan(const Instance& inst, const FleetSpec& fleet, std::vector<std::vector<int>> routes,
                      std::vector<Sortie> sorties = {}) {
    Plan p;
    p.truck_routes = std::move(routes);
    p.truck_arrivals = finder::build_timeline(p.truck_routes, inst, fleet);
    p.sorties = std::move(sorties);
    p.objective = milp::objective_value(p, inst, fleet);
    return p;
}

inline Sortie sortie(VehicleKind kind, int launch, std::vector<int> seq, int recovery, double launch_time,
                     int launch_truck = 0, int recovery_truck = 0, int id = 0) {
    Sortie s;
    s.vehicle_kind = kind;
    s.vehicle_id = id;
    s.launch_node = launch;
    s.recovery_node = recovery;
    s.sequence = std::move(seq);
    s.launch_truck = launch_truck;
    s.recovery_truck = recovery_truck;
    s.launch_time = launch_time;
    return s;
}

}  // namespace vrpdr::testing
