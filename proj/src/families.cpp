#include "vrpdr/families.hpp"

#include <algorithm>

namespace vrpdr::family {

std::vector<std::string_view> charging_only() {
    return {depot_no_charge_drone, depot_no_charge_robot, charge_gate_drone, charge_gate_robot,
            charge_time,           charge_rate_drone,     charge_rate_robot, overcharge_drone,
            overcharge_robot,      charge_aboard_drone,   charge_aboard_robot};
}

std::vector<std::string_view> registered(const ModelOptions& options) {
    std::vector<std::string_view> all = {
        makespan_truck,          makespan_drone,          makespan_robot,
        visit_once,              depot_start_end,         flow_conservation,
        subtour_mtz,             launch_presence_drone,   recovery_presence_drone,
        launch_presence_robot,   recovery_presence_robot, precedence_drone,
        precedence_robot,        payload_drone,           payload_robot,
        range_drone,             range_robot,             sortie_capacity,
        energy_drone,            robot_energy_linearization, unreachable_arcs,
        depot_full_charge_drone, depot_full_charge_robot, depot_no_charge_drone,
        depot_no_charge_robot,   charge_gate_drone,       charge_gate_robot,
        battery_balance_drone,   battery_balance_robot,   charge_time,
        charge_rate_drone,       charge_rate_robot,       overcharge_drone,
        overcharge_robot,        truck_sequencing,        launch_sync_drone,
        launch_sync_robot,       return_sync_drone,       return_sync_robot,
        itinerary_drone,         itinerary_robot,         battery_level_drone,
        battery_level_robot,     charge_aboard_drone,     charge_aboard_robot,
    };
    if (!options.charging) {
        const auto drop = charging_only();
        std::erase_if(all, [&](std::string_view f) { return std::find(drop.begin(), drop.end(), f) != drop.end(); });
    }
    if (options.single_trip) {
        all.push_back(single_trip_drone);
        all.push_back(single_trip_robot);
    }
    if (options.fixed_docking) all.push_back(fixed_docking);
    return all;
}

}  // namespace vrpdr::family
