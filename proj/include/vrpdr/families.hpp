#pragma once

#include <string_view>
#include <vector>

#include "vrpdr/core.hpp"

// Constraint-family names shared by the model builder and the validator.
namespace vrpdr::family {

inline constexpr std::string_view makespan_truck = "makespan_truck";
inline constexpr std::string_view makespan_drone = "makespan_drone";
inline constexpr std::string_view makespan_robot = "makespan_robot";
inline constexpr std::string_view visit_once = "visit_once";
inline constexpr std::string_view depot_start_end = "depot_start_end";
inline constexpr std::string_view flow_conservation = "flow_conservation";
inline constexpr std::string_view subtour_mtz = "subtour_mtz";
inline constexpr std::string_view launch_presence_drone = "launch_presence_drone";
inline constexpr std::string_view recovery_presence_drone = "recovery_presence_drone";
inline constexpr std::string_view launch_presence_robot = "launch_presence_robot";
inline constexpr std::string_view recovery_presence_robot = "recovery_presence_robot";
inline constexpr std::string_view precedence_drone = "precedence_drone";
inline constexpr std::string_view precedence_robot = "precedence_robot";
inline constexpr std::string_view payload_drone = "payload_drone";
inline constexpr std::string_view payload_robot = "payload_robot";
inline constexpr std::string_view range_drone = "range_drone";
inline constexpr std::string_view range_robot = "range_robot";
inline constexpr std::string_view sortie_capacity = "sortie_capacity";
inline constexpr std::string_view energy_drone = "energy_drone";
inline constexpr std::string_view robot_energy_linearization = "robot_energy_linearization";
inline constexpr std::string_view unreachable_arcs = "unreachable_arcs";
inline constexpr std::string_view depot_full_charge_drone = "depot_full_charge_drone";
inline constexpr std::string_view depot_full_charge_robot = "depot_full_charge_robot";
inline constexpr std::string_view depot_no_charge_drone = "depot_no_charge_drone";
inline constexpr std::string_view depot_no_charge_robot = "depot_no_charge_robot";
inline constexpr std::string_view charge_gate_drone = "charge_gate_drone";
inline constexpr std::string_view charge_gate_robot = "charge_gate_robot";
inline constexpr std::string_view battery_balance_drone = "battery_balance_drone";
inline constexpr std::string_view battery_balance_robot = "battery_balance_robot";
inline constexpr std::string_view charge_time = "charge_time";
inline constexpr std::string_view charge_rate_drone = "charge_rate_drone";
inline constexpr std::string_view charge_rate_robot = "charge_rate_robot";
inline constexpr std::string_view overcharge_drone = "overcharge_drone";
inline constexpr std::string_view overcharge_robot = "overcharge_robot";
inline constexpr std::string_view truck_sequencing = "truck_sequencing";
inline constexpr std::string_view launch_sync_drone = "launch_sync_drone";
inline constexpr std::string_view launch_sync_robot = "launch_sync_robot";
inline constexpr std::string_view return_sync_drone = "return_sync_drone";
inline constexpr std::string_view return_sync_robot = "return_sync_robot";
inline constexpr std::string_view itinerary_drone = "itinerary_drone";
inline constexpr std::string_view itinerary_robot = "itinerary_robot";
inline constexpr std::string_view battery_level_drone = "battery_level_drone";
inline constexpr std::string_view battery_level_robot = "battery_level_robot";
inline constexpr std::string_view charge_aboard_drone = "charge_aboard_drone";
inline constexpr std::string_view charge_aboard_robot = "charge_aboard_robot";
inline constexpr std::string_view single_trip_drone = "single_trip_drone";
inline constexpr std::string_view single_trip_robot = "single_trip_robot";
inline constexpr std::string_view fixed_docking = "fixed_docking";

inline std::string_view by_kind(VehicleKind kind, std::string_view drone, std::string_view robot) {
    return kind == VehicleKind::drone ? drone : robot;
}

// Families present in a model built with these options, in emission order.
std::vector<std::string_view> registered(const ModelOptions& options);

// Families that exist only while en-route charging is enabled.
std::vector<std::string_view> charging_only();

}  // namespace vrpdr::family
