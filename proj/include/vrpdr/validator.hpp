#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vrpdr/core.hpp"

namespace vrpdr::validator {

inline constexpr double kTimeTolerance = 1e-6;    // h
inline constexpr double kEnergyTolerance = 1e-6;  // energy units

struct Violation {
    std::string constraint_family;
    std::string detail;
    std::vector<int> involved_ids;
};

struct ValidationReport {
    bool feasible = true;
    std::vector<Violation> violations;
    double model_makespan = 0.0;
    double simulated_makespan = 0.0;
    std::vector<BatteryLedger> battery_ledgers;
};

/// Checks every constraint family. Throws StructuralError for dangling ids
/// or arrival lists that do not line up with their routes.
ValidationReport validate(const Plan& plan, const Instance& inst, const FleetSpec& fleet,
                          const ModelOptions& options);

/// Max over trucks of route travel time and over vehicles of summed flight time.
double model_makespan(const Plan& plan, const Instance& inst, const FleetSpec& fleet);

/// Replays the plan with trucks waiting at recovery nodes for their sorties
/// and returns the last depot return.
double simulated_makespan(const Plan& plan, const Instance& inst, const FleetSpec& fleet);

/// Ordering values u for every node (u[0] unused) satisfying the MTZ arcs of
/// the routes and u_k >= u_i + 1 for every sortie between customers, or
/// nullopt when no such assignment exists.
std::optional<std::vector<double>> precedence_potentials(const Plan& plan, const Instance& inst);

nlohmann::ordered_json report_to_json(const ValidationReport& report);

}  // namespace vrpdr::validator
