#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vrpdr/core.hpp"

namespace vrpdr::exact {

struct SearchBudget {
    int max_customers = 8;
    std::int64_t max_candidates = 200'000'000;
    double time_limit = 600.0;  // s

    void validate() const;  // ConfigurationError unless all positive
};

enum class Status { optimal, infeasible, budget_exceeded };

std::string_view to_string(Status status);

struct ExactResult {
    Status status = Status::infeasible;
    std::optional<Plan> plan;  // set when optimal
    double objective = 0.0;
    std::int64_t candidates = 0;  // labels and combinations examined
    std::string detail;
};

/// Exhaustive optimum over one-truck plans: every ordered truck tour, every
/// sortie chain per drone/robot, launches at the truck's arrival and the truck
/// waiting at recovery nodes. Supports 1 truck, at most 1 drone and 1 robot.
/// Throws ConfigurationError outside that fleet scope.
ExactResult solve_exact(const Instance& inst, const FleetSpec& fleet, const ModelOptions& options,
                        const SearchBudget& budget);

}  // namespace vrpdr::exact
