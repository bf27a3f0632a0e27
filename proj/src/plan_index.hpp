#pragma once

#include <optional>
#include <vector>

#include "vrpdr/core.hpp"

namespace vrpdr::detail {

// Route positions per truck. The depot resolves to position 0 when used as a
// launch node and to the final position when used as a recovery node.
class PlanIndex {
public:
    PlanIndex(const Plan& plan, int num_nodes) : routes_(&plan.truck_routes) {
        pos_.resize(plan.truck_routes.size());
        for (std::size_t t = 0; t < plan.truck_routes.size(); ++t) {
            pos_[t].assign(static_cast<std::size_t>(num_nodes), -1);
            const auto& r = plan.truck_routes[t];
            for (std::size_t p = 0; p < r.size(); ++p) {
                const int v = r[p];
                if (v > 0 && v < num_nodes && pos_[t][static_cast<std::size_t>(v)] < 0)
                    pos_[t][static_cast<std::size_t>(v)] = static_cast<int>(p);
            }
        }
    }

    int num_trucks() const { return static_cast<int>(pos_.size()); }
    const std::vector<int>& route(int t) const { return (*routes_)[static_cast<std::size_t>(t)]; }

    // Truck leaves the depot towards a customer (sum_j x_0j = 1).
    bool used(int t) const {
        const auto& r = route(t);
        return r.size() >= 3 && r.front() == 0 && r[1] != 0;
    }

    std::optional<int> customer_pos(int t, int v) const {
        if (t < 0 || t >= num_trucks() || v <= 0 || v >= static_cast<int>(pos_[static_cast<std::size_t>(t)].size()))
            return std::nullopt;
        const int p = pos_[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)];
        if (p < 0) return std::nullopt;
        return p;
    }

    std::optional<int> launch_pos(int t, int v) const {
        if (t < 0 || t >= num_trucks()) return std::nullopt;
        if (v == 0) return used(t) ? std::optional<int>(0) : std::nullopt;
        return customer_pos(t, v);
    }

    std::optional<int> recovery_pos(int t, int v) const {
        if (t < 0 || t >= num_trucks()) return std::nullopt;
        if (v == 0) {
            const auto& r = route(t);
            if (!used(t) || r.back() != 0) return std::nullopt;
            return static_cast<int>(r.size()) - 1;
        }
        return customer_pos(t, v);
    }

private:
    const std::vector<std::vector<int>>* routes_;
    std::vector<std::vector<int>> pos_;
};

}  // namespace vrpdr::detail
