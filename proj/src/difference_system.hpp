#pragma once

#include <optional>
#include <vector>

namespace vrpdr::detail {

// System of constraints x_to - x_from <= w solved by Bellman-Ford from an
// implicit zero source. Edges can be tried one at a time and rolled back.
class DifferenceSystem {
public:
    explicit DifferenceSystem(int num_vars) : dist_(static_cast<std::size_t>(num_vars), 0.0), out_(dist_.size()) {}

    int size() const { return static_cast<int>(dist_.size()); }

    // Adds x_to - x_from <= w; returns false (and leaves the system untouched)
    // when the addition makes it infeasible.
    bool try_add(int from, int to, double w) {
        out_[static_cast<std::size_t>(from)].push_back({to, w});
        if (relax_from_current()) return true;
        out_[static_cast<std::size_t>(from)].pop_back();
        return false;
    }

    const std::vector<double>& potentials() const { return dist_; }

private:
    struct Edge {
        int to;
        double w;
    };

    bool relax_from_current() {
        std::vector<double> d = dist_;
        const std::size_t n = d.size();
        for (std::size_t round = 0; round <= n; ++round) {
            bool changed = false;
            for (std::size_t u = 0; u < n; ++u) {
                for (const Edge& e : out_[u]) {
                    const double cand = d[u] + e.w;
                    if (cand < d[static_cast<std::size_t>(e.to)] - 1e-12) {
                        d[static_cast<std::size_t>(e.to)] = cand;
                        changed = true;
                    }
                }
            }
            if (!changed) {
                dist_ = std::move(d);
                return true;
            }
        }
        return false;
    }

    std::vector<double> dist_;
    std::vector<std::vector<Edge>> out_;
};

}  // namespace vrpdr::detail
