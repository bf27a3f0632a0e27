#include "vrpdr/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace vrpdr {

double manhattan_distance(Point a, Point b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

double euclidean_distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string_view to_string(VehicleKind kind) { return kind == VehicleKind::drone ? "drone" : "robot"; }

VehicleKind vehicle_kind_from_string(std::string_view text) {
    if (text == "drone") return VehicleKind::drone;
    if (text == "robot") return VehicleKind::robot;
    throw StructuralError("unknown vehicle kind '" + std::string(text) + "'");
}

void FleetSpec::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigurationError(std::string("fleet: ") + what);
    };
    require(num_trucks >= 0 && num_drones >= 0 && num_robots >= 0, "vehicle counts must be nonnegative");
    require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0,1]");
    require(m >= 1, "m must be at least 1");
    require(big_M > 0.0, "big_M must be positive");
    if (num_trucks > 0) require(s_t > 0.0, "truck speed must be positive");
    if (num_drones > 0) {
        require(s_d > 0.0 && rho_d > 0.0 && D_max_d > 0.0 && B_d > 0.0 && W_d > 0.0,
                "drone speed, payload, range, battery and weight must be positive");
        require(C_rate_d >= 0.0 && alpha_d >= 0.0, "drone charge rate and energy coefficient must be nonnegative");
    }
    if (num_robots > 0) {
        require(s_r > 0.0 && rho_r > 0.0 && D_max_r > 0.0 && B_r > 0.0 && W_r > 0.0,
                "robot speed, payload, range, battery and weight must be positive");
        require(C_rate_r >= 0.0 && g > 0.0 && l_leg > 0.0 && robot_energy_scale > 0.0,
                "robot charge rate, gravity, leg length and energy scale must be positive");
    }
}

std::string_view to_string(Mode mode) {
    switch (mode) {
        case Mode::to: return "to";
        case Mode::td: return "td";
        case Mode::tr: return "tr";
        case Mode::ef: return "ef";
    }
    return "ef";
}

Mode mode_from_string(std::string_view text) {
    if (text == "to" || text == "TO") return Mode::to;
    if (text == "td" || text == "TD") return Mode::td;
    if (text == "tr" || text == "TR") return Mode::tr;
    if (text == "ef" || text == "EF") return Mode::ef;
    throw ConfigurationError("unknown mode '" + std::string(text) + "'");
}

FleetSpec apply_mode(FleetSpec fleet, Mode mode) {
    if (mode == Mode::to || mode == Mode::tr) fleet.num_drones = 0;
    if (mode == Mode::to || mode == Mode::td) fleet.num_robots = 0;
    return fleet;
}

const Node& Instance::node(int id) const {
    if (!valid_id(id)) throw InvalidInstanceError("unknown node id " + std::to_string(id));
    return nodes[static_cast<std::size_t>(id)];
}

std::vector<int> Instance::customer_ids() const {
    std::vector<int> ids(static_cast<std::size_t>(std::max(0, num_customers())));
    std::iota(ids.begin(), ids.end(), 1);
    return ids;
}

void Instance::validate() const {
    if (nodes.empty()) throw InvalidInstanceError("instance has no depot");
    for (int i = 0; i < num_nodes(); ++i) {
        const Node& n = nodes[static_cast<std::size_t>(i)];
        if (n.id != i) throw InvalidInstanceError("node ids must be dense and ordered, got " + std::to_string(n.id));
        if (!std::isfinite(n.pos.x) || !std::isfinite(n.pos.y) || !std::isfinite(n.weight))
            throw InvalidInstanceError("non-finite data on node " + std::to_string(i));
        if (n.weight < 0.0) throw InvalidInstanceError("negative weight on node " + std::to_string(i));
    }
    if (nodes[0].weight != 0.0 || !nodes[0].truck_reachable)
        throw InvalidInstanceError("depot must have weight 0 and be truck reachable");
}

double truck_distance(const Instance& inst, const FleetSpec& fleet, int from, int to) {
    const Node& a = inst.node(from);
    const Node& b = inst.node(to);
    if (from != to && (!a.truck_reachable || !b.truck_reachable)) return fleet.big_M;
    return manhattan_distance(a.pos, b.pos);
}

double truck_travel_time(const Instance& inst, const FleetSpec& fleet, int from, int to) {
    return truck_distance(inst, fleet, from, to) / fleet.s_t;
}

double sortie_distance(VehicleKind kind, int launch, const std::vector<int>& sequence, int recovery,
                       const Instance& inst) {
    auto metric = kind == VehicleKind::drone ? euclidean_distance : manhattan_distance;
    double total = 0.0;
    Point prev_pos = inst.node(launch).pos;
    for (int c : sequence) {
        Point p = inst.node(c).pos;
        total += metric(prev_pos, p);
        prev_pos = p;
    }
    total += metric(prev_pos, inst.node(recovery).pos);
    return total;
}

double sortie_distance(const Sortie& s, const Instance& inst) {
    return sortie_distance(s.vehicle_kind, s.launch_node, s.sequence, s.recovery_node, inst);
}

double sortie_payload(const std::vector<int>& sequence, const Instance& inst) {
    double w = 0.0;
    for (int c : sequence) w += inst.node(c).weight;
    return w;
}

double BatteryLedger::level() const {
    double lvl = capacity;
    for (const auto& e : entries) lvl += e.delta;
    return lvl;
}

bool covers_customers_exactly_once(const Plan& plan, const Instance& inst) {
    std::vector<int> count(static_cast<std::size_t>(inst.num_nodes()), 0);
    auto bump = [&](int id) {
        if (id > 0 && id < inst.num_nodes()) ++count[static_cast<std::size_t>(id)];
    };
    for (const auto& route : plan.truck_routes)
        for (int v : route) bump(v);
    for (const auto& s : plan.sorties)
        for (int c : s.sequence) bump(c);
    for (int id = 1; id < inst.num_nodes(); ++id)
        if (count[static_cast<std::size_t>(id)] != 1) return false;
    return true;
}

std::vector<std::vector<int>> enumerate_sequences(std::vector<int> customers, int m) {
    std::sort(customers.begin(), customers.end());
    customers.erase(std::unique(customers.begin(), customers.end()), customers.end());
    std::vector<std::vector<int>> out;
    const int n = static_cast<int>(customers.size());
    std::vector<int> current;
    std::vector<char> used(customers.size(), 0);
    // Depth-first over each length separately keeps the (length, ids) order.
    for (int len = 1; len <= std::min(m, n); ++len) {
        auto rec = [&](auto&& self) -> void {
            if (static_cast<int>(current.size()) == len) {
                out.push_back(current);
                return;
            }
            for (int i = 0; i < n; ++i) {
                if (used[static_cast<std::size_t>(i)]) continue;
                used[static_cast<std::size_t>(i)] = 1;
                current.push_back(customers[static_cast<std::size_t>(i)]);
                self(self);
                current.pop_back();
                used[static_cast<std::size_t>(i)] = 0;
            }
        };
        rec(rec);
    }
    return out;
}

std::int64_t count_sequences(std::int64_t n, int m) {
    std::int64_t total = 0;
    std::int64_t perm = 1;
    for (int len = 1; len <= m && len <= n; ++len) {
        perm *= (n - len + 1);
        total += perm;
    }
    return total;
}

}  // namespace vrpdr
