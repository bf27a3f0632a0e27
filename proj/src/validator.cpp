#include "vrpdr/validator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "difference_system.hpp"
#include "plan_index.hpp"
#include "vrpdr/energy.hpp"
#include "vrpdr/families.hpp"

namespace vrpdr::validator {

namespace {

using detail::DifferenceSystem;
using detail::PlanIndex;

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(10);
    ss << v;
    return ss.str();
}

std::string describe(const Sortie& s) {
    std::ostringstream ss;
    ss << to_string(s.vehicle_kind) << ' ' << s.vehicle_id << " sortie " << s.launch_node << "->[";
    for (std::size_t i = 0; i < s.sequence.size(); ++i) ss << (i ? "," : "") << s.sequence[i];
    ss << "]->" << s.recovery_node << " (trucks " << s.launch_truck << "->" << s.recovery_truck << ")";
    return ss.str();
}

std::vector<int> sortie_ids(const Sortie& s) {
    std::vector<int> ids{s.launch_node};
    ids.insert(ids.end(), s.sequence.begin(), s.sequence.end());
    ids.push_back(s.recovery_node);
    return ids;
}

void check_structure(const Plan& plan, const Instance& inst, const FleetSpec& fleet) {
    auto node_ok = [&](int v) { return inst.valid_id(v); };
    if (static_cast<int>(plan.truck_routes.size()) != fleet.num_trucks)
        throw StructuralError("plan has " + std::to_string(plan.truck_routes.size()) + " routes for " +
                              std::to_string(fleet.num_trucks) + " trucks");
    if (plan.truck_arrivals.size() != plan.truck_routes.size())
        throw StructuralError("truck_arrivals must hold one list per route");
    for (std::size_t t = 0; t < plan.truck_routes.size(); ++t) {
        const auto& r = plan.truck_routes[t];
        const auto& a = plan.truck_arrivals[t];
        for (int v : r)
            if (!node_ok(v)) throw StructuralError("route " + std::to_string(t) + " references node " + std::to_string(v));
        if (a.size() != r.size()) throw StructuralError("arrivals of truck " + std::to_string(t) + " do not match route");
        for (std::size_t p = 0; p < r.size(); ++p)
            if (a[p].node != r[p])
                throw StructuralError("arrival list of truck " + std::to_string(t) + " is not aligned with its route");
    }
    for (const auto& s : plan.sorties) {
        if (s.vehicle_id < 0 || s.vehicle_id >= fleet.vehicle_count(s.vehicle_kind))
            throw StructuralError("sortie references unknown " + std::string(to_string(s.vehicle_kind)) + " " +
                                  std::to_string(s.vehicle_id));
        if (s.launch_truck < 0 || s.launch_truck >= fleet.num_trucks || s.recovery_truck < 0 ||
            s.recovery_truck >= fleet.num_trucks)
            throw StructuralError("sortie references an unknown truck");
        if (!node_ok(s.launch_node) || !node_ok(s.recovery_node))
            throw StructuralError("sortie references an unknown node");
        for (int c : s.sequence) {
            if (!node_ok(c)) throw StructuralError("sortie sequence references unknown node " + std::to_string(c));
            if (c == 0) throw StructuralError("sortie sequence contains the depot");
        }
        if (!std::isfinite(s.launch_time)) throw StructuralError("sortie launch time is not finite");
    }
    for (const auto& e : plan.charging_events) {
        if (e.vehicle_id < 0 || e.vehicle_id >= fleet.vehicle_count(e.vehicle_kind))
            throw StructuralError("charging event references an unknown vehicle");
        if (e.truck_id < 0 || e.truck_id >= fleet.num_trucks)
            throw StructuralError("charging event references an unknown truck");
        if (!node_ok(e.node)) throw StructuralError("charging event references an unknown node");
    }
}

// Adds bounds 1 <= u_c <= |C| and the MTZ arcs of every route.
bool add_route_ordering(DifferenceSystem& sys, const Plan& plan, const Instance& inst) {
    const int n = inst.num_customers();
    for (int c = 1; c <= n; ++c) {
        if (!sys.try_add(c, 0, -1.0)) return false;
        if (!sys.try_add(0, c, static_cast<double>(n))) return false;
    }
    for (const auto& r : plan.truck_routes) {
        for (std::size_t p = 0; p + 1 < r.size(); ++p) {
            if (r[p] > 0 && r[p + 1] > 0 && !sys.try_add(r[p + 1], r[p], -1.0)) return false;
        }
    }
    return true;
}

double flight_time(const Sortie& s, const Instance& inst, const FleetSpec& fleet) {
    return sortie_distance(s, inst) / fleet.speed(s.vehicle_kind);
}

struct VehicleKey {
    VehicleKind kind;
    int id;
    auto operator<=>(const VehicleKey&) const = default;
};

// Stretch of a truck route the vehicle rides: legs starting at positions
// [from, to).
struct Ride {
    int truck;
    int from;
    int to;
};

class Checker {
public:
    Checker(const Plan& plan, const Instance& inst, const FleetSpec& fleet, const ModelOptions& options)
        : plan_(plan), inst_(inst), fleet_(fleet), options_(options), index_(plan, inst.num_nodes()) {}

    ValidationReport run() {
        check_coverage();
        check_routes();
        check_arrivals();
        launch_pos_.assign(plan_.sorties.size(), std::nullopt);
        recovery_pos_.assign(plan_.sorties.size(), std::nullopt);
        check_presence();
        check_precedence();
        check_sortie_limits();
        check_timing();
        check_itineraries();
        check_charging_and_battery();

        report_.model_makespan = model_makespan(plan_, inst_, fleet_);
        report_.simulated_makespan = simulated_makespan(plan_, inst_, fleet_);
        report_.feasible = report_.violations.empty();
        return std::move(report_);
    }

private:
    void add(std::string_view family, std::string detail, std::vector<int> ids) {
        report_.violations.push_back({std::string(family), std::move(detail), std::move(ids)});
    }

    double arrival(int t, int pos) const {
        return plan_.truck_arrivals[static_cast<std::size_t>(t)][static_cast<std::size_t>(pos)].time;
    }

    void check_coverage() {
        std::vector<int> count(static_cast<std::size_t>(inst_.num_nodes()), 0);
        for (const auto& r : plan_.truck_routes)
            for (int v : r)
                if (v > 0) ++count[static_cast<std::size_t>(v)];
        for (const auto& s : plan_.sorties)
            for (int c : s.sequence) ++count[static_cast<std::size_t>(c)];
        for (int c = 1; c < inst_.num_nodes(); ++c) {
            const int k = count[static_cast<std::size_t>(c)];
            if (k != 1)
                add(family::visit_once, "customer " + std::to_string(c) + " served " + std::to_string(k) + " times",
                    {c});
        }
    }

    void check_routes() {
        for (int t = 0; t < index_.num_trucks(); ++t) {
            const auto& r = index_.route(t);
            bool ok = r.size() >= 2 && r.front() == 0 && r.back() == 0;
            for (std::size_t p = 1; ok && p + 1 < r.size(); ++p) ok = r[p] != 0;
            if (!ok) add(family::depot_start_end, "route of truck " + std::to_string(t) + " must start and end at the depot exactly once", {t});
            for (std::size_t p = 0; p + 1 < r.size(); ++p) {
                if (r[p] != r[p + 1] && truck_distance(inst_, fleet_, r[p], r[p + 1]) >= fleet_.big_M)
                    add(family::unreachable_arcs,
                        "truck " + std::to_string(t) + " drives " + std::to_string(r[p]) + "->" +
                            std::to_string(r[p + 1]) + " across an unreachable node",
                        {t, r[p], r[p + 1]});
            }
        }
    }

    void check_arrivals() {
        for (int t = 0; t < index_.num_trucks(); ++t) {
            const auto& r = index_.route(t);
            if (r.empty()) continue;
            if (std::abs(arrival(t, 0)) > kTimeTolerance)
                add(family::truck_sequencing, "truck " + std::to_string(t) + " does not leave the depot at time 0", {t});
            for (std::size_t p = 0; p + 1 < r.size(); ++p) {
                const double need = arrival(t, static_cast<int>(p)) + truck_travel_time(inst_, fleet_, r[p], r[p + 1]);
                if (arrival(t, static_cast<int>(p) + 1) < need - kTimeTolerance)
                    add(family::truck_sequencing,
                        "truck " + std::to_string(t) + " reaches node " + std::to_string(r[p + 1]) + " at " +
                            fmt(arrival(t, static_cast<int>(p) + 1)) + " h, earliest possible " + fmt(need) + " h",
                        {t, r[p + 1]});
            }
        }
    }

    void check_presence() {
        std::map<std::tuple<VehicleKind, int, int, int>, std::vector<std::size_t>> launches, recoveries;
        for (std::size_t i = 0; i < plan_.sorties.size(); ++i) {
            const Sortie& s = plan_.sorties[i];
            const auto kind = s.vehicle_kind;
            launch_pos_[i] = index_.launch_pos(s.launch_truck, s.launch_node);
            recovery_pos_[i] = index_.recovery_pos(s.recovery_truck, s.recovery_node);
            if (!launch_pos_[i])
                add(family::by_kind(kind, family::launch_presence_drone, family::launch_presence_robot),
                    describe(s) + ": launch truck does not visit the launch node", sortie_ids(s));
            if (!recovery_pos_[i])
                add(family::by_kind(kind, family::recovery_presence_drone, family::recovery_presence_robot),
                    describe(s) + ": recovery truck does not visit the recovery node", sortie_ids(s));
            launches[{kind, s.launch_node, s.launch_truck, s.recovery_truck}].push_back(i);
            recoveries[{kind, s.recovery_node, s.launch_truck, s.recovery_truck}].push_back(i);
        }
        auto caps = [&](const auto& groups, std::string_view drone, std::string_view robot, const char* what) {
            for (const auto& [key, members] : groups) {
                if (members.size() <= 1) continue;
                const auto& [kind, node, ti, tk] = key;
                add(family::by_kind(kind, drone, robot),
                    std::to_string(members.size()) + " " + std::string(to_string(kind)) + " sorties " + what +
                        " node " + std::to_string(node) + " for truck pair " + std::to_string(ti) + "->" +
                        std::to_string(tk),
                    {node, ti, tk});
            }
        };
        caps(launches, family::launch_presence_drone, family::launch_presence_robot, "launch from");
        caps(recoveries, family::recovery_presence_drone, family::recovery_presence_robot, "recover at");
    }

    void check_precedence() {
        DifferenceSystem sys(inst_.num_nodes());
        const bool base_ok = add_route_ordering(sys, plan_, inst_);
        if (!base_ok) add(family::subtour_mtz, "truck routes admit no consistent visit order", {});
        for (std::size_t i = 0; i < plan_.sorties.size(); ++i) {
            const Sortie& s = plan_.sorties[i];
            if (!launch_pos_[i] || !recovery_pos_[i]) continue;
            const auto fam = family::by_kind(s.vehicle_kind, family::precedence_drone, family::precedence_robot);
            if (s.launch_truck == s.recovery_truck) {
                if (*recovery_pos_[i] <= *launch_pos_[i]) {
                    add(fam, describe(s) + ": recovery node is not after the launch node on the route", sortie_ids(s));
                    continue;
                }
            }
            if (s.launch_node == 0 || s.recovery_node == 0 || !base_ok) continue;
            if (!sys.try_add(s.recovery_node, s.launch_node, -1.0))
                add(fam, describe(s) + ": recovery node cannot be ordered after the launch node", sortie_ids(s));
        }
    }

    void check_sortie_limits() {
        const int cap = options_.sortie_capacity(fleet_);
        std::map<VehicleKey, int> trips;
        for (const Sortie& s : plan_.sorties) {
            const auto kind = s.vehicle_kind;
            const double load = sortie_payload(s.sequence, inst_);
            if (load > fleet_.payload(kind) + 1e-9)
                add(family::by_kind(kind, family::payload_drone, family::payload_robot),
                    describe(s) + ": payload " + fmt(load) + " kg exceeds " + fmt(fleet_.payload(kind)), sortie_ids(s));
            const double dist = sortie_distance(s, inst_);
            if (dist > fleet_.max_range(kind) + 1e-9)
                add(family::by_kind(kind, family::range_drone, family::range_robot),
                    describe(s) + ": distance " + fmt(dist) + " km exceeds " + fmt(fleet_.max_range(kind)),
                    sortie_ids(s));
            const int len = static_cast<int>(s.sequence.size());
            if (len < 1 || len > cap)
                add(family::sortie_capacity,
                    describe(s) + ": serves " + std::to_string(len) + " customers, allowed 1.." + std::to_string(cap),
                    sortie_ids(s));
            if (options_.fixed_docking && s.launch_truck != s.recovery_truck)
                add(family::fixed_docking, describe(s) + ": recovered by a different truck", sortie_ids(s));
            ++trips[{kind, s.vehicle_id}];
        }
        if (options_.single_trip) {
            for (const auto& [key, n] : trips) {
                if (n > 1)
                    add(family::by_kind(key.kind, family::single_trip_drone, family::single_trip_robot),
                        std::string(to_string(key.kind)) + " " + std::to_string(key.id) + " flies " +
                            std::to_string(n) + " sorties",
                        {key.id});
            }
        }
    }

    void check_timing() {
        for (std::size_t i = 0; i < plan_.sorties.size(); ++i) {
            const Sortie& s = plan_.sorties[i];
            const auto kind = s.vehicle_kind;
            if (launch_pos_[i]) {
                const double a = arrival(s.launch_truck, *launch_pos_[i]);
                if (s.launch_time < a - kTimeTolerance)
                    add(family::by_kind(kind, family::launch_sync_drone, family::launch_sync_robot),
                        describe(s) + ": launched at " + fmt(s.launch_time) + " h before the truck arrives at " +
                            fmt(a) + " h",
                        sortie_ids(s));
            }
            if (recovery_pos_[i]) {
                const double back = s.launch_time + flight_time(s, inst_, fleet_);
                const double a = arrival(s.recovery_truck, *recovery_pos_[i]);
                if (back > a + kTimeTolerance)
                    add(family::by_kind(kind, family::return_sync_drone, family::return_sync_robot),
                        describe(s) + ": returns at " + fmt(back) + " h after the truck arrives at " + fmt(a) + " h",
                        sortie_ids(s));
            }
        }
    }

    // Sortie indices per vehicle in launch-time order.
    std::map<VehicleKey, std::vector<std::size_t>> itineraries() const {
        std::map<VehicleKey, std::vector<std::size_t>> out;
        for (std::size_t i = 0; i < plan_.sorties.size(); ++i)
            out[{plan_.sorties[i].vehicle_kind, plan_.sorties[i].vehicle_id}].push_back(i);
        for (auto& [key, list] : out) {
            std::stable_sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
                return plan_.sorties[a].launch_time < plan_.sorties[b].launch_time;
            });
        }
        return out;
    }

    void check_itineraries() {
        for (const auto& [key, list] : itineraries()) {
            const auto fam = family::by_kind(key.kind, family::itinerary_drone, family::itinerary_robot);
            for (std::size_t j = 1; j < list.size(); ++j) {
                const Sortie& prev = plan_.sorties[list[j - 1]];
                const Sortie& next = plan_.sorties[list[j]];
                const auto& rp = recovery_pos_[list[j - 1]];
                const auto& lp = launch_pos_[list[j]];
                if (next.launch_truck != prev.recovery_truck) {
                    add(fam, describe(next) + ": launched from truck " + std::to_string(next.launch_truck) +
                                 " but the vehicle was recovered by truck " + std::to_string(prev.recovery_truck),
                        sortie_ids(next));
                } else if (rp && lp && *lp < *rp) {
                    add(fam, describe(next) + ": launched before the vehicle is back on truck " +
                                 std::to_string(next.launch_truck),
                        sortie_ids(next));
                }
            }
        }
    }

    // Legs of truck routes the vehicle rides, in itinerary order.
    std::vector<Ride> rides_of(const std::vector<std::size_t>& list) const {
        std::vector<Ride> rides;
        auto last_pos = [&](int t) { return static_cast<int>(index_.route(t).size()) - 1; };
        if (list.empty()) {
            int carrier = 0;
            for (int t = 0; t < index_.num_trucks(); ++t) {
                if (index_.used(t)) {
                    carrier = t;
                    break;
                }
            }
            if (index_.num_trucks() > 0) rides.push_back({carrier, 0, last_pos(carrier)});
            return rides;
        }
        const Sortie& first = plan_.sorties[list.front()];
        rides.push_back({first.launch_truck, 0, launch_pos_[list.front()].value_or(0)});
        for (std::size_t j = 0; j < list.size(); ++j) {
            const Sortie& s = plan_.sorties[list[j]];
            const int from = recovery_pos_[list[j]].value_or(last_pos(s.recovery_truck));
            const int to = j + 1 < list.size() ? launch_pos_[list[j + 1]].value_or(from) : last_pos(s.recovery_truck);
            rides.push_back({s.recovery_truck, from, std::max(from, to)});
        }
        return rides;
    }

    void check_charging_and_battery() {
        // Aggregate events per (vehicle, truck, node).
        struct Aggregate {
            double duration = 0.0;
            double amount = 0.0;
            bool used = false;
        };
        std::map<std::tuple<VehicleKind, int, int, int>, Aggregate> events;
        for (const auto& e : plan_.charging_events) {
            auto& agg = events[{e.vehicle_kind, e.vehicle_id, e.truck_id, e.node}];
            agg.duration += e.duration;
            agg.amount += e.amount;
        }

        if (!options_.charging) {
            for (const auto& [key, agg] : events) {
                const auto& [kind, vid, t, v] = key;
                add(family::by_kind(kind, family::battery_balance_drone, family::battery_balance_robot),
                    std::string(to_string(kind)) + " " + std::to_string(vid) + " charged at node " + std::to_string(v) +
                        " while en-route charging is disabled",
                    {vid, t, v});
            }
            events.clear();
        }

        for (auto& [key, agg] : events) {
            const auto& [kind, vid, t, v] = key;
            const std::string who = std::string(to_string(kind)) + " " + std::to_string(vid);
            std::vector<int> ids{vid, t, v};
            if (v == 0) {
                add(family::by_kind(kind, family::depot_no_charge_drone, family::depot_no_charge_robot),
                    who + " charged at the depot on truck " + std::to_string(t), ids);
                agg.used = true;  // excluded from the ledger
                continue;
            }
            const auto pos = index_.customer_pos(t, v);
            if (!pos) {
                add(family::by_kind(kind, family::charge_gate_drone, family::charge_gate_robot),
                    who + " charged at node " + std::to_string(v) + " which truck " + std::to_string(t) +
                        " does not visit",
                    ids);
                agg.used = true;
                continue;
            }
            // Truck presence at a visited customer counts its arrival and departure arcs.
            if (agg.amount > 2.0 * fleet_.charge_rate(kind) + kEnergyTolerance)
                add(family::by_kind(kind, family::charge_gate_drone, family::charge_gate_robot),
                    who + " receives " + fmt(agg.amount) + " at node " + std::to_string(v) +
                        ", more than the presence bound " + fmt(2.0 * fleet_.charge_rate(kind)),
                    ids);
            const auto& r = index_.route(t);
            const double leg = static_cast<std::size_t>(*pos) + 1 < r.size()
                                   ? truck_travel_time(inst_, fleet_, v, r[static_cast<std::size_t>(*pos) + 1])
                                   : 0.0;
            if (agg.duration < -kTimeTolerance || agg.duration > leg + kTimeTolerance)
                add(family::charge_time,
                    who + " charges " + fmt(agg.duration) + " h at node " + std::to_string(v) + ", leg lasts " +
                        fmt(leg) + " h",
                    ids);
            const double cap = fleet_.charge_rate(kind) * std::max(0.0, agg.duration);
            if (agg.amount < -kEnergyTolerance || agg.amount > cap + kEnergyTolerance)
                add(family::by_kind(kind, family::charge_rate_drone, family::charge_rate_robot),
                    who + " receives " + fmt(agg.amount) + " at node " + std::to_string(v) + ", rate allows " +
                        fmt(cap),
                    ids);
        }

        const auto itins = itineraries();
        for (const auto& vehicle : all_vehicles()) {
            auto it = itins.find(vehicle);
            const std::vector<std::size_t> list = it == itins.end() ? std::vector<std::size_t>{} : it->second;
            replay_ledger(vehicle, list, events);
        }

        for (auto& [key, agg] : events) {
            if (agg.used) continue;
            const auto& [kind, vid, t, v] = key;
            add(family::by_kind(kind, family::charge_aboard_drone, family::charge_aboard_robot),
                std::string(to_string(kind)) + " " + std::to_string(vid) + " charged on truck " + std::to_string(t) +
                    " at node " + std::to_string(v) + " while not aboard",
                {vid, t, v});
        }
    }

    std::vector<VehicleKey> all_vehicles() const {
        std::vector<VehicleKey> out;
        for (int d = 0; d < fleet_.num_drones; ++d) out.push_back({VehicleKind::drone, d});
        for (int r = 0; r < fleet_.num_robots; ++r) out.push_back({VehicleKind::robot, r});
        return out;
    }

    template <typename Events>
    void replay_ledger(const VehicleKey& vehicle, const std::vector<std::size_t>& list, Events& events) {
        const auto kind = vehicle.kind;
        BatteryLedger ledger = energy::make_ledger(kind, vehicle.id, fleet_);
        const std::string who = std::string(to_string(kind)) + " " + std::to_string(vehicle.id);
        const auto rides = rides_of(list);
        double level = ledger.capacity;
        double depot_energy = 0.0;

        auto ride = [&](const Ride& r) {
            const auto& route = index_.route(r.truck);
            for (int p = r.from; p < r.to && p + 1 < static_cast<int>(route.size()); ++p) {
                const int v = route[static_cast<std::size_t>(p)];
                auto found = events.find({kind, vehicle.id, r.truck, v});
                if (found == events.end() || found->second.used) continue;
                found->second.used = true;
                const double amount = found->second.amount;
                level += amount;
                ledger.entries.push_back({arrival(r.truck, p), amount, LedgerCause::charge});
                if (level > ledger.capacity + kEnergyTolerance)
                    add(family::by_kind(kind, family::overcharge_drone, family::overcharge_robot),
                        who + " charged to " + fmt(level) + " above capacity " + fmt(ledger.capacity) + " at node " +
                            std::to_string(v),
                        {vehicle.id, r.truck, v});
            }
        };

        if (!rides.empty()) ride(rides.front());
        for (std::size_t j = 0; j < list.size(); ++j) {
            const Sortie& s = plan_.sorties[list[j]];
            const double e = energy::sortie_energy(s, inst_, fleet_);
            level -= e;
            ledger.entries.push_back({s.launch_time, -e, LedgerCause::sortie});
            if (s.launch_node == 0) depot_energy += e;
            if (level < -kEnergyTolerance)
                add(family::by_kind(kind, family::battery_balance_drone, family::battery_balance_robot),
                    describe(s) + ": needs " + fmt(e) + " but only " + fmt(level + e) + " is left", sortie_ids(s));
            if (j + 1 < rides.size()) ride(rides[j + 1]);
        }
        if (depot_energy > ledger.capacity + kEnergyTolerance)
            add(family::by_kind(kind, family::depot_full_charge_drone, family::depot_full_charge_robot),
                who + " launches " + fmt(depot_energy) + " of depot sorties with capacity " + fmt(ledger.capacity),
                {vehicle.id});
        report_.battery_ledgers.push_back(std::move(ledger));
    }

    const Plan& plan_;
    const Instance& inst_;
    const FleetSpec& fleet_;
    const ModelOptions& options_;
    PlanIndex index_;
    std::vector<std::optional<int>> launch_pos_;
    std::vector<std::optional<int>> recovery_pos_;
    ValidationReport report_;
};

}  // namespace

ValidationReport validate(const Plan& plan, const Instance& inst, const FleetSpec& fleet,
                          const ModelOptions& options) {
    check_structure(plan, inst, fleet);
    return Checker(plan, inst, fleet, options).run();
}

double model_makespan(const Plan& plan, const Instance& inst, const FleetSpec& fleet) {
    double gamma = 0.0;
    for (const auto& r : plan.truck_routes) {
        double t = 0.0;
        for (std::size_t p = 0; p + 1 < r.size(); ++p) t += truck_travel_time(inst, fleet, r[p], r[p + 1]);
        gamma = std::max(gamma, t);
    }
    std::map<VehicleKey, double> flights;
    for (const auto& s : plan.sorties) flights[{s.vehicle_kind, s.vehicle_id}] += flight_time(s, inst, fleet);
    for (const auto& [key, t] : flights) gamma = std::max(gamma, t);
    return gamma;
}

double simulated_makespan(const Plan& plan, const Instance& inst, const FleetSpec& fleet) {
    PlanIndex index(plan, inst.num_nodes());
    const int trucks = static_cast<int>(plan.truck_routes.size());
    std::vector<std::vector<double>> a(static_cast<std::size_t>(trucks));
    for (int t = 0; t < trucks; ++t) a[static_cast<std::size_t>(t)].assign(index.route(t).size(), 0.0);

    struct Link {
        int ti, pi, tk, pk;
        double flight;
    };
    std::vector<Link> links;
    for (const auto& s : plan.sorties) {
        auto li = index.launch_pos(s.launch_truck, s.launch_node);
        auto lk = index.recovery_pos(s.recovery_truck, s.recovery_node);
        if (li && lk) links.push_back({s.launch_truck, *li, s.recovery_truck, *lk, flight_time(s, inst, fleet)});
    }
    // Earliest return per (truck, position), refreshed each sweep until the
    // cross-truck waits settle.
    for (std::size_t iter = 0; iter <= links.size() + 1; ++iter) {
        std::vector<std::vector<double>> ready(a.size());
        for (std::size_t t = 0; t < a.size(); ++t) ready[t].assign(a[t].size(), 0.0);
        for (const auto& l : links) {
            double& slot = ready[static_cast<std::size_t>(l.tk)][static_cast<std::size_t>(l.pk)];
            slot = std::max(slot, a[static_cast<std::size_t>(l.ti)][static_cast<std::size_t>(l.pi)] + l.flight);
        }
        bool changed = false;
        for (int t = 0; t < trucks; ++t) {
            const auto& r = index.route(t);
            auto& times = a[static_cast<std::size_t>(t)];
            for (std::size_t p = 1; p < r.size(); ++p) {
                const double next =
                    std::max(times[p - 1] + truck_travel_time(inst, fleet, r[p - 1], r[p]),
                             ready[static_cast<std::size_t>(t)][p]);
                if (std::abs(next - times[p]) > 1e-12) {
                    times[p] = next;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
    double out = 0.0;
    for (const auto& times : a)
        if (!times.empty()) out = std::max(out, times.back());
    return out;
}

std::optional<std::vector<double>> precedence_potentials(const Plan& plan, const Instance& inst) {
    DifferenceSystem sys(inst.num_nodes());
    if (!add_route_ordering(sys, plan, inst)) return std::nullopt;
    for (const auto& s : plan.sorties) {
        if (s.launch_node <= 0 || s.recovery_node <= 0) continue;
        if (!inst.valid_id(s.launch_node) || !inst.valid_id(s.recovery_node)) return std::nullopt;
        if (!sys.try_add(s.recovery_node, s.launch_node, -1.0)) return std::nullopt;
    }
    const auto& d = sys.potentials();
    std::vector<double> u(d.size(), 0.0);
    for (std::size_t c = 1; c < d.size(); ++c) u[c] = d[c] - d[0];
    return u;
}

nlohmann::ordered_json report_to_json(const ValidationReport& report) {
    nlohmann::ordered_json j;
    j["feasible"] = report.feasible;
    auto violations = nlohmann::ordered_json::array();
    for (const auto& v : report.violations) {
        violations.push_back(
            {{"constraint_family", v.constraint_family}, {"detail", v.detail}, {"involved_ids", v.involved_ids}});
    }
    j["violations"] = std::move(violations);
    j["model_makespan"] = report.model_makespan;
    j["simulated_makespan"] = report.simulated_makespan;
    auto ledgers = nlohmann::ordered_json::array();
    for (const auto& l : report.battery_ledgers) {
        auto entries = nlohmann::ordered_json::array();
        for (const auto& e : l.entries)
            entries.push_back(
                {{"time", e.time}, {"delta", e.delta}, {"cause", e.cause == LedgerCause::sortie ? "sortie" : "charge"}});
        ledgers.push_back({{"vehicle_kind", std::string(to_string(l.vehicle_kind))},
                           {"vehicle_id", l.vehicle_id},
                           {"capacity", l.capacity},
                           {"entries", std::move(entries)}});
    }
    j["battery_ledgers"] = std::move(ledgers);
    return j;
}

}  // namespace vrpdr::validator
