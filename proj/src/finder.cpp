#include "vrpdr/finder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "vrpdr/energy.hpp"
#include "vrpdr/milp.hpp"
#include "vrpdr/validator.hpp"
#include "difference_system.hpp"

namespace vrpdr::finder {

namespace {

bool used(const std::vector<int>& route) { return route.size() >= 3 && route[1] != 0; }

// Energy a carried vehicle may take on during one leg.
double leg_charge(VehicleKind kind, double level, double duration, const FleetSpec& fleet) {
    const double rate = fleet.charge_rate(kind);
    return std::max(0.0, std::min({rate * duration, 2.0 * rate, fleet.battery(kind) - level}));
}

double vehicle_metric(VehicleKind kind, Point a, Point b) {
    return kind == VehicleKind::drone ? euclidean_distance(a, b) : manhattan_distance(a, b);
}

double leg_time(const Timeline& tl, int t, int p) {
    return tl[t][p + 1].time - tl[t][p].time;
}

int position_of(const std::vector<int>& route, int node, bool recovery) {
    if (node == 0) return recovery ? static_cast<int>(route.size()) - 1 : 0;
    const auto it = std::find(route.begin() + 1, route.end() - 1, node);
    return it == route.end() - 1 ? -1 : static_cast<int>(it - route.begin());
}

std::vector<int> customers_of(const Sortie& s) { return s.sequence; }

}  // namespace

Routes construct_truck_routes(const Instance& inst, const FleetSpec& fleet) {
    const int n = inst.num_customers();
    if (fleet.num_trucks <= 0) {
        if (n > 0) throw ConfigurationError("no trucks to route " + std::to_string(n) + " customers");
        return {};
    }
    const int per_truck = std::max(3, n / (2 * fleet.num_trucks));
    std::vector<int> available;
    for (int c : inst.customer_ids())
        if (inst.node(c).truck_reachable) available.push_back(c);

    Routes routes(static_cast<std::size_t>(fleet.num_trucks));
    for (auto& r : routes) {
        r.push_back(0);
        while (static_cast<int>(r.size()) - 1 < per_truck && !available.empty()) {
            const Point here = inst.node(r.back()).pos;
            // available stays sorted by id, so the first minimum is the lowest id.
            auto best = available.begin();
            double best_d = euclidean_distance(here, inst.node(*best).pos);
            for (auto it = available.begin() + 1; it != available.end(); ++it) {
                const double d = euclidean_distance(here, inst.node(*it).pos);
                if (d < best_d) {
                    best_d = d;
                    best = it;
                }
            }
            r.push_back(*best);
            available.erase(best);
        }
        r.push_back(0);
    }
    return routes;
}

Timeline build_timeline(const Routes& routes, const Instance& inst, const FleetSpec& fleet) {
    Timeline tl;
    for (const auto& r : routes) {
        std::vector<TimelineEntry> times;
        double now = 0.0;
        for (std::size_t p = 0; p < r.size(); ++p) {
            if (p > 0) now += truck_travel_time(inst, fleet, r[p - 1], r[p]);
            times.push_back({r[p], now});
        }
        tl.push_back(std::move(times));
    }
    return tl;
}

std::vector<VehicleState> initial_states(const FleetSpec& fleet) {
    std::vector<VehicleState> out;
    for (VehicleKind kind : {VehicleKind::drone, VehicleKind::robot})
        for (int v = 0; v < fleet.vehicle_count(kind); ++v) {
            VehicleState s;
            s.kind = kind;
            s.id = v;
            s.ledger = energy::make_ledger(kind, v, fleet);
            out.push_back(std::move(s));
        }
    return out;
}

namespace {

struct Candidate {
    int unreachable_left = 0;
    double per_customer = 0.0;
    double recovery_time = 0.0;
    std::size_t seq = 0;
    int truck = 0;
    int position = 0;
    double energy = 0.0;

    auto key() const { return std::tie(unreachable_left, per_customer, recovery_time, seq); }
};

class Assigner {
public:
    Assigner(const Routes& routes, const Timeline& tl, const Instance& inst, const FleetSpec& fleet,
             const ModelOptions& options, const Config& config)
        : routes_(routes), tl_(tl), inst_(inst), fleet_(fleet), options_(options), config_(config),
          precedence_(inst.num_nodes()) {
        const int n = inst.num_customers();
        for (int c = 1; c <= n; ++c) {
            precedence_.try_add(c, 0, -1.0);
            precedence_.try_add(0, c, static_cast<double>(n));
        }
        for (const auto& r : routes)
            for (std::size_t p = 0; p + 1 < r.size(); ++p)
                if (r[p] > 0 && r[p + 1] > 0) precedence_.try_add(r[p + 1], r[p], -1.0);
    }

    Assignment run(const std::vector<int>& unserved, std::vector<VehicleState> states) {
        open_.assign(static_cast<std::size_t>(inst_.num_nodes()), false);
        for (int c : unserved) open_[c] = true;
        for (int c : unserved)
            if (!inst_.node(c).truck_reachable) ++unreachable_open_;
        trips_.assign(states.size(), 0);
        // Marginal truck detour of each unserved customer in the routes that
        // insertion would produce if no sortie took it.
        detour_.assign(static_cast<std::size_t>(inst_.num_nodes()), 0.0);
        std::vector<int> reachable;
        for (int c : unserved)
            if (inst_.node(c).truck_reachable) reachable.push_back(c);
        for (const auto& r : insert_unserved(routes_, reachable, inst_))
            for (std::size_t p = 1; p + 1 < r.size(); ++p)
                if (open_[r[p]]) detour_[r[p]] = insertion_delta(inst_, r[p - 1], r[p], r[p + 1]);

        struct Stop {
            double time;
            int truck;
            int pos;
        };
        std::vector<Stop> stops;
        for (int t = 0; t < static_cast<int>(routes_.size()); ++t) {
            if (!used(routes_[t])) continue;
            for (int p = 0; p + 1 < static_cast<int>(routes_[t].size()); ++p) stops.push_back({tl_[t][p].time, t, p});
        }
        std::stable_sort(stops.begin(), stops.end(), [](const Stop& a, const Stop& b) {
            return std::tie(a.time, a.truck, a.pos) < std::tie(b.time, b.truck, b.pos);
        });

        Assignment out;
        for (const Stop& stop : stops) {
            for (std::size_t v = 0; v < states.size(); ++v) {
                VehicleState& s = states[v];
                if (options_.single_trip && trips_[v] > 0) continue;
                if (s.truck >= 0 && (s.truck != stop.truck || s.position > stop.pos)) continue;
                launch(s, v, stop.truck, stop.pos, out.sorties);
            }
        }
        for (int c : inst_.customer_ids())
            if (open_[c]) out.unserved.push_back(c);
        out.states = std::move(states);
        return out;
    }

private:
    // Level after riding truck t from the vehicle's boarding position to p.
    double level_at(const VehicleState& s, int t, int p,
                    std::vector<std::pair<ChargingEvent, double>>* events) const {
        double level = s.ledger.level();
        if (!options_.charging) return level;
        const int from = s.truck < 0 ? 0 : s.position;
        for (int q = std::max(from, 1); q < p; ++q) {
            const double dt = leg_time(tl_, t, q);
            const double add = leg_charge(s.kind, level, dt, fleet_);
            if (add <= 0.0) continue;
            level += add;
            if (events) events->push_back({{s.kind, s.id, t, routes_[t][q], dt, add}, tl_[t][q].time});
        }
        return level;
    }

    std::vector<int> pool(VehicleKind kind, int launch_node) const {
        const Point at = inst_.node(launch_node).pos;
        const double radius = fleet_.max_range(kind);
        std::vector<std::pair<double, int>> near;
        for (int c : inst_.customer_ids()) {
            if (!open_[c]) continue;
            const double d = vehicle_metric(kind, at, inst_.node(c).pos);
            if (d <= radius) near.emplace_back(d, c);
        }
        const std::size_t k = std::min<std::size_t>(near.size(), static_cast<std::size_t>(config_.nearest));
        std::partial_sort(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(k), near.end());
        std::vector<int> out;
        for (std::size_t i = 0; i < k; ++i) out.push_back(near[i].second);
        std::sort(out.begin(), out.end());
        return out;
    }

    // A sortie must beat the truck detour its customers would otherwise need.
    // Truck-unreachable customers have no detour alternative.
    bool worthwhile(VehicleKind kind, const std::vector<int>& seq, double dist) const {
        double detour = 0.0;
        for (int c : seq) {
            if (!inst_.node(c).truck_reachable) return true;
            detour += detour_[c];
        }
        const double a = fleet_.alpha;
        const double saving = a * fleet_.C_t * detour + (1.0 - a) * detour / fleet_.s_t;
        const double spend = a * (fleet_.unit_cost(kind) * dist + fleet_.fixed_cost(kind));
        return spend < saving;
    }

    bool key_free(const std::set<std::tuple<VehicleKind, int, int, int>>& keys, VehicleKind kind, int node, int ti,
                  int tk) const {
        return !keys.count({kind, node, ti, tk});
    }

    void launch(VehicleState& s, std::size_t v, int t, int p, std::vector<Sortie>& sorties) {
        const VehicleKind kind = s.kind;
        const int i = routes_[t][p];
        const double level = level_at(s, t, p, nullptr);
        const double start = tl_[t][p].time;
        const double speed = fleet_.speed(kind);
        const double range = fleet_.max_range(kind);
        const auto customers = pool(kind, i);
        if (customers.empty()) return;
        const auto seqs = enumerate_sequences(customers, options_.sortie_capacity(fleet_));

        std::vector<Candidate> cands;
        for (std::size_t si = 0; si < seqs.size(); ++si) {
            const auto& seq = seqs[si];
            if (sortie_payload(seq, inst_) > fleet_.payload(kind)) continue;
            // Distance up to the last customer does not depend on the recovery stop.
            double inner = 0.0;
            Point prev = inst_.node(i).pos;
            for (int c : seq) {
                inner += vehicle_metric(kind, prev, inst_.node(c).pos);
                prev = inst_.node(c).pos;
            }
            if (inner > range) continue;

            bool found = false;
            Candidate best;
            for (int tk = 0; tk < static_cast<int>(routes_.size()); ++tk) {
                if (tk != t && (options_.fixed_docking || !used(routes_[tk]))) continue;
                const auto& rk = routes_[tk];
                const int first = tk == t ? p + 1 : 1;
                for (int q = first; q < static_cast<int>(rk.size()); ++q) {
                    const double arrive = tl_[tk][q].time;
                    if (found && arrive >= best.recovery_time) break;
                    const int k = rk[q];
                    const double dist = inner + vehicle_metric(kind, prev, inst_.node(k).pos);
                    if (dist > range) continue;
                    if (start + dist / speed > arrive) continue;
                    if (!key_free(launched_, kind, i, t, tk) || !key_free(recovered_, kind, k, t, tk)) continue;
                    const double e = energy::sortie_energy(kind, i, seq, k, inst_, fleet_);
                    if (e > level) continue;
                    if (config_.cost_filter && !worthwhile(kind, seq, dist)) continue;
                    int left = unreachable_open_;
                    for (int c : seq)
                        if (!inst_.node(c).truck_reachable) --left;
                    best = {left, e / static_cast<double>(seq.size()), arrive, si, tk, q, e};
                    found = true;
                    break;
                }
            }
            if (found) cands.push_back(best);
        }
        std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) { return a.key() < b.key(); });

        for (const Candidate& c : cands) {
            const int k = routes_[c.truck][c.position];
            if (c.truck != t && i > 0 && k > 0) {
                // Cross-truck sorties must keep the route orderings consistent.
                if (!precedence_.try_add(k, i, -1.0)) continue;
            }
            accept(s, v, t, p, c, seqs[c.seq], sorties);
            return;
        }
    }

    void accept(VehicleState& s, std::size_t v, int t, int p, const Candidate& c, const std::vector<int>& seq,
                std::vector<Sortie>& sorties) {
        std::vector<std::pair<ChargingEvent, double>> events;
        level_at(s, t, p, &events);
        for (const auto& [e, when] : events) s.ledger = energy::apply_charging(s.ledger, e, when).ledger;
        const double now = tl_[t][p].time;
        s.ledger = energy::apply_consumption(s.ledger, c.energy, now);

        Sortie out;
        out.vehicle_kind = s.kind;
        out.vehicle_id = s.id;
        out.launch_node = routes_[t][p];
        out.recovery_node = routes_[c.truck][c.position];
        out.sequence = seq;
        out.launch_truck = t;
        out.recovery_truck = c.truck;
        out.launch_time = now;
        sorties.push_back(out);

        launched_.insert({s.kind, out.launch_node, t, c.truck});
        recovered_.insert({s.kind, out.recovery_node, t, c.truck});
        for (int cust : seq) {
            open_[cust] = false;
            if (!inst_.node(cust).truck_reachable) --unreachable_open_;
            s.served.push_back(cust);
        }
        s.truck = c.truck;
        s.position = c.position;
        s.available_from = c.recovery_time;
        ++trips_[v];
    }

    const Routes& routes_;
    const Timeline& tl_;
    const Instance& inst_;
    const FleetSpec& fleet_;
    const ModelOptions& options_;
    const Config& config_;
    detail::DifferenceSystem precedence_;
    std::vector<bool> open_;
    int unreachable_open_ = 0;
    std::vector<int> trips_;
    std::vector<double> detour_;  // cheapest truck insertion per unserved customer
    std::set<std::tuple<VehicleKind, int, int, int>> launched_, recovered_;
};

}  // namespace

Assignment assign_sorties(const Routes& routes, const Timeline& timeline, const std::vector<int>& unserved,
                          std::vector<VehicleState> states, const Instance& inst, const FleetSpec& fleet,
                          const ModelOptions& options, const Config& config) {
    return Assigner(routes, timeline, inst, fleet, options, config).run(unserved, std::move(states));
}

ChargeSchedule apply_enroute_charging(const Routes& routes, const Timeline& timeline,
                                      const std::vector<Sortie>& sorties, const Instance& inst,
                                      const FleetSpec& fleet, const ModelOptions& options) {
    ChargeSchedule out;
    int carrier = -1;
    for (int t = 0; t < static_cast<int>(routes.size()) && carrier < 0; ++t)
        if (used(routes[t])) carrier = t;

    for (VehicleKind kind : {VehicleKind::drone, VehicleKind::robot}) {
        for (int vid = 0; vid < fleet.vehicle_count(kind); ++vid) {
            std::vector<const Sortie*> list;
            for (const auto& s : sorties)
                if (s.vehicle_kind == kind && s.vehicle_id == vid) list.push_back(&s);
            std::stable_sort(list.begin(), list.end(),
                             [](const Sortie* a, const Sortie* b) { return a->launch_time < b->launch_time; });
            BatteryLedger ledger = energy::make_ledger(kind, vid, fleet);
            auto ride = [&](int t, int from, int to) {
                if (!options.charging || t < 0) return;
                for (int p = std::max(from, 1); p < to; ++p) {
                    const double dt = leg_time(timeline, t, p);
                    const double want = leg_charge(kind, ledger.level(), dt, fleet);
                    if (want <= 0.0) continue;
                    ChargingEvent e{kind, vid, t, routes[t][p], dt, want};
                    auto res = energy::apply_charging(ledger, e, timeline[t][p].time);
                    ledger = std::move(res.ledger);
                    e.amount = res.applied;
                    if (e.amount > 0.0) out.events.push_back(e);
                }
            };
            auto last = [&](int t) { return static_cast<int>(routes[t].size()) - 1; };
            if (list.empty()) {
                if (carrier >= 0) ride(carrier, 0, last(carrier));
            } else {
                const Sortie& first = *list.front();
                ride(first.launch_truck, 0, position_of(routes[first.launch_truck], first.launch_node, false));
                for (std::size_t j = 0; j < list.size(); ++j) {
                    const Sortie& s = *list[j];
                    ledger = energy::apply_consumption(ledger, energy::sortie_energy(s, inst, fleet), s.launch_time);
                    const int from = position_of(routes[s.recovery_truck], s.recovery_node, true);
                    const int to = j + 1 < list.size()
                                       ? position_of(routes[s.recovery_truck], list[j + 1]->launch_node, false)
                                       : last(s.recovery_truck);
                    ride(s.recovery_truck, from, to);
                }
            }
            out.ledgers.push_back(std::move(ledger));
        }
    }
    return out;
}

double insertion_delta(const Instance& inst, int a, int c, int b) {
    const Point pa = inst.node(a).pos, pc = inst.node(c).pos, pb = inst.node(b).pos;
    return manhattan_distance(pa, pc) + manhattan_distance(pc, pb) - manhattan_distance(pa, pb);
}

Routes insert_unserved(Routes routes, const std::vector<int>& unserved, const Instance& inst) {
    for (int c : unserved) {
        int bt = -1, bp = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (int t = 0; t < static_cast<int>(routes.size()); ++t) {
            const auto& r = routes[t];
            for (int p = 0; p + 1 < static_cast<int>(r.size()); ++p) {
                const double d = insertion_delta(inst, r[p], c, r[p + 1]);
                if (d < bd) {
                    bd = d;
                    bt = t;
                    bp = p;
                }
            }
        }
        if (bt < 0) throw ConfigurationError("no truck route to insert customer " + std::to_string(c) + " into");
        routes[bt].insert(routes[bt].begin() + bp + 1, c);
    }
    return routes;
}

namespace {

void check_unreachable(const std::vector<int>& leftover, const Instance& inst) {
    std::vector<int> bad;
    for (int c : leftover)
        if (!inst.node(c).truck_reachable) bad.push_back(c);
    if (bad.empty()) return;
    std::string ids;
    for (int c : bad) ids += (ids.empty() ? "" : ", ") + std::to_string(c);
    throw UnservedError("truck-unreachable customers without a feasible sortie: " + ids, bad);
}

}  // namespace

Plan solve_finder(const Instance& inst, const FleetSpec& fleet, const ModelOptions& options, const Config& config) {
    inst.validate();
    fleet.validate();
    Routes routes = construct_truck_routes(inst, fleet);
    std::vector<bool> routed(static_cast<std::size_t>(inst.num_nodes()), false);
    for (const auto& r : routes)
        for (int v : r) routed[v] = true;
    std::vector<int> unserved;
    for (int c : inst.customer_ids())
        if (!routed[c]) unserved.push_back(c);

    Timeline timeline = build_timeline(routes, inst, fleet);
    Assignment asg = assign_sorties(routes, timeline, unserved, initial_states(fleet), inst, fleet, options, config);
    std::vector<Sortie> sorties = std::move(asg.sorties);
    std::vector<int> leftover = std::move(asg.unserved);

    for (;;) {
        check_unreachable(leftover, inst);
        routes = insert_unserved(std::move(routes), leftover, inst);
        leftover.clear();
        timeline = build_timeline(routes, inst, fleet);

        std::size_t broken = sorties.size();
        for (std::size_t j = 0; j < sorties.size(); ++j) {
            Sortie& s = sorties[j];
            const int lp = position_of(routes[s.launch_truck], s.launch_node, false);
            const int rp = position_of(routes[s.recovery_truck], s.recovery_node, true);
            s.launch_time = timeline[s.launch_truck][lp].time;
            const double flight = sortie_distance(s, inst) / fleet.speed(s.vehicle_kind);
            if (broken == sorties.size() && s.launch_time + flight > timeline[s.recovery_truck][rp].time + 1e-9)
                broken = j;
        }
        if (broken == sorties.size()) {
            Plan probe;
            probe.truck_routes = routes;
            probe.sorties = sorties;
            if (!validator::precedence_potentials(probe, inst)) {
                for (std::size_t j = sorties.size(); j-- > 0;)
                    if (sorties[j].launch_truck != sorties[j].recovery_truck) {
                        broken = j;
                        break;
                    }
            }
        }
        if (broken == sorties.size()) break;

        // Drop the broken sortie and the vehicle's later sorties; their customers go to the trucks.
        const Sortie bad = sorties[broken];
        std::vector<Sortie> keep;
        for (std::size_t j = 0; j < sorties.size(); ++j) {
            const bool same_vehicle =
                sorties[j].vehicle_kind == bad.vehicle_kind && sorties[j].vehicle_id == bad.vehicle_id;
            if (j >= broken && same_vehicle) {
                for (int c : customers_of(sorties[j])) leftover.push_back(c);
            } else {
                keep.push_back(sorties[j]);
            }
        }
        sorties = std::move(keep);
        std::sort(leftover.begin(), leftover.end());
    }

    ChargeSchedule charge = apply_enroute_charging(routes, timeline, sorties, inst, fleet, options);
    Plan plan;
    plan.truck_routes = std::move(routes);
    plan.sorties = std::move(sorties);
    plan.truck_arrivals = std::move(timeline);
    plan.charging_events = std::move(charge.events);
    plan.ledgers = std::move(charge.ledgers);
    plan.objective = milp::objective_value(plan, inst, fleet);
    return plan;
}

}  // namespace vrpdr::finder
