#include "vrpdr/exact.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "vrpdr/energy.hpp"
#include "vrpdr/milp.hpp"
#include "vrpdr/validator.hpp"

namespace vrpdr::exact {

void SearchBudget::validate() const {
    if (max_customers <= 0 || max_candidates <= 0 || !(time_limit > 0.0))
        throw ConfigurationError("search budget fields must be positive");
}

std::string_view to_string(Status status) {
    switch (status) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::budget_exceeded: return "budget-exceeded";
    }
    return "?";
}

namespace {

constexpr double kEps = 1e-9;

struct BudgetExceeded {
    std::string why;
};

struct Pick {
    int lpos = -1;
    int kpos = -1;
    int seq = -1;
};

struct Label {
    double cost = 0.0;  // $ of the vehicle's sorties
    double time = 0.0;  // h of flight
    double level = 0.0;
    int parent = -1;
    Pick pick;  // seq < 0 for a ride step
};

struct Front {
    // mask -> labels that reached the end of the route
    std::map<unsigned, std::vector<int>> at_end;
    std::vector<Label> arena;
};

class Search {
public:
    Search(const Instance& inst, const FleetSpec& fleet, const ModelOptions& options, const SearchBudget& budget)
        : inst_(inst), fleet_(fleet), options_(options), budget_(budget), start_(std::chrono::steady_clock::now()) {}

    ExactResult run() {
        ExactResult out;
        const int n = inst_.num_customers();
        std::vector<int> reachable;
        for (int c : inst_.customer_ids())
            if (inst_.node(c).truck_reachable) reachable.push_back(c);

        std::vector<std::vector<int>> tours;
        if (n == 0)
            tours.push_back({});
        else
            tours = enumerate_sequences(reachable, static_cast<int>(reachable.size()));

        struct Tour {
            double bound;
            std::size_t index;
        };
        std::vector<Tour> order;
        for (std::size_t i = 0; i < tours.size(); ++i) {
            const double lb = tour_bound(tours[i]);
            if (std::isfinite(lb)) order.push_back({lb, i});
        }
        std::stable_sort(order.begin(), order.end(), [](const Tour& a, const Tour& b) { return a.bound < b.bound; });

        try {
            for (const Tour& t : order) {
                if (have_best_ && t.bound > best_obj_ + kEps) break;
                solve_tour(tours[t.index]);
            }
        } catch (const BudgetExceeded& e) {
            out.status = Status::budget_exceeded;
            out.detail = e.why;
            out.candidates = candidates_;
            return out;
        }
        out.candidates = candidates_;
        if (!have_best_) {
            out.status = Status::infeasible;
            out.detail = "no plan serves every customer within the fleet limits";
            return out;
        }
        out.status = Status::optimal;
        out.objective = best_obj_;
        out.plan = std::move(best_plan_);
        return out;
    }

private:
    double alpha() const { return fleet_.alpha; }

    void tick() {
        ++candidates_;
        if (candidates_ > budget_.max_candidates)
            throw BudgetExceeded{"candidate budget of " + std::to_string(budget_.max_candidates) + " exhausted"};
        if ((candidates_ & 1023) == 0) {
            const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
            if (elapsed > budget_.time_limit)
                throw BudgetExceeded{"time limit of " + std::to_string(budget_.time_limit) + " s reached"};
        }
    }

    std::vector<int> full_route(const std::vector<int>& tour) const {
        std::vector<int> r{0};
        r.insert(r.end(), tour.begin(), tour.end());
        r.push_back(0);
        return r;
    }

    // Truck part of the objective plus the cheapest possible fixed costs for
    // the customers left to sorties.
    double tour_bound(const std::vector<int>& tour) const {
        const auto r = full_route(tour);
        double dist = 0.0, time = 0.0;
        for (std::size_t p = 0; p + 1 < r.size(); ++p) {
            dist += truck_distance(inst_, fleet_, r[p], r[p + 1]);
            time += truck_travel_time(inst_, fleet_, r[p], r[p + 1]);
        }
        const int left = inst_.num_customers() - static_cast<int>(tour.size());
        double fixed = tour.empty() ? 0.0 : fleet_.f_t;
        if (left > 0) {
            double cheapest = std::numeric_limits<double>::infinity();
            if (fleet_.num_drones > 0) cheapest = std::min(cheapest, fleet_.f_d);
            if (fleet_.num_robots > 0) cheapest = std::min(cheapest, fleet_.f_r);
            if (!std::isfinite(cheapest)) return cheapest;
            const int cap = options_.sortie_capacity(fleet_);
            fixed += cheapest * ((left + cap - 1) / cap);
        }
        return alpha() * (fleet_.C_t * dist + fixed) + (1.0 - alpha()) * time;
    }

    void solve_tour(const std::vector<int>& tour) {
        route_ = full_route(tour);
        const int last = static_cast<int>(route_.size()) - 1;
        truck_cost_ = 0.0;
        truck_time_ = 0.0;
        leg_time_.assign(route_.size(), 0.0);
        for (int p = 0; p < last; ++p) {
            truck_cost_ += fleet_.C_t * truck_distance(inst_, fleet_, route_[p], route_[p + 1]);
            leg_time_[p] = truck_travel_time(inst_, fleet_, route_[p], route_[p + 1]);
            truck_time_ += leg_time_[p];
        }
        if (!tour.empty()) truck_cost_ += fleet_.f_t;

        leftover_.clear();
        std::vector<bool> on_route(static_cast<std::size_t>(inst_.num_nodes()), false);
        for (int c : tour) on_route[c] = true;
        for (int c : inst_.customer_ids())
            if (!on_route[c]) leftover_.push_back(c);
        if (tour.empty() && !leftover_.empty()) return;  // an idle truck carries nothing
        const unsigned all = (1u << leftover_.size()) - 1u;
        seqs_ = enumerate_sequences(leftover_, options_.sortie_capacity(fleet_));
        seq_mask_.assign(seqs_.size(), 0u);
        for (std::size_t s = 0; s < seqs_.size(); ++s)
            for (int c : seqs_[s]) {
                const auto it = std::find(leftover_.begin(), leftover_.end(), c);
                seq_mask_[s] |= 1u << (it - leftover_.begin());
            }

        Front drone = fleet_.num_drones > 0 ? chains(VehicleKind::drone) : idle_front();
        Front robot = fleet_.num_robots > 0 ? chains(VehicleKind::robot) : idle_front();

        for (const auto& [md, dl] : drone.at_end) {
            const auto rit = robot.at_end.find(all & ~md);
            if (rit == robot.at_end.end()) continue;
            for (int di : dl) {
                for (int ri : rit->second) {
                    tick();
                    const Label& a = drone.arena[di];
                    const Label& b = robot.arena[ri];
                    const double obj = alpha() * (truck_cost_ + a.cost + b.cost) +
                                       (1.0 - alpha()) * std::max({truck_time_, a.time, b.time});
                    if (have_best_ && obj > best_obj_ + kEps) continue;
                    consider(obj, picks(drone, di), picks(robot, ri));
                }
            }
        }
    }

    Front idle_front() const {
        Front f;
        f.arena.push_back({});
        f.at_end[0u].push_back(0);
        return f;
    }

    static std::vector<Pick> picks(const Front& f, int id) {
        std::vector<Pick> out;
        for (int i = id; i >= 0; i = f.arena[i].parent)
            if (f.arena[i].pick.seq >= 0) out.push_back(f.arena[i].pick);
        std::reverse(out.begin(), out.end());
        return out;
    }

    bool prunable(const Label& l) const {
        if (!have_best_) return false;
        const double lb =
            alpha() * (truck_cost_ + l.cost) + (1.0 - alpha()) * std::max(truck_time_, l.time);
        return lb > best_obj_ + kEps;
    }

    // Inserts into a Pareto bucket over (cost min, time min, level max).
    static bool insert(std::vector<int>& bucket, std::vector<Label>& arena, const Label& l) {
        for (int id : bucket) {
            const Label& o = arena[id];
            if (o.cost <= l.cost + kEps && o.time <= l.time + kEps && o.level >= l.level - kEps) return false;
        }
        std::erase_if(bucket, [&](int id) {
            const Label& o = arena[id];
            return l.cost <= o.cost + kEps && l.time <= o.time + kEps && l.level >= o.level - kEps;
        });
        bucket.push_back(static_cast<int>(arena.size()));
        arena.push_back(l);
        return true;
    }

    double charge_on_leg(VehicleKind kind, int p, double level) const {
        if (!options_.charging || p == 0) return 0.0;
        const double rate = fleet_.charge_rate(kind);
        const double room = fleet_.battery(kind) - level;
        return std::max(0.0, std::min({rate * leg_time_[p], 2.0 * rate, room}));
    }

    // Label-setting over (route position, served mask) for one vehicle.
    Front chains(VehicleKind kind) {
        Front f;
        const int last = static_cast<int>(route_.size()) - 1;
        const std::size_t masks = std::size_t{1} << leftover_.size();
        std::vector<std::vector<std::vector<int>>> bucket(route_.size(), std::vector<std::vector<int>>(masks));
        const double B = fleet_.battery(kind);
        const double speed = fleet_.speed(kind);
        const double range = fleet_.max_range(kind);
        const double payload = fleet_.payload(kind);
        std::vector<bool> light(seqs_.size());
        for (std::size_t s = 0; s < seqs_.size(); ++s) light[s] = sortie_payload(seqs_[s], inst_) <= payload;

        insert(bucket[0][0], f.arena, Label{0.0, 0.0, B, -1, {}});
        for (int p = 0; p <= last; ++p) {
            for (unsigned mask = 0; mask < masks; ++mask) {
                // Copy: inserts below may grow the arena and later buckets only.
                const std::vector<int> here = bucket[p][mask];
                for (int id : here) {
                    tick();
                    const Label cur = f.arena[id];
                    if (p == last) {
                        f.at_end[mask].push_back(id);
                        continue;
                    }
                    Label ride = cur;
                    ride.level += charge_on_leg(kind, p, cur.level);
                    ride.parent = id;
                    ride.pick = {};
                    insert(bucket[p + 1][mask], f.arena, ride);

                    if (options_.single_trip && has_sortie(f, id)) continue;
                    for (std::size_t s = 0; s < seqs_.size(); ++s) {
                        if ((seq_mask_[s] & mask) || !light[s]) continue;
                        for (int k = p + 1; k <= last; ++k) {
                            const int i_node = route_[p], k_node = route_[k];
                            const double dist = sortie_distance(kind, i_node, seqs_[s], k_node, inst_);
                            if (dist > range + kEps) continue;
                            const double e = energy::sortie_energy(kind, i_node, seqs_[s], k_node, inst_, fleet_);
                            if (e > cur.level + kEps) continue;
                            Label next{cur.cost + fleet_.unit_cost(kind) * dist + fleet_.fixed_cost(kind),
                                       cur.time + dist / speed, cur.level - e, id,
                                       Pick{p, k, static_cast<int>(s)}};
                            if (prunable(next)) continue;
                            insert(bucket[k][mask | seq_mask_[s]], f.arena, next);
                        }
                    }
                }
            }
        }
        for (auto& [mask, ids] : f.at_end) {
            // Keep the (cost, time) Pareto set; level no longer matters.
            std::vector<int> keep;
            for (int id : ids) {
                const Label& l = f.arena[id];
                bool dominated = false;
                for (int o : ids) {
                    if (o == id) continue;
                    const Label& m = f.arena[o];
                    const bool weakly = m.cost <= l.cost + kEps && m.time <= l.time + kEps;
                    const bool strictly = m.cost < l.cost - kEps || m.time < l.time - kEps;
                    if (weakly && (strictly || o < id)) {
                        dominated = true;
                        break;
                    }
                }
                if (!dominated) keep.push_back(id);
            }
            ids = std::move(keep);
        }
        return f;
    }

    static bool has_sortie(const Front& f, int id) {
        for (int i = id; i >= 0; i = f.arena[i].parent)
            if (f.arena[i].pick.seq >= 0) return true;
        return false;
    }

    Plan materialize(const std::vector<Pick>& drone, const std::vector<Pick>& robot) const {
        Plan plan;
        plan.truck_routes.push_back(route_);
        const int last = static_cast<int>(route_.size()) - 1;

        std::vector<Sortie> sorties;
        auto emit = [&](VehicleKind kind, const std::vector<Pick>& ps) {
            for (const Pick& p : ps) {
                Sortie s;
                s.vehicle_kind = kind;
                s.launch_node = route_[p.lpos];
                s.recovery_node = route_[p.kpos];
                s.sequence = seqs_[p.seq];
                sorties.push_back(std::move(s));
            }
        };
        emit(VehicleKind::drone, drone);
        emit(VehicleKind::robot, robot);

        // Arrivals with the truck waiting for every sortie it recovers.
        std::vector<double> arrive(route_.size(), 0.0);
        std::vector<std::pair<const Pick*, VehicleKind>> all;
        for (const Pick& p : drone) all.push_back({&p, VehicleKind::drone});
        for (const Pick& p : robot) all.push_back({&p, VehicleKind::robot});
        for (int p = 1; p <= last; ++p) {
            double a = arrive[p - 1] + leg_time_[p - 1];
            for (const auto& [pk, kind] : all)
                if (pk->kpos == p)
                    a = std::max(a, arrive[pk->lpos] + sortie_distance(kind, route_[pk->lpos], seqs_[pk->seq],
                                                                       route_[pk->kpos], inst_) /
                                                           fleet_.speed(kind));
            arrive[p] = a;
        }
        std::vector<TimelineEntry> timeline;
        for (int p = 0; p <= last; ++p) timeline.push_back({route_[p], arrive[p]});
        plan.truck_arrivals.push_back(std::move(timeline));

        std::size_t idx = 0;
        for (const auto& [pk, kind] : all) sorties[idx++].launch_time = arrive[pk->lpos];
        plan.sorties = std::move(sorties);

        auto charge = [&](VehicleKind kind, const std::vector<Pick>& ps) {
            double level = fleet_.battery(kind);
            auto ride = [&](int from, int to) {
                for (int p = from; p < to; ++p) {
                    const double amount = charge_on_leg(kind, p, level);
                    if (amount <= 0.0) continue;
                    level += amount;
                    plan.charging_events.push_back({kind, 0, 0, route_[p], leg_time_[p], amount});
                }
            };
            int at = 0;
            for (const Pick& p : ps) {
                ride(at, p.lpos);
                level -= energy::sortie_energy(kind, route_[p.lpos], seqs_[p.seq], route_[p.kpos], inst_, fleet_);
                at = p.kpos;
            }
            ride(at, last);
        };
        if (fleet_.num_drones > 0) charge(VehicleKind::drone, drone);
        if (fleet_.num_robots > 0) charge(VehicleKind::robot, robot);

        plan.objective = milp::objective_value(plan, inst_, fleet_);
        return plan;
    }

    static std::vector<int> encode(const Plan& p) {
        std::vector<int> key(p.truck_routes.front());
        for (const auto& s : p.sorties) {
            key.push_back(-1);
            key.push_back(static_cast<int>(s.vehicle_kind));
            key.push_back(s.launch_node);
            key.push_back(s.recovery_node);
            key.insert(key.end(), s.sequence.begin(), s.sequence.end());
        }
        return key;
    }

    void consider(double obj, const std::vector<Pick>& drone, const std::vector<Pick>& robot) {
        Plan plan = materialize(drone, robot);
        // Near-ties go to the lexicographically smaller plan encoding.
        if (have_best_ && obj >= best_obj_ - kEps && !(encode(plan) < encode(*best_plan_))) return;
        auto report = validator::validate(plan, inst_, fleet_, options_);
        if (!report.feasible) {
            const auto& v = report.violations.front();
            throw std::logic_error("exact search built a plan the validator rejects: " + v.constraint_family + ": " +
                                   v.detail);
        }
        plan.ledgers = std::move(report.battery_ledgers);
        have_best_ = true;
        best_obj_ = obj;
        best_plan_ = std::move(plan);
    }

    const Instance& inst_;
    const FleetSpec& fleet_;
    const ModelOptions& options_;
    const SearchBudget& budget_;
    std::chrono::steady_clock::time_point start_;
    std::int64_t candidates_ = 0;

    std::vector<int> route_;
    std::vector<double> leg_time_;
    double truck_cost_ = 0.0;
    double truck_time_ = 0.0;
    std::vector<int> leftover_;
    std::vector<std::vector<int>> seqs_;
    std::vector<unsigned> seq_mask_;

    bool have_best_ = false;
    double best_obj_ = 0.0;
    std::optional<Plan> best_plan_;
};

}  // namespace

ExactResult solve_exact(const Instance& inst, const FleetSpec& fleet, const ModelOptions& options,
                        const SearchBudget& budget) {
    inst.validate();
    fleet.validate();
    budget.validate();
    if (fleet.num_trucks != 1 || fleet.num_drones > 1 || fleet.num_robots > 1)
        throw ConfigurationError("exact search supports 1 truck with at most 1 drone and 1 robot");
    if (inst.num_customers() > budget.max_customers) {
        ExactResult out;
        out.status = Status::budget_exceeded;
        out.detail = std::to_string(inst.num_customers()) + " customers exceed the budget of " +
                     std::to_string(budget.max_customers);
        return out;
    }
    if (inst.num_customers() > 30) throw ConfigurationError("exact search masks hold at most 30 customers");
    return Search(inst, fleet, options, budget).run();
}

}  // namespace vrpdr::exact
