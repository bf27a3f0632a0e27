#include "vrpdr/milp.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "vrpdr/energy.hpp"
#include "vrpdr/families.hpp"
#include "vrpdr/validator.hpp"
#include "model_names.hpp"
#include "plan_index.hpp"

namespace vrpdr::milp {

int MilpModel::add_variable(std::string name, VarKind kind, double lower, double upper) {
    if (kind == VarKind::binary) {
        lower = std::max(lower, 0.0);
        upper = std::min(upper, 1.0);
    }
    const int id = static_cast<int>(variables.size());
    if (!index_.emplace(name, id).second) throw std::logic_error("duplicate variable " + name);
    variables.push_back({std::move(name), kind, lower, upper});
    return id;
}

void MilpModel::add_constraint(std::string_view group, std::vector<Term> terms, Sense sense, double rhs) {
    if (std::find(groups.begin(), groups.end(), group) == groups.end())
        throw std::logic_error("constraint group not registered: " + std::string(group));
    // Merge repeated variables, keeping first-occurrence order.
    std::vector<Term> merged;
    merged.reserve(terms.size());
    std::unordered_map<int, std::size_t> where;
    for (const Term& t : terms) {
        auto [it, fresh] = where.emplace(t.var, merged.size());
        if (fresh)
            merged.push_back(t);
        else
            merged[it->second].coef += t.coef;
    }
    std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
    if (merged.empty()) {
        const bool ok = sense == Sense::le ? 0.0 <= rhs : sense == Sense::ge ? 0.0 >= rhs : rhs == 0.0;
        if (!ok) throw ConfigurationError("constraint in group " + std::string(group) + " cannot be satisfied by any plan");
        return;
    }
    const std::size_t k = group_counter_[std::string(group)]++;
    constraints.push_back({std::string(group) + "_" + std::to_string(k), std::string(group), std::move(merged), sense, rhs});
}

int MilpModel::find(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

int MilpModel::at(const std::string& name) const {
    const int id = find(name);
    if (id < 0) throw std::out_of_range("no model variable named " + name);
    return id;
}

std::size_t MilpModel::group_size(std::string_view group) const {
    return static_cast<std::size_t>(
        std::count_if(constraints.begin(), constraints.end(), [&](const Constraint& c) { return c.group == group; }));
}

std::size_t MilpModel::count_binaries() const {
    return static_cast<std::size_t>(std::count_if(variables.begin(), variables.end(),
                                                  [](const Variable& v) { return v.kind == VarKind::binary; }));
}

std::int64_t count_sortie_variables(const Instance& inst, const FleetSpec& fleet, const ModelOptions& options) {
    const std::int64_t n = inst.num_customers();
    const int cap = options.sortie_capacity(fleet);
    const std::int64_t per_pair = count_sequences(n, cap) + 2 * n * count_sequences(n - 1, cap) +
                                  (n >= 2 ? n * (n - 1) * count_sequences(n - 2, cap) : 0);
    const std::int64_t pairs = static_cast<std::int64_t>(fleet.num_trucks) * fleet.num_trucks;
    return per_pair * pairs * (fleet.num_drones + fleet.num_robots);
}

namespace {

using names::Tok;

struct Builder {
    const Instance& inst;
    const FleetSpec& fleet;
    const ModelOptions& opt;
    MilpModel m;
    int n = 0;
    int T = 0;

    // x[t][i][j], -1 on the diagonal.
    std::vector<std::vector<std::vector<int>>> x;
    std::vector<int> u;                  // u[c], c >= 1
    std::vector<std::vector<int>> A;     // A[t][c] for c >= 1, A[t][0] is the end copy
    int gamma = -1;
    std::map<std::pair<VehicleKind, int>, int> etot;
    // charge[(kind, vid)][t][v], v = 0 is the start copy
    std::map<std::pair<VehicleKind, int>, std::vector<std::vector<int>>> charge;
    std::vector<std::vector<int>> ctime;  // ctime[t][v]

    struct Ride {
        int t, i, j, var;  // original node ids; i = 0 start copy, j = 0 end copy
    };
    std::map<std::pair<VehicleKind, int>, std::vector<Ride>> rides;
    // level[(kind, vid)][t] -> {start, customers..., end} indexed by token slot
    std::map<std::pair<VehicleKind, int>, std::vector<std::vector<int>>> level;
    std::map<std::pair<VehicleKind, int>, int> idle;

    Builder(const Instance& i, const FleetSpec& f, const ModelOptions& o)
        : inst(i), fleet(f), opt(o), n(i.num_customers()), T(f.num_trucks) {}

    std::vector<std::pair<VehicleKind, int>> vehicles() const {
        std::vector<std::pair<VehicleKind, int>> out;
        for (int d = 0; d < fleet.num_drones; ++d) out.emplace_back(VehicleKind::drone, d);
        for (int r = 0; r < fleet.num_robots; ++r) out.emplace_back(VehicleKind::robot, r);
        return out;
    }

    double travel(int i, int j) const { return truck_travel_time(inst, fleet, i, j); }

    // Level slot: 0 start copy, 1..n customers, n+1 end copy.
    int level_var(std::pair<VehicleKind, int> veh, int t, int slot) const {
        return level.at(veh)[static_cast<std::size_t>(t)][static_cast<std::size_t>(slot)];
    }

    void add_variables() {
        x.assign(static_cast<std::size_t>(T), std::vector<std::vector<int>>(
                                                  static_cast<std::size_t>(n + 1), std::vector<int>(static_cast<std::size_t>(n + 1), -1)));
        for (int t = 0; t < T; ++t)
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j)
                    if (i != j) x[t][i][j] = m.add_variable(names::x(t, i, j), VarKind::binary);
        u.assign(static_cast<std::size_t>(n + 1), -1);
        for (int c = 1; c <= n; ++c) u[c] = m.add_variable(names::u(c), VarKind::continuous, 1.0, n);
        A.assign(static_cast<std::size_t>(T), std::vector<int>(static_cast<std::size_t>(n + 1), -1));
        for (int t = 0; t < T; ++t) {
            for (int c = 1; c <= n; ++c) A[t][c] = m.add_variable(names::A(t, Tok::node(c)), VarKind::continuous);
            A[t][0] = m.add_variable(names::A(t, Tok::end()), VarKind::continuous);
        }
        gamma = m.add_variable("Gamma", VarKind::continuous);

        const int cap = opt.sortie_capacity(fleet);
        std::vector<int> customers = inst.customer_ids();
        for (auto veh : vehicles()) {
            const auto [kind, vid] = veh;
            for (int ti = 0; ti < T; ++ti) {
                for (int tk = 0; tk < T; ++tk) {
                    for (int i = 0; i <= n; ++i) {
                        for (int kk = 1; kk <= n + 1; ++kk) {
                            const int k = kk == n + 1 ? 0 : kk;
                            if (i == k && i != 0) continue;
                            std::vector<int> rest;
                            for (int c : customers)
                                if (c != i && c != k) rest.push_back(c);
                            for (auto& seq : enumerate_sequences(rest, cap)) {
                                SortieVar s;
                                s.kind = kind;
                                s.vehicle = vid;
                                s.launch_truck = ti;
                                s.recovery_truck = tk;
                                s.launch = i;
                                s.recovery = k;
                                s.distance = sortie_distance(kind, i, seq, k, inst);
                                s.energy = energy::sortie_energy(kind, i, seq, k, inst, fleet);
                                const std::string suffix = names::sortie_suffix(kind, vid, ti, tk, i, k, seq);
                                s.sequence = std::move(seq);
                                s.select = m.add_variable(names::select(kind, suffix), VarKind::binary);
                                s.launch_time = m.add_variable(names::launch_time(suffix), VarKind::continuous);
                                if (kind == VehicleKind::robot)
                                    s.linearized = m.add_variable(names::linearized(suffix), VarKind::continuous);
                                m.sorties.push_back(std::move(s));
                            }
                        }
                    }
                }
            }
        }
        for (auto veh : vehicles()) etot[veh] = m.add_variable(names::etot(veh.first, veh.second), VarKind::continuous);

        if (opt.charging) {
            for (auto veh : vehicles()) {
                auto& c = charge[veh];
                c.assign(static_cast<std::size_t>(T), std::vector<int>(static_cast<std::size_t>(n + 1), -1));
                for (int t = 0; t < T; ++t)
                    for (int v = 0; v <= n; ++v)
                        c[t][v] = m.add_variable(names::charge(veh.first, veh.second, t, Tok::launch(v)),
                                                 VarKind::continuous);
            }
            ctime.assign(static_cast<std::size_t>(T), std::vector<int>(static_cast<std::size_t>(n + 1), -1));
            for (int t = 0; t < T; ++t)
                for (int v = 0; v <= n; ++v)
                    ctime[t][v] = m.add_variable(names::charge_time(t, Tok::launch(v)), VarKind::continuous);
        }

        for (auto veh : vehicles()) {
            const auto [kind, vid] = veh;
            const double B = fleet.battery(kind);
            auto& rs = rides[veh];
            for (int t = 0; t < T; ++t)
                for (int i = 0; i <= n; ++i)
                    for (int j = 0; j <= n; ++j)
                        if (i != j)
                            rs.push_back({t, i, j,
                                          m.add_variable(names::ride(kind, vid, t, Tok::launch(i), Tok::recovery(j)),
                                                         VarKind::binary)});
            auto& lv = level[veh];
            lv.assign(static_cast<std::size_t>(T), std::vector<int>(static_cast<std::size_t>(n + 2), -1));
            for (int t = 0; t < T; ++t) {
                lv[t][0] = m.add_variable(names::level(kind, vid, t, Tok::start()), VarKind::continuous, B, B);
                for (int c = 1; c <= n; ++c)
                    lv[t][c] = m.add_variable(names::level(kind, vid, t, Tok::node(c)), VarKind::continuous);
                lv[t][n + 1] = m.add_variable(names::level(kind, vid, t, Tok::end()), VarKind::continuous);
            }
            idle[veh] = m.add_variable(names::idle(kind, vid), VarKind::binary);
        }
    }

    // Σ_j x^t_{j v} for a customer; the depot start copy is present when the
    // truck leaves the depot.
    std::vector<Term> launch_presence(int t, int v, double coef) const {
        std::vector<Term> terms;
        for (int j = 0; j <= n; ++j) {
            if (j == v) continue;
            terms.push_back({v == 0 ? x[t][0][j] : x[t][j][v], coef});
        }
        return terms;
    }

    // Σ_j x^t_{v j} for a customer; the end copy is present when the truck
    // returns to the depot.
    std::vector<Term> recovery_presence(int t, int v, double coef) const {
        std::vector<Term> terms;
        for (int j = 0; j <= n; ++j) {
            if (j == v) continue;
            terms.push_back({v == 0 ? x[t][j][0] : x[t][v][j], coef});
        }
        return terms;
    }

    void add_objective() {
        const double a = fleet.alpha;
        for (int t = 0; t < T; ++t)
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j) {
                    if (i == j) continue;
                    double coef = a * fleet.C_t * truck_distance(inst, fleet, i, j);
                    if (i == 0) coef += a * fleet.f_t;
                    if (coef != 0.0) m.objective.push_back({x[t][i][j], coef});
                }
        for (const auto& s : m.sorties) {
            const double coef = a * (fleet.unit_cost(s.kind) * s.distance + fleet.fixed_cost(s.kind));
            if (coef != 0.0) m.objective.push_back({s.select, coef});
        }
        if (1.0 - a != 0.0) m.objective.push_back({gamma, 1.0 - a});
    }


    void add_constraints() {
        const double BIG = fleet.big_M;
        const double V = n + 1;  // |V|
        std::map<std::pair<VehicleKind, int>, std::vector<const SortieVar*>> by_vehicle;
        for (const auto& s : m.sorties) by_vehicle[{s.kind, s.vehicle}].push_back(&s);
        const auto vehs = vehicles();

        for (int t = 0; t < T; ++t) {
            std::vector<Term> row{{gamma, 1.0}};
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j)
                    if (i != j) row.push_back({x[t][i][j], -travel(i, j)});
            m.add_constraint(family::makespan_truck, row, Sense::ge, 0.0);
        }
        for (auto veh : vehs) {
            std::vector<Term> row{{gamma, 1.0}};
            for (const auto* s : by_vehicle[veh]) row.push_back({s->select, -s->distance / fleet.speed(veh.first)});
            m.add_constraint(family::by_kind(veh.first, family::makespan_drone, family::makespan_robot), row,
                             Sense::ge, 0.0);
        }

        {
            std::vector<std::vector<Term>> rows(static_cast<std::size_t>(n + 1));
            for (int j = 1; j <= n; ++j)
                for (int t = 0; t < T; ++t)
                    for (int i = 0; i <= n; ++i)
                        if (i != j) rows[j].push_back({x[t][i][j], 1.0});
            for (const auto& s : m.sorties)
                for (int c : s.sequence) rows[c].push_back({s.select, 1.0});
            for (int j = 1; j <= n; ++j) m.add_constraint(family::visit_once, rows[j], Sense::eq, 1.0);
        }

        for (int t = 0; t < T; ++t) {
            m.add_constraint(family::depot_start_end, launch_presence(t, 0, 1.0), Sense::le, 1.0);
            m.add_constraint(family::depot_start_end, recovery_presence(t, 0, 1.0), Sense::le, 1.0);
        }

        for (int t = 0; t < T; ++t) {
            for (int v = 0; v <= n; ++v) {
                std::vector<Term> row;
                for (int i = 0; i <= n; ++i) {
                    if (i == v) continue;
                    row.push_back({x[t][i][v], 1.0});
                    row.push_back({x[t][v][i], -1.0});
                }
                m.add_constraint(family::flow_conservation, row, Sense::eq, 0.0);
            }
        }

        for (int t = 0; t < T; ++t)
            for (int i = 1; i <= n; ++i)
                for (int j = 1; j <= n; ++j)
                    if (i != j)
                        m.add_constraint(family::subtour_mtz, {{u[i], 1.0}, {u[j], -1.0}, {x[t][i][j], double(n)}},
                                         Sense::le, n - 1.0);

        for (VehicleKind kind : {VehicleKind::drone, VehicleKind::robot}) {
            std::map<std::tuple<int, int, int>, std::vector<int>> launches, recoveries;
            for (const auto& s : m.sorties) {
                if (s.kind != kind) continue;
                launches[{s.launch_truck, s.recovery_truck, s.launch}].push_back(s.select);
                recoveries[{s.launch_truck, s.recovery_truck, s.recovery}].push_back(s.select);
            }
            for (const auto& [key, sel] : launches) {
                const auto [ti, tk, i] = key;
                auto row = launch_presence(ti, i, -1.0);
                for (int v : sel) row.push_back({v, 1.0});
                m.add_constraint(family::by_kind(kind, family::launch_presence_drone, family::launch_presence_robot),
                                 row, Sense::le, 0.0);
            }
            for (const auto& [key, sel] : recoveries) {
                const auto [ti, tk, k] = key;
                auto row = recovery_presence(tk, k, -1.0);
                for (int v : sel) row.push_back({v, 1.0});
                m.add_constraint(
                    family::by_kind(kind, family::recovery_presence_drone, family::recovery_presence_robot), row,
                    Sense::le, 0.0);
            }
        }

        // u_k >= u_i + 1 - |V|(1 - y); u is 0 at the start copy and |C|+1 at the end copy.
        for (const auto& s : m.sorties) {
            std::vector<Term> row;
            double rhs = 1.0 - V;
            if (s.recovery > 0)
                row.push_back({u[s.recovery], 1.0});
            else
                rhs -= n + 1.0;
            if (s.launch > 0) row.push_back({u[s.launch], -1.0});
            row.push_back({s.select, -V});
            m.add_constraint(family::by_kind(s.kind, family::precedence_drone, family::precedence_robot), row,
                             Sense::ge, rhs);
        }

        for (const auto& s : m.sorties)
            m.add_constraint(family::by_kind(s.kind, family::payload_drone, family::payload_robot),
                             {{s.select, sortie_payload(s.sequence, inst)}}, Sense::le, fleet.payload(s.kind));
        for (const auto& s : m.sorties)
            m.add_constraint(family::by_kind(s.kind, family::range_drone, family::range_robot),
                             {{s.select, s.distance}}, Sense::le, fleet.max_range(s.kind));

        for (auto veh : vehs) {
            if (veh.first != VehicleKind::drone) continue;
            std::vector<Term> row{{etot[veh], 1.0}};
            for (const auto* s : by_vehicle[veh]) row.push_back({s->select, -s->energy});
            m.add_constraint(family::energy_drone, row, Sense::eq, 0.0);
        }
        for (const auto& s : m.sorties) {
            if (s.kind != VehicleKind::robot) continue;
            const double M = std::max(BIG, s.energy);
            m.add_constraint(family::robot_energy_linearization, {{s.linearized, 1.0}}, Sense::le, s.energy);
            m.add_constraint(family::robot_energy_linearization, {{s.linearized, 1.0}, {s.select, -M}}, Sense::le,
                             0.0);
            m.add_constraint(family::robot_energy_linearization, {{s.linearized, 1.0}, {s.select, -M}}, Sense::ge,
                             s.energy - M);
        }
        for (auto veh : vehs) {
            if (veh.first != VehicleKind::robot) continue;
            std::vector<Term> row{{etot[veh], 1.0}};
            for (const auto* s : by_vehicle[veh]) row.push_back({s->linearized, -1.0});
            m.add_constraint(family::robot_energy_linearization, row, Sense::eq, 0.0);
        }

        for (int t = 0; t < T; ++t)
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j)
                    if (i != j && truck_distance(inst, fleet, i, j) >= BIG)
                        m.add_constraint(family::unreachable_arcs, {{x[t][i][j], 1.0}}, Sense::eq, 0.0);

        for (auto veh : vehs) {
            const auto kind = veh.first;
            std::vector<Term> row;
            for (const auto* s : by_vehicle[veh]) {
                if (s->launch != 0) continue;
                if (kind == VehicleKind::drone)
                    row.push_back({s->select, s->energy});
                else
                    row.push_back({s->linearized, 1.0});
            }
            m.add_constraint(family::by_kind(kind, family::depot_full_charge_drone, family::depot_full_charge_robot),
                             row, Sense::le, fleet.battery(kind));
        }

        if (opt.charging) {
            for (auto veh : vehs)
                for (int t = 0; t < T; ++t)
                    m.add_constraint(
                        family::by_kind(veh.first, family::depot_no_charge_drone, family::depot_no_charge_robot),
                        {{charge[veh][t][0], 1.0}}, Sense::eq, 0.0);
            for (auto veh : vehs) {
                const double rate = fleet.charge_rate(veh.first);
                for (int t = 0; t < T; ++t)
                    for (int v = 1; v <= n; ++v) {
                        std::vector<Term> row{{charge[veh][t][v], 1.0}};
                        for (int i = 0; i <= n; ++i) {
                            if (i == v) continue;
                            row.push_back({x[t][i][v], -rate});
                            row.push_back({x[t][v][i], -rate});
                        }
                        m.add_constraint(
                            family::by_kind(veh.first, family::charge_gate_drone, family::charge_gate_robot), row,
                            Sense::le, 0.0);
                    }
            }
        }

        for (auto veh : vehs) {
            std::vector<Term> row{{etot[veh], 1.0}};
            if (opt.charging)
                for (int t = 0; t < T; ++t)
                    for (int v = 1; v <= n; ++v) row.push_back({charge[veh][t][v], -1.0});
            m.add_constraint(family::by_kind(veh.first, family::battery_balance_drone, family::battery_balance_robot),
                             row, Sense::le, fleet.battery(veh.first));
        }

        if (opt.charging) {
            for (int t = 0; t < T; ++t)
                for (int v = 0; v <= n; ++v) {
                    std::vector<Term> row{{ctime[t][v], 1.0}};
                    for (int j = 0; j <= n; ++j)
                        if (j != v) row.push_back({x[t][v][j], -travel(v, j)});
                    m.add_constraint(family::charge_time, row, Sense::le, 0.0);
                }
            for (auto veh : vehs)
                for (int t = 0; t < T; ++t)
                    for (int v = 0; v <= n; ++v)
                        m.add_constraint(
                            family::by_kind(veh.first, family::charge_rate_drone, family::charge_rate_robot),
                            {{charge[veh][t][v], 1.0}, {ctime[t][v], -fleet.charge_rate(veh.first)}}, Sense::le, 0.0);
            for (auto veh : vehs)
                for (int t = 0; t < T; ++t)
                    for (int slot = 1; slot <= n + 1; ++slot)
                        m.add_constraint(
                            family::by_kind(veh.first, family::overcharge_drone, family::overcharge_robot),
                            {{level_var(veh, t, slot), 1.0}}, Sense::le, fleet.battery(veh.first));
        }

        // A_j >= A_i + d_ij/s_t - M(1 - x_ij); A is 0 at the start copy.
        for (int t = 0; t < T; ++t)
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j <= n; ++j) {
                    if (i == j) continue;
                    std::vector<Term> row{{A[t][j], 1.0}};
                    if (i != 0) row.push_back({A[t][i], -1.0});
                    row.push_back({x[t][i][j], -(travel(i, j) + BIG)});
                    m.add_constraint(family::truck_sequencing, row, Sense::ge, -BIG);
                }

        for (const auto& s : m.sorties) {
            std::vector<Term> row{{s.launch_time, 1.0}};
            if (s.launch != 0) row.push_back({A[s.launch_truck][s.launch], -1.0});
            row.push_back({s.select, -BIG});
            m.add_constraint(family::by_kind(s.kind, family::launch_sync_drone, family::launch_sync_robot), row,
                             Sense::ge, -BIG);
        }
        for (const auto& s : m.sorties) {
            const double flight = s.distance / fleet.speed(s.kind);
            m.add_constraint(family::by_kind(s.kind, family::return_sync_drone, family::return_sync_robot),
                             {{s.launch_time, 1.0}, {A[s.recovery_truck][s.recovery], -1.0}, {s.select, BIG}},
                             Sense::le, BIG - flight);
        }

        for (auto veh : vehs) {
            const auto kind = veh.first;
            const auto fam = family::by_kind(kind, family::itinerary_drone, family::itinerary_robot);
            const auto& rs = rides[veh];
            std::vector<Term> start{{idle[veh], 1.0}};
            for (const auto& r : rs)
                if (r.i == 0) start.push_back({r.var, 1.0});
            for (const auto* s : by_vehicle[veh])
                if (s->launch == 0) start.push_back({s->select, 1.0});
            m.add_constraint(fam, start, Sense::eq, 1.0);

            std::vector<std::vector<std::vector<Term>>> balance(
                static_cast<std::size_t>(T), std::vector<std::vector<Term>>(static_cast<std::size_t>(n + 1)));
            for (const auto& r : rs) {
                if (r.j != 0) balance[r.t][r.j].push_back({r.var, 1.0});
                if (r.i != 0) balance[r.t][r.i].push_back({r.var, -1.0});
            }
            for (const auto* s : by_vehicle[veh]) {
                if (s->recovery != 0) balance[s->recovery_truck][s->recovery].push_back({s->select, 1.0});
                if (s->launch != 0) balance[s->launch_truck][s->launch].push_back({s->select, -1.0});
            }
            for (int t = 0; t < T; ++t)
                for (int v = 1; v <= n; ++v) m.add_constraint(fam, balance[t][v], Sense::eq, 0.0);
            for (const auto& r : rs) m.add_constraint(fam, {{r.var, 1.0}, {x[r.t][r.i][r.j], -1.0}}, Sense::le, 0.0);
        }

        for (auto veh : vehs) {
            const auto kind = veh.first;
            const auto fam = family::by_kind(kind, family::battery_level_drone, family::battery_level_robot);
            const double B = fleet.battery(kind);
            for (const auto& r : rides[veh]) {
                std::vector<Term> row{{level_var(veh, r.t, r.j == 0 ? n + 1 : r.j), 1.0},
                                      {level_var(veh, r.t, r.i), -1.0}};
                if (opt.charging) row.push_back({charge[veh][r.t][r.i], -1.0});
                row.push_back({r.var, B});
                m.add_constraint(fam, row, Sense::le, B);
            }
            for (const auto* s : by_vehicle[veh]) {
                const double M = B + s->energy;
                m.add_constraint(fam,
                                 {{level_var(veh, s->recovery_truck, s->recovery == 0 ? n + 1 : s->recovery), 1.0},
                                  {level_var(veh, s->launch_truck, s->launch), -1.0},
                                  {s->select, M}},
                                 Sense::le, M - s->energy);
            }
        }

        if (opt.charging) {
            for (auto veh : vehs) {
                const double B = fleet.battery(veh.first);
                std::vector<std::vector<std::vector<Term>>> rows(
                    static_cast<std::size_t>(T), std::vector<std::vector<Term>>(static_cast<std::size_t>(n + 1)));
                for (int t = 0; t < T; ++t)
                    for (int v = 0; v <= n; ++v) rows[t][v].push_back({charge[veh][t][v], 1.0});
                for (const auto& r : rides[veh]) rows[r.t][r.i].push_back({r.var, -B});
                for (int t = 0; t < T; ++t)
                    for (int v = 0; v <= n; ++v)
                        m.add_constraint(
                            family::by_kind(veh.first, family::charge_aboard_drone, family::charge_aboard_robot),
                            rows[t][v], Sense::le, 0.0);
            }
        }

        if (opt.single_trip) {
            for (auto veh : vehs) {
                std::vector<Term> row;
                for (const auto* s : by_vehicle[veh]) row.push_back({s->select, 1.0});
                m.add_constraint(family::by_kind(veh.first, family::single_trip_drone, family::single_trip_robot), row,
                                 Sense::le, 1.0);
            }
        }
        if (opt.fixed_docking) {
            for (const auto& s : m.sorties)
                if (s.launch_truck != s.recovery_truck)
                    m.add_constraint(family::fixed_docking, {{s.select, 1.0}}, Sense::eq, 0.0);
        }
    }
};

}  // namespace

MilpModel build_model(const Instance& inst, const FleetSpec& fleet, const ModelOptions& options) {
    inst.validate();
    fleet.validate();
    const std::int64_t count = count_sortie_variables(inst, fleet, options);
    if (count > options.max_sortie_variables)
        throw ModelSizeError("model needs " + std::to_string(count) + " sortie variables, budget is " +
                             std::to_string(options.max_sortie_variables));
    Builder b(inst, fleet, options);
    for (auto f : family::registered(options)) b.m.groups.emplace_back(f);
    b.add_variables();
    b.add_objective();
    b.add_constraints();
    return std::move(b.m);
}

// ---------------------------------------------------------------------------
// LP text
// ---------------------------------------------------------------------------

namespace {

std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool lp_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '(' || c == ')' || c == '[' ||
           c == ']' || c == '#';
}

std::string sanitize(const std::string& raw) {
    std::string s = raw.substr(0, std::min<std::size_t>(raw.size(), 255));
    for (char& c : s)
        if (!lp_char(c)) c = '_';
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '.') s.insert(s.begin(), '_');
    if (s.size() > 255) s.resize(255);
    return s;
}

void write_terms(std::string& out, const std::vector<Term>& terms, const std::vector<std::string>& names) {
    std::size_t on_line = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const Term& t = terms[i];
        if (on_line == 8) {
            out += "\n  ";
            on_line = 0;
        }
        const bool neg = t.coef < 0.0;
        if (i > 0 || neg) out += neg ? " - " : " + ";
        else out += ' ';
        const double mag = std::abs(t.coef);
        if (mag != 1.0) out += num(mag) + ' ';
        out += names[static_cast<std::size_t>(t.var)];
        ++on_line;
    }
}

}  // namespace

std::string export_lp(const MilpModel& model) {
    std::vector<std::string> vnames;
    vnames.reserve(model.variables.size());
    std::unordered_map<std::string, std::string> seen;
    auto claim = [&](const std::string& raw) {
        std::string s = sanitize(raw);
        auto [it, fresh] = seen.emplace(s, raw);
        if (!fresh && it->second != raw)
            throw LpNameError("names '" + it->second + "' and '" + raw + "' collide as '" + s + "'");
        return s;
    };
    for (const auto& v : model.variables) vnames.push_back(claim(v.name));

    std::string out;
    out += "\\ vrpdr model\n";
    out += "Minimize\n obj:";
    write_terms(out, model.objective, vnames);
    out += "\nSubject To\n";
    for (const auto& c : model.constraints) {
        out += ' ' + claim(c.name) + ':';
        write_terms(out, c.terms, vnames);
        out += c.sense == Sense::le ? " <= " : c.sense == Sense::ge ? " >= " : " = ";
        out += num(c.rhs) + '\n';
    }
    out += "Bounds\n";
    for (std::size_t i = 0; i < model.variables.size(); ++i) {
        const auto& v = model.variables[i];
        if (v.kind == VarKind::binary) continue;
        const std::string& nm = vnames[i];
        const bool lo_inf = v.lower == -kInf;
        const bool up_inf = v.upper == kInf;
        if (lo_inf && up_inf)
            out += ' ' + nm + " free\n";
        else if (!lo_inf && v.lower == v.upper)
            out += ' ' + nm + " = " + num(v.lower) + '\n';
        else if (up_inf) {
            if (v.lower != 0.0) out += ' ' + nm + " >= " + num(v.lower) + '\n';
        } else {
            out += ' ' + (lo_inf ? std::string("-inf") : num(v.lower)) + " <= " + nm + " <= " + num(v.upper) + '\n';
        }
    }
    out += "Binaries\n";
    std::size_t on_line = 0;
    for (std::size_t i = 0; i < model.variables.size(); ++i) {
        if (model.variables[i].kind != VarKind::binary) continue;
        out += ' ' + vnames[i];
        if (++on_line == 10) {
            out += '\n';
            on_line = 0;
        }
    }
    if (on_line) out += '\n';
    out += "End\n";
    return out;
}

ParsedLp parse_lp(const std::string& text) {
    ParsedLp out;
    enum class Section { none, objective, constraints, bounds, binaries, end } section = Section::none;
    std::istringstream in(text);
    std::string line;
    std::string pending_name;
    std::size_t pending_terms = 0;
    bool in_row = false;
    auto flush = [&] {
        if (!in_row) return;
        if (section == Section::objective)
            out.objective_terms = pending_terms;
        else
            out.constraint_terms.emplace_back(pending_name, pending_terms);
        in_row = false;
        pending_terms = 0;
    };
    auto count_terms = [&](const std::string& body) {
        std::istringstream tk(body);
        std::string tok;
        while (tk >> tok) {
            if (tok == "<=" || tok == ">=" || tok == "=") return true;  // rest is rhs
            if (tok == "+" || tok == "-") continue;
            const char c = tok[0];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') continue;  // coefficient
            ++pending_terms;
        }
        return false;
    };
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '\\') continue;
        const std::string head = line.substr(0, line.find_first_of(" \t"));
        if (line[0] != ' ') {
            flush();
            if (head == "Minimize") section = Section::objective;
            else if (head == "Subject") section = Section::constraints;
            else if (head == "Bounds") section = Section::bounds;
            else if (head == "Binaries") section = Section::binaries;
            else if (head == "End") section = Section::end;
            else throw Error("unexpected LP line: " + line);
            continue;
        }
        switch (section) {
            case Section::objective:
            case Section::constraints: {
                const auto colon = line.find(':');
                std::string body = line;
                if (colon != std::string::npos && line.compare(0, 2, "  ") != 0) {
                    flush();
                    in_row = true;
                    pending_name = line.substr(1, colon - 1);
                    body = line.substr(colon + 1);
                }
                if (count_terms(body)) flush();
                break;
            }
            case Section::bounds: ++out.bound_lines; break;
            case Section::binaries: {
                std::istringstream tk(line);
                std::string tok;
                while (tk >> tok) out.binaries.push_back(tok);
                break;
            }
            default: throw Error("LP content outside a section: " + line);
        }
    }
    flush();
    return out;
}

// ---------------------------------------------------------------------------
// Plans and assignments
// ---------------------------------------------------------------------------

ObjectiveBreakdown objective_value(const Plan& plan, const Instance& inst, const FleetSpec& fleet) {
    ObjectiveBreakdown o;
    for (const auto& r : plan.truck_routes) {
        for (std::size_t p = 0; p + 1 < r.size(); ++p) o.variable_cost += fleet.C_t * truck_distance(inst, fleet, r[p], r[p + 1]);
        if (r.size() >= 3 && r.front() == 0 && r[1] != 0) o.fixed_cost += fleet.f_t;
    }
    for (const auto& s : plan.sorties) {
        o.variable_cost += fleet.unit_cost(s.vehicle_kind) * sortie_distance(s, inst);
        o.fixed_cost += fleet.fixed_cost(s.vehicle_kind);
    }
    o.makespan = validator::model_makespan(plan, inst, fleet);
    o.weighted = fleet.alpha * (o.variable_cost + o.fixed_cost) + (1.0 - fleet.alpha) * o.makespan;
    return o;
}

std::vector<double> induced_assignment(const MilpModel& model, const Plan& plan, const Instance& inst,
                                       const FleetSpec& fleet, const ModelOptions& options) {
    using names::Tok;
    std::vector<double> val(model.variables.size(), 0.0);
    auto set = [&](const std::string& name, double v) { val[static_cast<std::size_t>(model.at(name))] = v; };
    const int n = inst.num_customers();
    const int T = static_cast<int>(plan.truck_routes.size());
    detail::PlanIndex index(plan, inst.num_nodes());

    for (int t = 0; t < T; ++t) {
        const auto& r = plan.truck_routes[static_cast<std::size_t>(t)];
        const auto& a = plan.truck_arrivals[static_cast<std::size_t>(t)];
        for (std::size_t p = 0; p + 1 < r.size(); ++p)
            if (r[p] != r[p + 1]) set(names::x(t, r[p], r[p + 1]), 1.0);
        for (std::size_t p = 1; p + 1 < r.size(); ++p) set(names::A(t, Tok::node(r[p])), a[p].time);
        if (!a.empty()) set(names::A(t, Tok::end()), a.back().time);
        if (options.charging) {
            for (std::size_t p = 0; p + 1 < r.size(); ++p)
                set(names::charge_time(t, Tok::launch(r[p])), truck_travel_time(inst, fleet, r[p], r[p + 1]));
        }
    }
    if (auto u = validator::precedence_potentials(plan, inst)) {
        for (int c = 1; c <= n; ++c) set(names::u(c), (*u)[static_cast<std::size_t>(c)]);
    } else {
        for (int c = 1; c <= n; ++c) set(names::u(c), 1.0);
    }
    set("Gamma", validator::model_makespan(plan, inst, fleet));

    std::map<std::tuple<VehicleKind, int, int, int>, double> charged;
    for (const auto& e : plan.charging_events) charged[{e.vehicle_kind, e.vehicle_id, e.truck_id, e.node}] += e.amount;
    if (options.charging)
        for (const auto& [key, amount] : charged) {
            const auto& [kind, vid, t, v] = key;
            set(names::charge(kind, vid, t, Tok::launch(v)), amount);
        }

    int carrier = -1;
    for (int t = 0; t < T && carrier < 0; ++t)
        if (index.used(t)) carrier = t;

    auto level_name = [&](VehicleKind kind, int vid, int t, int v, bool end) {
        return names::level(kind, vid, t, v == 0 ? (end ? Tok::end() : Tok::start()) : Tok::node(v));
    };

    for (VehicleKind kind : {VehicleKind::drone, VehicleKind::robot}) {
        for (int vid = 0; vid < fleet.vehicle_count(kind); ++vid) {
            std::vector<const Sortie*> list;
            for (const auto& s : plan.sorties)
                if (s.vehicle_kind == kind && s.vehicle_id == vid) list.push_back(&s);
            std::stable_sort(list.begin(), list.end(),
                             [](const Sortie* a, const Sortie* b) { return a->launch_time < b->launch_time; });
            if (list.empty() && carrier < 0) {
                set(names::idle(kind, vid), 1.0);
                continue;
            }

            double etot = 0.0;
            double level = fleet.battery(kind);
            // Ride legs of truck t between positions [from, to), charging on the way.
            auto ride = [&](int t, int from, int to) {
                const auto& r = plan.truck_routes[static_cast<std::size_t>(t)];
                for (int p = from; p < to; ++p) {
                    const int i = r[static_cast<std::size_t>(p)];
                    const int j = r[static_cast<std::size_t>(p) + 1];
                    set(names::ride(kind, vid, t, Tok::launch(i), Tok::recovery(j)), 1.0);
                    if (options.charging) {
                        auto it = charged.find({kind, vid, t, i});
                        if (it != charged.end()) level += it->second;
                    }
                    set(level_name(kind, vid, t, j, true), level);
                }
            };
            auto last = [&](int t) { return static_cast<int>(plan.truck_routes[static_cast<std::size_t>(t)].size()) - 1; };

            if (list.empty()) {
                ride(carrier, 0, last(carrier));
                continue;
            }
            const Sortie& first = *list.front();
            ride(first.launch_truck, 0, index.launch_pos(first.launch_truck, first.launch_node).value_or(0));
            for (std::size_t q = 0; q < list.size(); ++q) {
                const Sortie& s = *list[q];
                const double e = energy::sortie_energy(s, inst, fleet);
                const std::string suffix = names::sortie_suffix(kind, vid, s.launch_truck, s.recovery_truck,
                                                                s.launch_node, s.recovery_node, s.sequence);
                set(names::select(kind, suffix), 1.0);
                set(names::launch_time(suffix), s.launch_time);
                if (kind == VehicleKind::robot) set(names::linearized(suffix), e);
                etot += e;
                level -= e;
                set(level_name(kind, vid, s.recovery_truck, s.recovery_node, true), level);
                const int from = index.recovery_pos(s.recovery_truck, s.recovery_node).value_or(last(s.recovery_truck));
                const int to = q + 1 < list.size()
                                   ? index.launch_pos(list[q + 1]->launch_truck, list[q + 1]->launch_node).value_or(from)
                                   : last(s.recovery_truck);
                ride(s.recovery_truck, from, std::max(from, to));
            }
            set(names::etot(kind, vid), etot);
        }
    }
    for (VehicleKind kind : {VehicleKind::drone, VehicleKind::robot})
        for (int vid = 0; vid < fleet.vehicle_count(kind); ++vid)
            for (int t = 0; t < T; ++t) set(names::level(kind, vid, t, Tok::start()), fleet.battery(kind));
    return val;
}

std::vector<Residual> check_assignment(const MilpModel& model, const std::vector<double>& values, double tol) {
    std::vector<Residual> out;
    if (values.size() != model.variables.size())
        throw std::invalid_argument("assignment has " + std::to_string(values.size()) + " values for " +
                                    std::to_string(model.variables.size()) + " variables");
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& v = model.variables[i];
        const double x = values[i];
        double bad = std::max(v.lower - x, x - v.upper);
        if (v.kind == VarKind::binary) bad = std::max(bad, std::abs(x - std::round(x)));
        if (bad > tol) out.push_back({v.name, "bounds", bad});
    }
    for (const auto& c : model.constraints) {
        double lhs = 0.0;
        for (const Term& t : c.terms) lhs += t.coef * values[static_cast<std::size_t>(t.var)];
        const double diff = lhs - c.rhs;
        const double bad = c.sense == Sense::le ? diff : c.sense == Sense::ge ? -diff : std::abs(diff);
        // Rows carry big-M coefficients; scale the tolerance with the row magnitude.
        double scale = std::max(1.0, std::abs(c.rhs));
        for (const Term& t : c.terms) scale = std::max(scale, std::abs(t.coef));
        if (bad > tol * scale) out.push_back({c.name, c.group, bad});
    }
    return out;
}

double evaluate_objective(const MilpModel& model, const std::vector<double>& values) {
    double z = 0.0;
    for (const Term& t : model.objective) z += t.coef * values[static_cast<std::size_t>(t.var)];
    return z;
}

}  // namespace vrpdr::milp
