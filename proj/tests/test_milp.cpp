#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "support.hpp"
#include "vrpdr/bench.hpp"
#include "vrpdr/exact.hpp"
#include "vrpdr/families.hpp"
#include "vrpdr/finder.hpp"
#include "vrpdr/milp.hpp"

using namespace vrpdr;
using vrpdr::testing::make_instance;
using vrpdr::testing::make_plan;
using vrpdr::testing::truck_only;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_prefix(const milp::MilpModel& m, const std::string& prefix) {
    return static_cast<std::size_t>(std::count_if(m.variables.begin(), m.variables.end(), [&](const auto& v) {
        return v.name.rfind(prefix, 0) == 0;
    }));
}

// Brute-force count of (launch, sequence, recovery) triples for one truck pair
// and one vehicle: launch is the start copy or a customer, recovery the end
// copy or a customer, no node repeats and a customer launch differs from a
// customer recovery.
std::int64_t brute_sorties(int n, int cap) {
    std::int64_t count = 0;
    std::vector<int> seq;
    auto rec = [&](auto&& self, int launch, int recovery) -> void {
        if (!seq.empty()) ++count;
        if (static_cast<int>(seq.size()) == cap) return;
        for (int c = 1; c <= n; ++c) {
            if (c == launch || c == recovery || std::find(seq.begin(), seq.end(), c) != seq.end()) continue;
            seq.push_back(c);
            self(self, launch, recovery);
            seq.pop_back();
        }
    };
    for (int launch = 0; launch <= n; ++launch)
        for (int recovery = 0; recovery <= n; ++recovery) {
            if (launch != 0 && launch == recovery) continue;
            rec(rec, launch, recovery);
        }
    return count;
}

}  // namespace

TEST(BuildModel, OneCustomerTruckOnlyHasTwoForcedArcs) {
    auto inst = make_instance({{1, 0, 2}});
    const auto fleet = truck_only();
    const ModelOptions opt;
    const auto m = milp::build_model(inst, fleet, opt);
    EXPECT_EQ(m.count_binaries(), 2u);
    const int a = m.at("x_t0_0_1"), b = m.at("x_t0_1_0");

    const Plan tour = make_plan(inst, fleet, {{0, 1, 0}});
    auto values = milp::induced_assignment(m, tour, inst, fleet, opt);
    EXPECT_EQ(values[a], 1.0);
    EXPECT_EQ(values[b], 1.0);
    EXPECT_TRUE(milp::check_assignment(m, values).empty());
    for (int var : {a, b}) {
        auto broken = values;
        broken[var] = 0.0;
        EXPECT_FALSE(milp::check_assignment(m, broken).empty());
    }
}

TEST(BuildModel, SortieCountMatchesEnumeration) {
    auto inst = make_instance({{1, 0, 1}, {2, 0, 1}});
    FleetSpec fleet;
    fleet.num_robots = 0;
    fleet.m = 1;
    ModelOptions opt;
    const auto m = milp::build_model(inst, fleet, opt);
    // start->c->end (2), c->other->end (2), start->other->c (2); c->?->c' needs a third customer.
    EXPECT_EQ(m.sorties.size(), 6u);
    EXPECT_EQ(count_prefix(m, "y_"), 6u);
    EXPECT_EQ(brute_sorties(2, 1), 6);
    for (const auto& s : m.sorties) EXPECT_EQ(s.sequence.size(), 1u);
}

TEST(BuildModel, SortieCountClosedFormAgainstBruteForce) {
    for (int n = 1; n <= 4; ++n)
        for (int cap = 1; cap <= 3; ++cap)
            for (int trucks = 1; trucks <= 2; ++trucks) {
                std::vector<vrpdr::testing::C> cs;
                for (int i = 0; i < n; ++i) cs.push_back({1.0 + i, 0.5 * i, 1.0});
                auto inst = make_instance(cs);
                FleetSpec fleet;
                fleet.m = cap;
                fleet.num_trucks = trucks;
                const ModelOptions opt;
                const std::int64_t expect = brute_sorties(n, cap) * trucks * trucks * 2;
                EXPECT_EQ(milp::count_sortie_variables(inst, fleet, opt), expect) << n << " " << cap << " " << trucks;
                if (n <= 3) EXPECT_EQ(static_cast<std::int64_t>(milp::build_model(inst, fleet, opt).sorties.size()), expect);
            }
}

TEST(BuildModel, FamilyCountsMatchClosedForms) {
    for (int n = 1; n <= 3; ++n)
        for (int T = 1; T <= 2; ++T) {
            std::vector<vrpdr::testing::C> cs;
            for (int i = 0; i < n; ++i) cs.push_back({2.0 + i, 1.0, 1.0, i != 1});
            auto inst = make_instance(cs);
            FleetSpec fleet;
            fleet.num_trucks = T;
            fleet.num_drones = 1;
            fleet.num_robots = 2;
            const auto m = milp::build_model(inst, fleet, ModelOptions{});
            const std::size_t N = n, TT = T;
            EXPECT_EQ(m.group_size(family::makespan_truck), TT);
            EXPECT_EQ(m.group_size(family::makespan_drone), 1u);
            EXPECT_EQ(m.group_size(family::makespan_robot), 2u);
            EXPECT_EQ(m.group_size(family::visit_once), N);
            EXPECT_EQ(m.group_size(family::depot_start_end), 2 * TT);
            EXPECT_EQ(m.group_size(family::flow_conservation), TT * (N + 1));
            EXPECT_EQ(m.group_size(family::subtour_mtz), TT * N * (N - 1));
            EXPECT_EQ(m.group_size(family::truck_sequencing), TT * N * (N + 1));
            // Node 2 (the second customer) is unreachable when present: 2n ordered arcs touch it.
            EXPECT_EQ(m.group_size(family::unreachable_arcs), n >= 2 ? TT * 2 * N : 0u);
            EXPECT_EQ(m.group_size(family::charge_time), TT * (N + 1));
            EXPECT_EQ(m.group_size(family::charge_rate_drone), 1 * TT * (N + 1));
            EXPECT_EQ(m.group_size(family::charge_rate_robot), 2 * TT * (N + 1));
            EXPECT_EQ(m.group_size(family::overcharge_robot), 2 * TT * (N + 1));
            EXPECT_EQ(m.group_size(family::depot_no_charge_drone), TT);
            EXPECT_EQ(m.group_size(family::depot_no_charge_robot), 2 * TT);
            EXPECT_EQ(m.group_size(family::charge_gate_drone), TT * N);
            EXPECT_EQ(m.group_size(family::charge_gate_robot), 2 * TT * N);
        }
}

TEST(BuildModel, InvariantsOnNamesBoundsAndTerms) {
    auto inst = bench::generate_instance(3, 9, FleetSpec{});
    const auto m = milp::build_model(inst, FleetSpec{}, ModelOptions{});
    std::set<std::string> names;
    for (const auto& v : m.variables) {
        EXPECT_TRUE(names.insert(v.name).second) << v.name;
        if (v.kind == milp::VarKind::binary) {
            EXPECT_EQ(v.lower, 0.0);
            EXPECT_EQ(v.upper, 1.0);
        }
    }
    const std::set<std::string> groups(m.groups.begin(), m.groups.end());
    for (const auto& c : m.constraints) {
        EXPECT_TRUE(groups.count(c.group)) << c.name;
        for (const auto& t : c.terms) ASSERT_TRUE(t.var >= 0 && t.var < static_cast<int>(m.variables.size()));
    }
}

TEST(BuildModel, DisablingChargingRemovesExactlyTheChargingFamilies) {
    auto inst = bench::generate_instance(3, 4, FleetSpec{});
    ModelOptions on, off;
    off.charging = false;
    const auto a = milp::build_model(inst, FleetSpec{}, on);
    const auto b = milp::build_model(inst, FleetSpec{}, off);

    std::set<std::string> ga(a.groups.begin(), a.groups.end()), gb(b.groups.begin(), b.groups.end());
    std::set<std::string> removed;
    std::set_difference(ga.begin(), ga.end(), gb.begin(), gb.end(), std::inserter(removed, removed.end()));
    const auto expect_list = family::charging_only();
    EXPECT_EQ(removed, std::set<std::string>(expect_list.begin(), expect_list.end()));
    EXPECT_TRUE(std::includes(ga.begin(), ga.end(), gb.begin(), gb.end()));
    for (const auto& c : b.constraints) EXPECT_FALSE(removed.count(c.group)) << c.name;

    std::set<std::string> va, vb;
    for (const auto& v : a.variables) va.insert(v.name);
    for (const auto& v : b.variables) vb.insert(v.name);
    EXPECT_TRUE(std::includes(va.begin(), va.end(), vb.begin(), vb.end()));
    for (const auto& name : va)
        if (!vb.count(name)) EXPECT_TRUE(name.rfind("c_", 0) == 0 || name.rfind("ct_", 0) == 0) << name;
    EXPECT_EQ(va.size() - vb.size(), count_prefix(a, "c_") + count_prefix(a, "ct_"));
    EXPECT_EQ(count_prefix(b, "c_") + count_prefix(b, "ct_"), 0u);
}

TEST(BuildModel, SizeBudgetIsExplicit) {
    auto inst = bench::generate_instance(12, 1, FleetSpec{});
    ModelOptions opt;
    opt.max_sortie_variables = 1000;
    EXPECT_THROW(milp::build_model(inst, FleetSpec{}, opt), ModelSizeError);
}

TEST(ExportLp, MatchesGoldenFile) {
    auto inst = make_instance({{1, 0, 2}});
    const auto text = milp::export_lp(milp::build_model(inst, truck_only(), ModelOptions{}));
    EXPECT_EQ(text, read_file(std::string(VRPDR_TEST_DATA) + "/one_customer_truck_only.lp"));
}

TEST(ExportLp, DeterministicAndRoundTrips) {
    auto inst = bench::generate_instance(3, 17, FleetSpec{});
    const auto m = milp::build_model(inst, FleetSpec{}, ModelOptions{});
    const auto text = milp::export_lp(m);
    EXPECT_EQ(text, milp::export_lp(milp::build_model(inst, FleetSpec{}, ModelOptions{})));

    const auto parsed = milp::parse_lp(text);
    std::set<int> objective_vars;
    for (const auto& t : m.objective) objective_vars.insert(t.var);
    EXPECT_EQ(parsed.objective_terms, objective_vars.size());
    ASSERT_EQ(parsed.constraint_terms.size(), m.constraints.size());
    for (std::size_t i = 0; i < m.constraints.size(); ++i) {
        std::set<int> vars;
        for (const auto& t : m.constraints[i].terms) vars.insert(t.var);
        EXPECT_EQ(parsed.constraint_terms[i].second, vars.size()) << m.constraints[i].name;
    }
    EXPECT_EQ(parsed.binaries.size(), m.count_binaries());
}

TEST(ExportLp, EmptyModel) {
    const auto text = milp::export_lp(milp::MilpModel{});
    for (const char* section : {"Minimize", "Subject To", "Bounds", "Binaries", "End"})
        EXPECT_NE(text.find(section), std::string::npos) << section;
    const auto parsed = milp::parse_lp(text);
    EXPECT_EQ(parsed.objective_terms, 0u);
    EXPECT_TRUE(parsed.constraint_terms.empty());
    EXPECT_TRUE(parsed.binaries.empty());
}

TEST(ExportLp, SanitizingCollisionThrows) {
    milp::MilpModel m;
    m.add_variable("a-b", milp::VarKind::continuous);
    m.add_variable("a_b", milp::VarKind::continuous);
    EXPECT_THROW(milp::export_lp(m), milp::LpNameError);

    milp::MilpModel ok;
    ok.objective.push_back({ok.add_variable("a-b", milp::VarKind::continuous), 1.0});
    EXPECT_NE(milp::export_lp(ok).find("a_b"), std::string::npos);
}

TEST(Objective, TenKilometreTour) {
    auto inst = make_instance({{5, 0, 1}});
    const Plan p = make_plan(inst, truck_only(), {{0, 1, 0}});
    const double expect = 0.5 * (2.9 * 10 + 30) + 0.5 * (10.0 / 45.0);
    EXPECT_NEAR(p.objective.weighted, expect, 1e-12);
    EXPECT_NEAR(p.objective.weighted, 29.6111111, 1e-6);
}

TEST(Objective, WeightEndpoints) {
    auto inst = make_instance({{5, 0, 1}, {0, 3, 1}});
    FleetSpec f = truck_only();
    f.alpha = 1.0;
    auto cost = milp::objective_value(make_plan(inst, f, {{0, 1, 2, 0}}), inst, f);
    EXPECT_NEAR(cost.weighted, cost.operational_cost(), 1e-12);
    f.alpha = 0.0;
    auto time = milp::objective_value(make_plan(inst, f, {{0, 1, 2, 0}}), inst, f);
    EXPECT_NEAR(time.weighted, time.makespan, 1e-12);
    EXPECT_NEAR(time.makespan, 16.0 / 45.0, 1e-12);
}

TEST(Objective, FixedCostPerSortie) {
    auto inst = make_instance({{2, 0, 1}, {2, 1, 1}, {4, 0, 1}});
    FleetSpec f;
    f.num_robots = 0;
    const auto t = [&](int node) { return manhattan_distance({0, 0}, inst.node(node).pos) / f.s_t; };
    using vrpdr::testing::sortie;
    const Plan one = make_plan(inst, f, {{0, 1, 3, 0}}, {sortie(VehicleKind::drone, 1, {2}, 3, t(1))});
    const Plan none = make_plan(inst, f, {{0, 1, 2, 3, 0}});
    const double drone_dist = euclidean_distance(inst.node(1).pos, inst.node(2).pos) +
                              euclidean_distance(inst.node(2).pos, inst.node(3).pos);
    EXPECT_NEAR(one.objective.fixed_cost, 30.0 + 10.0, 1e-12);
    EXPECT_NEAR(one.objective.variable_cost, 2.9 * 8.0 + 0.08 * drone_dist, 1e-12);
    EXPECT_NEAR(none.objective.fixed_cost, 30.0, 1e-12);
}

// Plans accepted by the validator induce feasible assignments whose model
// objective equals objective_value.
TEST(Substitution, ExactAndFinderPlansAreModelFeasible) {
    int checked = 0;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        for (int n : {3, 4}) {
            const FleetSpec fleet;
            auto inst = bench::generate_instance(n, seed, fleet);
            for (bool charging : {true, false}) {
                ModelOptions opt;
                opt.charging = charging;
                const auto model = milp::build_model(inst, fleet, opt);
                std::vector<Plan> plans{finder::solve_finder(inst, fleet, opt)};
                auto ex = exact::solve_exact(inst, fleet, opt, exact::SearchBudget{});
                ASSERT_TRUE(ex.plan);
                plans.push_back(*ex.plan);
                for (const auto& plan : plans) {
                    const auto values = milp::induced_assignment(model, plan, inst, fleet, opt);
                    const auto residuals = milp::check_assignment(model, values);
                    for (const auto& r : residuals) ADD_FAILURE() << seed << " n=" << n << " " << r.name << " " << r.violation;
                    EXPECT_NEAR(milp::evaluate_objective(model, values), plan.objective.weighted, 1e-9);
                    EXPECT_NEAR(milp::objective_value(plan, inst, fleet).weighted, plan.objective.weighted, 1e-9);
                    ++checked;
                }
            }
        }
    }
    EXPECT_EQ(checked, 48);
}
