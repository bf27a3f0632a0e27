#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "support.hpp"
#include "vrpdr/bench.hpp"
#include "vrpdr/exact.hpp"
#include "vrpdr/finder.hpp"
#include "vrpdr/validator.hpp"

using namespace vrpdr;
using vrpdr::testing::make_instance;
using vrpdr::testing::truck_only;

TEST(Exact, SingleCustomerTour) {
    auto inst = make_instance({{1, 0, 1}});
    const auto res = exact::solve_exact(inst, truck_only(), ModelOptions{}, exact::SearchBudget{});
    ASSERT_EQ(res.status, exact::Status::optimal);
    ASSERT_TRUE(res.plan);
    EXPECT_EQ(res.plan->truck_routes, (std::vector<std::vector<int>>{{0, 1, 0}}));
    EXPECT_TRUE(res.plan->sorties.empty());
    const double expect = 0.5 * (2.9 * 2 + 30) + 0.5 * (2.0 / 45.0);
    EXPECT_NEAR(res.objective, expect, 1e-12);
    EXPECT_NEAR(res.plan->objective.weighted, expect, 1e-12);
}

TEST(Exact, UnreachableCustomerNeedsASortie) {
    auto inst = make_instance({{1, 0, 1}, {2, 1, 1, false}});
    const auto none = exact::solve_exact(inst, truck_only(), ModelOptions{}, exact::SearchBudget{});
    EXPECT_EQ(none.status, exact::Status::infeasible);
    EXPECT_FALSE(none.plan);

    const auto with = exact::solve_exact(inst, FleetSpec{}, ModelOptions{}, exact::SearchBudget{});
    ASSERT_EQ(with.status, exact::Status::optimal);
    for (const auto& r : with.plan->truck_routes) EXPECT_EQ(std::count(r.begin(), r.end(), 2), 0);
    int carried = 0;
    for (const auto& s : with.plan->sorties) carried += static_cast<int>(std::count(s.sequence.begin(), s.sequence.end(), 2));
    EXPECT_EQ(carried, 1);
}

TEST(Exact, DominatesFinderAndIsFeasible) {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        auto inst = bench::generate_instance(5, seed, FleetSpec{});
        const auto res = exact::solve_exact(inst, FleetSpec{}, ModelOptions{}, exact::SearchBudget{});
        ASSERT_TRUE(res.plan) << seed;
        EXPECT_TRUE(validator::validate(*res.plan, inst, FleetSpec{}, ModelOptions{}).feasible);
        const auto h = finder::solve_finder(inst, FleetSpec{}, ModelOptions{});
        ASSERT_TRUE(validator::validate(h, inst, FleetSpec{}, ModelOptions{}).feasible);
        EXPECT_LE(res.objective, h.objective.weighted + 1e-9) << seed;
    }
}

TEST(Exact, InvariantUnderRelabeling) {
    std::mt19937_64 rng(8);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        auto inst = bench::generate_instance(5, seed, FleetSpec{});
        std::vector<int> perm(5);
        std::iota(perm.begin(), perm.end(), 1);
        std::shuffle(perm.begin(), perm.end(), rng);
        auto relabeled = inst;
        for (int i = 0; i < 5; ++i) {
            relabeled.nodes[i + 1] = inst.nodes[perm[i]];
            relabeled.nodes[i + 1].id = i + 1;
        }
        const auto a = exact::solve_exact(inst, FleetSpec{}, ModelOptions{}, exact::SearchBudget{});
        const auto b = exact::solve_exact(relabeled, FleetSpec{}, ModelOptions{}, exact::SearchBudget{});
        ASSERT_TRUE(a.plan && b.plan);
        EXPECT_NEAR(a.objective, b.objective, 1e-9) << seed;
    }
}

TEST(Exact, RespectsToggles) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto inst = bench::generate_instance(5, seed, FleetSpec{});
        ModelOptions base, single;
        single.single_visit = true;
        single.single_trip = true;
        single.charging = false;
        const auto a = exact::solve_exact(inst, FleetSpec{}, base, exact::SearchBudget{});
        const auto b = exact::solve_exact(inst, FleetSpec{}, single, exact::SearchBudget{});
        ASSERT_TRUE(a.plan && b.plan);
        // The restricted search space is a subset.
        EXPECT_LE(a.objective, b.objective + 1e-9);
        EXPECT_TRUE(validator::validate(*b.plan, inst, FleetSpec{}, single).feasible);
        for (const auto& s : b.plan->sorties) EXPECT_EQ(s.sequence.size(), 1u);
    }
}

TEST(Exact, BudgetExceededIsDistinctFromInfeasible) {
    auto inst = bench::generate_instance(6, 3, FleetSpec{});
    exact::SearchBudget small;
    small.max_customers = 5;
    EXPECT_EQ(exact::solve_exact(inst, FleetSpec{}, ModelOptions{}, small).status, exact::Status::budget_exceeded);
    exact::SearchBudget few;
    few.max_candidates = 10;
    const auto r = exact::solve_exact(inst, FleetSpec{}, ModelOptions{}, few);
    EXPECT_EQ(r.status, exact::Status::budget_exceeded);
    EXPECT_FALSE(r.plan);
    EXPECT_EQ(exact::to_string(exact::Status::budget_exceeded), "budget-exceeded");
}

TEST(Exact, RejectsOutOfScopeFleetsAndBudgets) {
    auto inst = bench::generate_instance(3, 1, FleetSpec{});
    FleetSpec two;
    two.num_trucks = 2;
    EXPECT_THROW(exact::solve_exact(inst, two, ModelOptions{}, exact::SearchBudget{}), ConfigurationError);
    FleetSpec drones;
    drones.num_drones = 2;
    EXPECT_THROW(exact::solve_exact(inst, drones, ModelOptions{}, exact::SearchBudget{}), ConfigurationError);
    exact::SearchBudget bad;
    bad.time_limit = 0.0;
    EXPECT_THROW(bad.validate(), ConfigurationError);
}
