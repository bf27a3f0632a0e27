#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "support.hpp"
#include "vrpdr/core.hpp"

using namespace vrpdr;
using vrpdr::testing::make_instance;

TEST(Metrics, Manhattan) {
    EXPECT_DOUBLE_EQ(manhattan_distance({0, 0}, {3, 4}), 7.0);
    EXPECT_DOUBLE_EQ(manhattan_distance({1, 1}, {1, 1}), 0.0);
    EXPECT_DOUBLE_EQ(manhattan_distance({-1, 2}, {2, -2}), std::abs(-1.0 - 2.0) + std::abs(2.0 + 2.0));
}

TEST(Metrics, Euclidean) {
    EXPECT_DOUBLE_EQ(euclidean_distance({0, 0}, {3, 4}), 5.0);
    EXPECT_DOUBLE_EQ(euclidean_distance({2, 2}, {2, 2}), 0.0);
    EXPECT_NEAR(euclidean_distance({0, 0}, {1, 1}), std::sqrt(2.0), 1e-15);
}

TEST(Metrics, MetricAxiomsOnRandomPoints) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-50, 50);
    for (int k = 0; k < 2000; ++k) {
        Point a{U(rng), U(rng)}, b{U(rng), U(rng)}, c{U(rng), U(rng)};
        for (auto d : {manhattan_distance, euclidean_distance}) {
            EXPECT_GE(d(a, b), 0.0);
            EXPECT_DOUBLE_EQ(d(a, b), d(b, a));
            EXPECT_EQ(d(a, a), 0.0);
            EXPECT_LE(d(a, c), d(a, b) + d(b, c) + 1e-12);
        }
        EXPECT_GE(manhattan_distance(a, b) + 1e-12, euclidean_distance(a, b));
    }
}

TEST(SortieDistance, Examples) {
    auto inst = make_instance({{1, 0, 1}, {2, 0, 1}});
    EXPECT_DOUBLE_EQ(sortie_distance(VehicleKind::drone, 0, {1}, 2, inst), 2.0);

    auto robot = make_instance({{1, 1, 1}});
    EXPECT_DOUBLE_EQ(sortie_distance(VehicleKind::robot, 0, {1}, 0, robot), 2.0 + 2.0);

    auto pair = make_instance({{3, 4, 1}, {6, 8, 1}});
    Sortie s;
    s.vehicle_kind = VehicleKind::drone;
    s.launch_node = 0;
    s.sequence = {1, 2};
    s.recovery_node = 2;
    EXPECT_DOUBLE_EQ(sortie_distance(s, pair), 5.0 + 5.0 + 0.0);
}

TEST(SortieDistance, UnknownNodeThrows) {
    auto inst = make_instance({{1, 0, 1}});
    EXPECT_THROW(sortie_distance(VehicleKind::drone, 0, {7}, 0, inst), InvalidInstanceError);
}

TEST(Sequences, Examples) {
    using Seqs = std::vector<std::vector<int>>;
    EXPECT_EQ(enumerate_sequences({1, 2}, 1), (Seqs{{1}, {2}}));
    EXPECT_EQ(enumerate_sequences({2, 1}, 2), (Seqs{{1}, {2}, {1, 2}, {2, 1}}));
    EXPECT_TRUE(enumerate_sequences({}, 3).empty());
}

TEST(Sequences, CountMatchesBruteForce) {
    for (int n = 0; n <= 6; ++n) {
        std::vector<int> ids(n);
        for (int i = 0; i < n; ++i) ids[i] = 10 + 3 * i;
        for (int m = 1; m <= 4; ++m) {
            // Brute force: every ordered tuple over ids of length 1..m with distinct entries.
            std::set<std::vector<int>> brute;
            std::vector<int> cur;
            auto rec = [&](auto&& self) -> void {
                if (!cur.empty()) brute.insert(cur);
                if (static_cast<int>(cur.size()) == m) return;
                for (int id : ids) {
                    if (std::find(cur.begin(), cur.end(), id) != cur.end()) continue;
                    cur.push_back(id);
                    self(self);
                    cur.pop_back();
                }
            };
            rec(rec);
            const auto seqs = enumerate_sequences(ids, m);
            EXPECT_EQ(seqs.size(), brute.size()) << "n=" << n << " m=" << m;
            EXPECT_EQ(static_cast<std::size_t>(count_sequences(n, m)), brute.size());
            EXPECT_EQ(std::set<std::vector<int>>(seqs.begin(), seqs.end()), brute);
            for (std::size_t i = 1; i < seqs.size(); ++i) {
                auto key = [](const std::vector<int>& s) { return std::make_pair(s.size(), s); };
                EXPECT_LT(key(seqs[i - 1]), key(seqs[i]));
            }
        }
    }
}

TEST(Plan, CoverageInvariant) {
    auto inst = make_instance({{1, 0, 1}, {2, 0, 1}, {3, 0, 1}});
    Plan p;
    p.truck_routes = {{0, 1, 3, 0}};
    Sortie s;
    s.sequence = {2};
    p.sorties = {s};
    EXPECT_TRUE(covers_customers_exactly_once(p, inst));
    p.sorties[0].sequence = {2, 3};
    EXPECT_FALSE(covers_customers_exactly_once(p, inst));
    p.sorties.clear();
    EXPECT_FALSE(covers_customers_exactly_once(p, inst));
}

TEST(Fleet, ValidationRejectsBrokenInvariants) {
    FleetSpec f;
    EXPECT_NO_THROW(f.validate());
    f.alpha = 1.5;
    EXPECT_THROW(f.validate(), ConfigurationError);
    f = {};
    f.m = 0;
    EXPECT_THROW(f.validate(), ConfigurationError);
    f = {};
    f.s_d = 0.0;
    EXPECT_THROW(f.validate(), ConfigurationError);
    f.num_drones = 0;
    EXPECT_NO_THROW(f.validate());
}

TEST(Fleet, Modes) {
    const FleetSpec f;
    EXPECT_EQ(apply_mode(f, Mode::to).num_drones + apply_mode(f, Mode::to).num_robots, 0);
    EXPECT_EQ(apply_mode(f, Mode::td).num_robots, 0);
    EXPECT_EQ(apply_mode(f, Mode::td).num_drones, 1);
    EXPECT_EQ(apply_mode(f, Mode::tr).num_drones, 0);
    EXPECT_EQ(apply_mode(f, Mode::ef).num_robots, 1);
    EXPECT_EQ(mode_from_string("EF"), Mode::ef);
    EXPECT_THROW(mode_from_string("xx"), ConfigurationError);
}

TEST(Instance, Validation) {
    auto inst = make_instance({{1, 1, 2}});
    EXPECT_NO_THROW(inst.validate());
    inst.nodes[0].weight = 1.0;
    EXPECT_THROW(inst.validate(), InvalidInstanceError);
    inst = make_instance({{1, 1, 2}});
    inst.nodes[1].id = 5;
    EXPECT_THROW(inst.validate(), InvalidInstanceError);
}

TEST(Instance, UnreachableArcsAreMasked) {
    auto inst = make_instance({{1, 0, 1, false}, {2, 0, 1}});
    const FleetSpec f;
    EXPECT_EQ(truck_distance(inst, f, 0, 1), f.big_M);
    EXPECT_EQ(truck_distance(inst, f, 1, 2), f.big_M);
    EXPECT_DOUBLE_EQ(truck_distance(inst, f, 0, 2), 2.0);
    EXPECT_DOUBLE_EQ(truck_travel_time(inst, f, 0, 2), 2.0 / f.s_t);
}
