#include <gtest/gtest.h>

#include "support.hpp"
#include "vrpdr/bench.hpp"
#include "vrpdr/finder.hpp"
#include "vrpdr/json_io.hpp"

using namespace vrpdr;

TEST(InstanceJson, RoundTrip) {
    FleetSpec fleet;
    fleet.num_trucks = 3;
    fleet.alpha = 0.25;
    auto inst = bench::generate_instance(12, 9, fleet, 0.25);
    const auto j = io::instance_to_json(inst, fleet);
    const auto back = io::instance_from_json(j);
    ASSERT_EQ(back.instance.num_nodes(), inst.num_nodes());
    for (int i = 0; i < inst.num_nodes(); ++i) {
        EXPECT_EQ(back.instance.node(i).pos.x, inst.node(i).pos.x);
        EXPECT_EQ(back.instance.node(i).pos.y, inst.node(i).pos.y);
        EXPECT_EQ(back.instance.node(i).weight, inst.node(i).weight);
        EXPECT_EQ(back.instance.node(i).truck_reachable, inst.node(i).truck_reachable);
    }
    EXPECT_EQ(back.instance.seed, inst.seed);
    EXPECT_EQ(back.fleet.num_trucks, 3);
    EXPECT_EQ(back.fleet.alpha, 0.25);
    EXPECT_EQ(io::dump(io::instance_to_json(back.instance, back.fleet)), io::dump(j));
}

TEST(InstanceJson, UnknownKeysRejected) {
    const FleetSpec fleet;
    auto j = io::instance_to_json(bench::generate_instance(3, 1, fleet), fleet);
    auto top = j;
    top["colour"] = "red";
    EXPECT_THROW(io::instance_from_json(top), InvalidInstanceError);
    auto nested = j;
    nested["customers"][0]["priority"] = 1;
    EXPECT_THROW(io::instance_from_json(nested), InvalidInstanceError);
    auto fleet_key = j;
    fleet_key["fleet"]["warp"] = 9;
    EXPECT_THROW(io::instance_from_json(fleet_key), InvalidInstanceError);
}

TEST(InstanceJson, PartialFleetUsesDefaults) {
    const auto f = io::fleet_from_json(io::json::parse(R"({"num_drones": 2})"));
    EXPECT_EQ(f.num_drones, 2);
    EXPECT_EQ(f.s_t, FleetSpec{}.s_t);
}

TEST(PlanJson, RoundTrip) {
    FleetSpec fleet;
    fleet.num_trucks = 2;
    auto inst = bench::generate_instance(40, 4, fleet);
    const auto plan = finder::solve_finder(inst, fleet, ModelOptions{});
    ASSERT_FALSE(plan.sorties.empty());
    const auto back = io::plan_from_json(io::plan_to_json(plan));
    EXPECT_EQ(back, plan);
}
