#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>

#include "vrpdr/bench.hpp"
#include "vrpdr/json_io.hpp"

using namespace vrpdr;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

const bench::PlotFile& plot(const std::vector<bench::PlotFile>& files, const std::string& name) {
    for (const auto& f : files)
        if (f.name == name) return f;
    throw std::runtime_error("missing plot " + name);
}

bench::ScenarioSpec spec_of(const std::string& name, std::vector<int> sizes, int reps) {
    bench::ScenarioSpec s;
    s.name = name;
    s.sizes = std::move(sizes);
    s.repetitions = reps;
    return s;
}

}  // namespace

TEST(Generate, SizeZeroIsDepotOnly) {
    const auto inst = bench::generate_instance(0, 1, FleetSpec{});
    ASSERT_EQ(inst.num_nodes(), 1);
    EXPECT_EQ(inst.node(0).pos.x, 0.0);
    EXPECT_EQ(inst.node(0).weight, 0.0);
}

TEST(Generate, SameSeedSameBytes) {
    const FleetSpec f;
    const auto a = io::dump(io::instance_to_json(bench::generate_instance(50, 123, f), f));
    const auto b = io::dump(io::instance_to_json(bench::generate_instance(50, 123, f), f));
    const auto c = io::dump(io::instance_to_json(bench::generate_instance(50, 124, f), f));
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
}

TEST(Generate, RangesAndMeanWeight) {
    const auto inst = bench::generate_instance(10000, 7, FleetSpec{});
    double sum = 0.0;
    for (int c : inst.customer_ids()) {
        const auto& n = inst.node(c);
        EXPECT_GE(n.pos.x, 0.0);
        EXPECT_LE(n.pos.x, 15.0);
        EXPECT_GE(n.pos.y, 0.0);
        EXPECT_LE(n.pos.y, 15.0);
        EXPECT_GE(n.weight, 0.5);
        EXPECT_LE(n.weight, 10.0);
        EXPECT_TRUE(n.truck_reachable);
        sum += n.weight;
    }
    EXPECT_NEAR(sum / 10000.0, (0.5 + 10.0) / 2.0, 0.1);
}

TEST(Generate, UnreachableFraction) {
    const auto inst = bench::generate_instance(5000, 3, FleetSpec{}, 0.2);
    int blocked = 0;
    for (int c : inst.customer_ids()) blocked += !inst.node(c).truck_reachable;
    EXPECT_NEAR(blocked / 5000.0, 0.2, 0.02);
    EXPECT_TRUE(inst.node(0).truck_reachable);
    EXPECT_THROW(bench::generate_instance(5, 1, FleetSpec{}, 1.5), ConfigurationError);
    EXPECT_THROW(bench::generate_instance(-1, 1, FleetSpec{}), ConfigurationError);
}

TEST(Gap, WorkedExamples) {
    EXPECT_NEAR(bench::gap(79.31, 88.34), (88.34 - 79.31) / 79.31 * 100.0, 1e-12);
    EXPECT_NEAR(bench::gap(79.31, 88.34), 11.39, 0.005);
    EXPECT_NEAR(bench::gap(274.85, 288.17), 4.85, 0.005);
    EXPECT_EQ(bench::gap(42.0, 42.0), 0.0);
    EXPECT_THROW(bench::gap(0.0, 1.0), DomainError);
    EXPECT_THROW(bench::gap(-1.0, 1.0), DomainError);
}

TEST(Stats, SampleSdMatchesDirectComputation) {
    EXPECT_EQ(bench::sample_sd({}), 0.0);
    EXPECT_EQ(bench::sample_sd({3.0}), 0.0);
    // 2, 4, 4, 4, 5, 5, 7, 9: mean 5, squared deviations sum 32, n - 1 = 7
    EXPECT_NEAR(bench::sample_sd({2, 4, 4, 4, 5, 5, 7, 9}), std::sqrt(32.0 / 7.0), 1e-12);
    EXPECT_NEAR(bench::mean({2, 4, 4, 4, 5, 5, 7, 9}), 5.0, 1e-12);
}

TEST(Summary, AggregatesRecomputedFromRuns) {
    auto spec = spec_of("charging", {15, 30}, 6);
    const auto results = bench::run_scenario(spec, {0, false});
    ASSERT_EQ(results.size(), 2u * 2u * 6u);
    const auto rows = bench::summarize(results);
    ASSERT_EQ(rows.size(), 4u);
    for (const auto& row : rows) {
        std::vector<double> cost, span, weighted;
        for (const auto& r : results)
            if (r.variant == row.variant && r.size == row.size && r.ok()) {
                cost.push_back(r.objective.operational_cost());
                span.push_back(r.objective.makespan);
                weighted.push_back(r.objective.weighted);
            }
        ASSERT_EQ(static_cast<int>(cost.size()), row.ok);
        auto sd = [](const std::vector<double>& xs) {
            double m = 0.0;
            for (double x : xs) m += x;
            m /= static_cast<double>(xs.size());
            double ss = 0.0;
            for (double x : xs) ss += (x - m) * (x - m);
            return std::sqrt(ss / static_cast<double>(xs.size() - 1));
        };
        EXPECT_NEAR(row.cost_sd, sd(cost), 1e-9);
        EXPECT_NEAR(row.makespan_sd, sd(span), 1e-12);
        EXPECT_NEAR(row.weighted_sd, sd(weighted), 1e-9);
    }
}

TEST(Plots, NoSweepGivesHeaderOnlySweepCsv) {
    const auto results = bench::run_scenario(spec_of("custom", {10}, 2), {0, false});
    const auto& sweep = plot(bench::emit_plot_data(results), "sweep.csv");
    EXPECT_EQ(parse_csv(sweep.text).size(), 1u);
    EXPECT_THROW(bench::emit_plot_data({}), DomainError);
}

TEST(Plots, ModesGiveFourSeries) {
    const auto results = bench::run_scenario(spec_of("modes", {10, 20}, 3), {0, false});
    const auto files = bench::emit_plot_data(results);
    for (const char* name : {"objective_vs_size.csv", "cost_vs_size.csv", "time_vs_size.csv"}) {
        const auto rows = parse_csv(plot(files, name).text);
        std::set<std::string> series;
        for (std::size_t i = 1; i < rows.size(); ++i) series.insert(rows[i][0]);
        EXPECT_EQ(series, (std::set<std::string>{"to", "td", "tr", "ef"})) << name;
        EXPECT_EQ(rows.size(), 1u + 4u * 2u);
    }
    // Gaps against the first series (truck only): three series per size.
    EXPECT_EQ(parse_csv(plot(files, "gap_vs_size.csv").text).size(), 1u + 3u * 2u);
}

TEST(Plots, DroneSweepIsANineRowDecreasingMakespanTable) {
    auto spec = spec_of("sweep", {120}, 25);
    spec.sweep = bench::Sweep{bench::SweepParameter::drones, bench::parse_values("0:8:1")};
    const auto results = bench::run_scenario(spec, {0, false});
    const auto rows = parse_csv(plot(bench::emit_plot_data(results), "sweep.csv").text);
    ASSERT_EQ(rows.size(), 1u + 9u);
    EXPECT_EQ(rows[0][4], "makespan_mean");
    double prev = INFINITY;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i][0], "drones");
        EXPECT_EQ(std::stod(rows[i][1]), static_cast<double>(i - 1));
        const double span = std::stod(rows[i][4]);
        EXPECT_LE(span, prev) << "drones=" << i - 1;
        prev = span;
    }
}

TEST(Scenario, ValidationErrors) {
    EXPECT_THROW(spec_of("modes", {}, 3).validate(), ConfigurationError);
    EXPECT_THROW(spec_of("modes", {10}, 0).validate(), ConfigurationError);
    EXPECT_THROW(spec_of("sweep", {10}, 1).validate(), ConfigurationError);
    EXPECT_THROW(spec_of("exact", {9}, 1).validate(), ConfigurationError);
    EXPECT_THROW(bench::expand_variants(spec_of("nonsense", {10}, 1)), ConfigurationError);
    EXPECT_THROW(bench::sweep_parameter_from_string("wings"), ConfigurationError);
    EXPECT_NO_THROW(spec_of("exact", {5}, 1).validate());
}

TEST(Scenario, PairedSeedsAcrossVariants) {
    const auto results = bench::run_scenario(spec_of("visits", {12}, 4), {0, false});
    std::map<std::string, std::vector<std::uint64_t>> seeds;
    for (const auto& r : results) seeds[r.variant].push_back(r.seed);
    EXPECT_EQ(seeds["multi-visit"], seeds["single-visit"]);
    EXPECT_EQ(seeds["multi-visit"], (std::vector<std::uint64_t>{42, 43, 44, 45}));
}

TEST(Scenario, ThreadCountDoesNotChangeOutput) {
    auto spec = spec_of("trips", {20, 40}, 5);
    const auto a = bench::run_scenario(spec, {1, false});
    const auto b = bench::run_scenario(spec, {4, false});
    EXPECT_EQ(bench::results_csv(a), bench::results_csv(b));
    EXPECT_EQ(bench::summary_csv(bench::summarize(a)), bench::summary_csv(bench::summarize(b)));
}

TEST(Scenario, ExactFamilyNeverLosesToFinder) {
    const auto results = bench::run_scenario(spec_of("exact", {5}, 5), {0, false});
    std::map<int, double> best;
    for (const auto& r : results)
        if (r.variant == "exact") best[r.repetition] = r.objective.weighted;
    for (const auto& r : results)
        if (r.variant == "finder") EXPECT_LE(best.at(r.repetition), r.objective.weighted + 1e-9);
}

TEST(Outputs, WritesTheDocumentedFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "vrpdr_bench_outputs";
    std::filesystem::remove_all(dir);
    const auto results = bench::run_scenario(spec_of("custom", {8}, 2), {});
    bench::write_outputs(dir, results);
    for (const char* f : {"results.csv", "summary.csv", "plots/objective_vs_size.csv", "plots/cost_vs_size.csv",
                          "plots/time_vs_size.csv", "plots/gap_vs_size.csv", "plots/sweep.csv"})
        EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
    const auto plan = io::load_plan(dir / "plans" / "ef" / "n8_r0.json");
    EXPECT_EQ(plan, *results[0].plan);
    std::filesystem::remove_all(dir);
}

TEST(Parse, SizesAndValues) {
    EXPECT_EQ(bench::parse_sizes("20:60:20"), (std::vector<int>{20, 40, 60}));
    EXPECT_EQ(bench::parse_sizes("5,10"), (std::vector<int>{5, 10}));
    EXPECT_EQ(bench::parse_values("0:1:0.5"), (std::vector<double>{0.0, 0.5, 1.0}));
    EXPECT_THROW(bench::parse_sizes("1.5"), ConfigurationError);
    EXPECT_THROW(bench::parse_sizes("10:20:0"), ConfigurationError);
    EXPECT_THROW(bench::parse_values("a,b"), ConfigurationError);
    EXPECT_EQ(bench::format_number(0.1), "0.1");
    EXPECT_EQ(bench::format_number(3.0), "3");
}

TEST(Runtime, MeanRuntimeGrowsWithSize) {
    std::map<int, double> mean;
    for (int size : {20, 100, 300}) {
        const auto results = bench::run_scenario(spec_of("custom", {size}, 25), {1, false});
        double total = 0.0;
        for (const auto& r : results) total += r.runtime;
        mean[size] = total / 25.0;
    }
    EXPECT_LE(mean[20], mean[100]);
    EXPECT_LE(mean[100], mean[300]);
}
