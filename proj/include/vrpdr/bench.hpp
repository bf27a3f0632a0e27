#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vrpdr/core.hpp"

namespace vrpdr::bench {

// Instance stream: std::mt19937_64 seeded with the instance seed, draws in
// node order (x, y, weight, then the reachability draw when enabled).
inline constexpr const char* kGeneratorVersion = "mt19937_64/v1";
inline constexpr double kAreaSide = 15.0;  // km
inline constexpr double kMinWeight = 0.5;  // kg
inline constexpr double kMaxWeight = 10.0;

/// Depot at the origin plus `size` uniform customers. A fraction of customers
/// is marked truck-unreachable when unreachable_frac > 0.
Instance generate_instance(int size, std::uint64_t seed, const FleetSpec& fleet, double unreachable_frac = 0.0);

/// (candidate - reference) / reference * 100. DomainError unless reference > 0.
double gap(double reference, double candidate);

struct Toggles {
    bool multi_visit = true;
    bool multi_trip = true;
    bool enroute_charging = true;
    bool flexible_docking = true;

    ModelOptions options() const;
};

enum class SweepParameter { drones, truck_speed, drone_speed, robot_speed, drone_payload, robot_payload, drone_range, robot_range };

std::string_view to_string(SweepParameter p);
SweepParameter sweep_parameter_from_string(std::string_view text);
FleetSpec apply_sweep(FleetSpec fleet, SweepParameter p, double value);

struct Sweep {
    SweepParameter parameter = SweepParameter::drones;
    std::vector<double> values;
};

// Families: modes, visits, trips, charging, docking, sweep, exact, custom.
struct ScenarioSpec {
    std::string name = "custom";
    std::vector<int> sizes;
    int repetitions = 25;
    Mode mode = Mode::ef;
    Toggles toggles;
    std::optional<Sweep> sweep;
    std::uint64_t seed_base = 42;
    FleetSpec fleet;
    double unreachable_frac = 0.0;
    bool cost_filter = false;  // finder::Config::cost_filter

    void validate() const;  // ConfigurationError
};

/// One configuration of a scenario family. The first variant of a family is
/// the reference for the gap columns.
struct Variant {
    std::string label;
    Mode mode = Mode::ef;
    Toggles toggles;
    FleetSpec fleet;
    bool exact = false;  // solve with the enumeration oracle instead of FINDER
    std::string parameter;
    double value = 0.0;
};

std::vector<Variant> expand_variants(const ScenarioSpec& spec);

struct RunResult {
    std::string variant;
    std::string parameter;
    double value = 0.0;
    int size = 0;
    int repetition = 0;
    std::uint64_t seed = 0;
    std::string status;  // ok, infeasible, unserved, budget-exceeded
    int violations = 0;
    ObjectiveBreakdown objective;
    double simulated_makespan = 0.0;
    double runtime = 0.0;  // s, kept out of the CSV files
    std::optional<Plan> plan;

    bool ok() const { return status == "ok"; }
};

struct RunOptions {
    int threads = 0;  // 0 = hardware concurrency
    bool keep_plans = true;
};

/// Runs every (variant, size, repetition). Instance seed = seed_base + repetition,
/// so variants and sizes are paired. Output order is (variant, size, repetition)
/// regardless of threading.
std::vector<RunResult> run_scenario(const ScenarioSpec& spec, const RunOptions& run = {});

struct SummaryRow {
    std::string variant;
    std::string parameter;
    double value = 0.0;
    int size = 0;
    int runs = 0;
    int ok = 0;
    // mean and sample standard deviation over successful runs
    double cost_mean = 0.0, cost_sd = 0.0;
    double makespan_mean = 0.0, makespan_sd = 0.0;
    double simulated_mean = 0.0, simulated_sd = 0.0;
    double weighted_mean = 0.0, weighted_sd = 0.0;
};

std::vector<SummaryRow> summarize(const std::vector<RunResult>& results);

double mean(const std::vector<double>& xs);
double sample_sd(const std::vector<double>& xs);  // 0 for fewer than two values

std::string results_csv(const std::vector<RunResult>& results);
std::string summary_csv(const std::vector<SummaryRow>& rows);

struct PlotFile {
    std::string name;  // relative to plots/
    std::string text;
};

/// objective_vs_size.csv, cost_vs_size.csv, time_vs_size.csv, gap_vs_size.csv
/// and sweep.csv (header only without a sweep). Throws DomainError on empty results.
std::vector<PlotFile> emit_plot_data(const std::vector<RunResult>& results);

/// Writes results.csv, summary.csv, plots/ and plans/ under dir.
void write_outputs(const std::filesystem::path& dir, const std::vector<RunResult>& results);

/// "20:300:20" or "5,10,20".
std::vector<int> parse_sizes(const std::string& text);
/// "0:8:1" or "50,60,75".
std::vector<double> parse_values(const std::string& text);

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace vrpdr::bench
