// vrpdr: command-line front end for the truck-drone-robot routing toolkit.

#include <chrono>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "vrpdr/bench.hpp"
#include "vrpdr/exact.hpp"
#include "vrpdr/finder.hpp"
#include "vrpdr/json_io.hpp"
#include "vrpdr/milp.hpp"
#include "vrpdr/validator.hpp"

using namespace vrpdr;
using io::json;

namespace {

struct ToggleFlags {
    bool no_charging = false;
    bool single_visit = false;
    bool single_trip = false;
    bool fixed_docking = false;

    void attach(CLI::App* app) {
        app->add_flag("--no-charging", no_charging, "Recharge only at the depot");
        app->add_flag("--single-visit", single_visit, "One customer per sortie");
        app->add_flag("--single-trip", single_trip, "One sortie per drone/robot");
        app->add_flag("--fixed-docking", fixed_docking, "Recover on the launch truck only");
    }
    ModelOptions options() const {
        ModelOptions o;
        o.charging = !no_charging;
        o.single_visit = single_visit;
        o.single_trip = single_trip;
        o.fixed_docking = fixed_docking;
        return o;
    }
};

io::InstanceFile load(const std::string& path, const std::optional<std::string>& mode) {
    auto f = io::load_instance(path);
    if (mode) f.fleet = apply_mode(f.fleet, mode_from_string(*mode));
    return f;
}

void print_objective(const ObjectiveBreakdown& o) {
    std::cerr << "operational cost " << o.operational_cost() << "  makespan " << o.makespan << " h  weighted "
              << o.weighted << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Truck, drone and robot last-mile routing"};
    app.require_subcommand(1);

    // generate
    int gen_size = 20;
    std::uint64_t gen_seed = 42;
    double gen_unreachable = 0.0;
    std::string gen_out;
    auto* gen = app.add_subcommand("generate", "Write a random instance with the default fleet");
    gen->add_option("--size", gen_size, "Number of customers")->check(CLI::NonNegativeNumber);
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--unreachable-frac", gen_unreachable, "Fraction of truck-unreachable customers")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--out", gen_out, "Instance JSON")->required();

    // solve
    std::string instance_path, out_path, plan_path;
    std::optional<std::string> mode;
    std::int64_t solve_seed = 0;
    ToggleFlags toggles;
    auto* solve = app.add_subcommand("solve", "Run the FINDER heuristic");
    solve->add_option("--instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    solve->add_option("--out", out_path, "Plan JSON")->required();
    solve->add_option("--mode", mode, "to|td|tr|ef");
    solve->add_option("--seed", solve_seed, "Accepted for interface compatibility; FINDER is deterministic");
    finder::Config finder_config;
    solve->add_flag("--cost-filter", finder_config.cost_filter, "Skip sorties that cost more than the truck detour");
    toggles.attach(solve);

    // exact
    int budget_customers = exact::SearchBudget{}.max_customers;
    double time_limit = exact::SearchBudget{}.time_limit;
    auto* ex = app.add_subcommand("exact", "Solve a tiny instance to optimality by enumeration");
    ex->add_option("--instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    ex->add_option("--out", out_path, "Plan JSON");
    ex->add_option("--mode", mode, "to|td|tr|ef");
    ex->add_option("--budget-customers", budget_customers, "Largest customer count to attempt");
    ex->add_option("--time-limit", time_limit, "Seconds");
    toggles.attach(ex);

    // validate
    auto* val = app.add_subcommand("validate", "Check a plan; exit 0 when feasible, 1 otherwise");
    val->add_option("--instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    val->add_option("--plan", plan_path, "Plan JSON")->required()->check(CLI::ExistingFile);
    val->add_option("--mode", mode, "to|td|tr|ef");
    toggles.attach(val);

    // export-lp
    auto* lp = app.add_subcommand("export-lp", "Write the mixed-integer model in LP format");
    lp->add_option("--instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
    lp->add_option("--out", out_path, "LP file")->required();
    lp->add_option("--mode", mode, "to|td|tr|ef");
    toggles.attach(lp);

    // bench
    bench::ScenarioSpec spec;
    std::string sizes = "20:300:20", sweep_text, bench_mode = "ef";
    std::string bench_out = "bench_out";
    bench::RunOptions run;
    bool no_plans = false, timings = false;
    auto* be = app.add_subcommand("bench", "Run an experiment family and write CSV tables");
    be->add_option("--scenario", spec.name, "modes|visits|trips|charging|docking|sweep|exact|custom")->required();
    be->add_option("--sizes", sizes, "start:stop:step or a comma list");
    be->add_option("--reps", spec.repetitions, "Repetitions per size")->check(CLI::PositiveNumber);
    be->add_option("--seed", spec.seed_base, "Seed of repetition 0");
    be->add_option("--mode", bench_mode, "Base mode for non-mode scenarios");
    be->add_option("--sweep", sweep_text, "parameter=values, e.g. drones=0:8:1");
    be->add_option("--unreachable-frac", spec.unreachable_frac, "Fraction of truck-unreachable customers")
        ->check(CLI::Range(0.0, 1.0));
    be->add_flag("--cost-filter", spec.cost_filter, "Skip sorties that cost more than the truck detour");
    be->add_option("--threads", run.threads, "Worker threads, 0 = all cores");
    be->add_flag("--no-plans", no_plans, "Skip per-run plan files");
    be->add_flag("--timings", timings, "Also write timings.csv (not reproducible byte for byte)");
    be->add_option("--out", bench_out, "Output directory");
    toggles.attach(be);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const FleetSpec fleet;
            const auto inst = bench::generate_instance(gen_size, gen_seed, fleet, gen_unreachable);
            io::write_text(gen_out, io::dump(io::instance_to_json(inst, fleet)));
            return 0;
        }
        if (*solve) {
            const auto f = load(instance_path, mode);
            const auto start = std::chrono::steady_clock::now();
            const Plan plan = finder::solve_finder(f.instance, f.fleet, toggles.options(), finder_config);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            io::write_text(out_path, io::dump(io::plan_to_json(plan)));
            print_objective(plan.objective);
            std::cerr << "solved in " << secs << " s\n";
            return 0;
        }
        if (*ex) {
            const auto f = load(instance_path, mode);
            exact::SearchBudget budget;
            budget.max_customers = budget_customers;
            budget.time_limit = time_limit;
            budget.validate();
            const auto res = exact::solve_exact(f.instance, f.fleet, toggles.options(), budget);
            std::cerr << "status " << exact::to_string(res.status) << "  candidates " << res.candidates << '\n';
            if (!res.detail.empty()) std::cerr << res.detail << '\n';
            if (!res.plan) return 1;
            if (!out_path.empty()) io::write_text(out_path, io::dump(io::plan_to_json(*res.plan)));
            print_objective(res.plan->objective);
            return 0;
        }
        if (*val) {
            const auto f = load(instance_path, mode);
            const Plan plan = io::load_plan(plan_path);
            const auto report = validator::validate(plan, f.instance, f.fleet, toggles.options());
            std::cout << io::dump(validator::report_to_json(report));
            return report.feasible ? 0 : 1;
        }
        if (*lp) {
            const auto f = load(instance_path, mode);
            const auto model = milp::build_model(f.instance, f.fleet, toggles.options());
            io::write_text(out_path, milp::export_lp(model));
            std::cerr << model.variables.size() << " variables, " << model.constraints.size() << " constraints\n";
            return 0;
        }
        if (*be) {
            spec.sizes = bench::parse_sizes(sizes);
            spec.mode = mode_from_string(bench_mode);
            const auto o = toggles.options();
            spec.toggles = {!o.single_visit, !o.single_trip, o.charging, !o.fixed_docking};
            if (!sweep_text.empty()) {
                const auto eq = sweep_text.find('=');
                if (eq == std::string::npos) throw ConfigurationError("--sweep expects parameter=values");
                spec.sweep = bench::Sweep{bench::sweep_parameter_from_string(sweep_text.substr(0, eq)),
                                          bench::parse_values(sweep_text.substr(eq + 1))};
            }
            run.keep_plans = !no_plans;
            const auto results = bench::run_scenario(spec, run);
            bench::write_outputs(bench_out, results);
            if (timings) {
                std::string text = "variant,size,repetition,runtime_s\n";
                for (const auto& r : results)
                    text += r.variant + "," + std::to_string(r.size) + "," + std::to_string(r.repetition) + "," +
                            bench::format_number(r.runtime) + "\n";
                io::write_text(std::filesystem::path(bench_out) / "timings.csv", text);
            }
            int failed = 0;
            for (const auto& r : results) failed += r.ok() ? 0 : 1;
            std::cerr << results.size() << " runs, " << failed << " not ok, written to " << bench_out << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
