#include "vrpdr/bench.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "vrpdr/exact.hpp"
#include "vrpdr/finder.hpp"
#include "vrpdr/json_io.hpp"
#include "vrpdr/validator.hpp"

namespace vrpdr::bench {

Instance generate_instance(int size, std::uint64_t seed, const FleetSpec& fleet, double unreachable_frac) {
    if (size < 0) throw ConfigurationError("instance size must be non-negative");
    if (!(unreachable_frac >= 0.0 && unreachable_frac <= 1.0))
        throw ConfigurationError("unreachable fraction must lie in [0, 1]");
    (void)fleet;  // the generator contract is fleet-independent

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, kAreaSide);
    std::uniform_real_distribution<double> weight(kMinWeight, kMaxWeight);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Instance inst;
    inst.seed = static_cast<std::int64_t>(seed);
    inst.nodes.push_back(Node{0, {0.0, 0.0}, 0.0, true});
    for (int i = 1; i <= size; ++i) {
        Node n;
        n.id = i;
        n.pos.x = coord(rng);
        n.pos.y = coord(rng);
        n.weight = weight(rng);
        if (unreachable_frac > 0.0) n.truck_reachable = unit(rng) >= unreachable_frac;
        inst.nodes.push_back(n);
    }
    return inst;
}

double gap(double reference, double candidate) {
    if (!(reference > 0.0)) throw DomainError("gap reference must be positive");
    return (candidate - reference) / reference * 100.0;
}

ModelOptions Toggles::options() const {
    ModelOptions o;
    o.single_visit = !multi_visit;
    o.single_trip = !multi_trip;
    o.charging = enroute_charging;
    o.fixed_docking = !flexible_docking;
    return o;
}

namespace {

constexpr std::pair<SweepParameter, const char*> kSweepNames[] = {
    {SweepParameter::drones, "drones"},
    {SweepParameter::truck_speed, "truck_speed"},
    {SweepParameter::drone_speed, "drone_speed"},
    {SweepParameter::robot_speed, "robot_speed"},
    {SweepParameter::drone_payload, "drone_payload"},
    {SweepParameter::robot_payload, "robot_payload"},
    {SweepParameter::drone_range, "drone_range"},
    {SweepParameter::robot_range, "robot_range"},
};

}  // namespace

std::string_view to_string(SweepParameter p) {
    for (const auto& [q, name] : kSweepNames)
        if (q == p) return name;
    return "?";
}

SweepParameter sweep_parameter_from_string(std::string_view text) {
    for (const auto& [q, name] : kSweepNames)
        if (text == name) return q;
    throw ConfigurationError("unknown sweep parameter '" + std::string(text) + "'");
}

FleetSpec apply_sweep(FleetSpec fleet, SweepParameter p, double value) {
    switch (p) {
        case SweepParameter::drones:
            if (value < 0 || value != std::floor(value)) throw ConfigurationError("drone count must be a whole number");
            fleet.num_drones = static_cast<int>(value);
            break;
        case SweepParameter::truck_speed: fleet.s_t = value; break;
        case SweepParameter::drone_speed: fleet.s_d = value; break;
        case SweepParameter::robot_speed: fleet.s_r = value; break;
        case SweepParameter::drone_payload: fleet.rho_d = value; break;
        case SweepParameter::robot_payload: fleet.rho_r = value; break;
        case SweepParameter::drone_range: fleet.D_max_d = value; break;
        case SweepParameter::robot_range: fleet.D_max_r = value; break;
    }
    fleet.validate();
    return fleet;
}

void ScenarioSpec::validate() const {
    if (sizes.empty()) throw ConfigurationError("scenario needs at least one size");
    if (repetitions < 1) throw ConfigurationError("repetitions must be at least 1");
    for (int s : sizes)
        if (s < 0) throw ConfigurationError("sizes must be non-negative");
    if (name == "sweep" && (!sweep || sweep->values.empty()))
        throw ConfigurationError("sweep scenario needs a parameter grid");
    if (name == "exact")
        for (int s : sizes)
            if (s > exact::SearchBudget{}.max_customers)
                throw ConfigurationError("exact scenario supports at most " +
                                         std::to_string(exact::SearchBudget{}.max_customers) + " customers");
    if (!(unreachable_frac >= 0.0 && unreachable_frac <= 1.0))
        throw ConfigurationError("unreachable fraction must lie in [0, 1]");
    fleet.validate();
}

std::vector<Variant> expand_variants(const ScenarioSpec& spec) {
    spec.validate();
    auto make = [&](std::string label) {
        Variant v;
        v.label = std::move(label);
        v.mode = spec.mode;
        v.toggles = spec.toggles;
        v.fleet = apply_mode(spec.fleet, spec.mode);
        return v;
    };

    std::vector<Variant> out;
    const std::string& n = spec.name;
    if (n == "modes") {
        for (Mode m : {Mode::to, Mode::td, Mode::tr, Mode::ef}) {
            Variant v = make(std::string(to_string(m)));
            v.mode = m;
            v.fleet = apply_mode(spec.fleet, m);
            out.push_back(v);
        }
    } else if (n == "visits") {
        out.push_back(make("multi-visit"));
        out.push_back(make("single-visit"));
        out.back().toggles.multi_visit = false;
        out.front().toggles.multi_visit = true;
    } else if (n == "trips") {
        out.push_back(make("multi-trip"));
        out.push_back(make("single-trip"));
        out.back().toggles.multi_trip = false;
        out.front().toggles.multi_trip = true;
    } else if (n == "charging") {
        out.push_back(make("en-route"));
        out.push_back(make("no-charge"));
        out.back().toggles.enroute_charging = false;
        out.front().toggles.enroute_charging = true;
    } else if (n == "docking") {
        out.push_back(make("flexible"));
        out.push_back(make("fixed"));
        out.back().toggles.flexible_docking = false;
        out.front().toggles.flexible_docking = true;
        for (auto& v : out) v.fleet.num_trucks = std::max(2, v.fleet.num_trucks);
    } else if (n == "sweep") {
        std::string param(to_string(spec.sweep->parameter));
        for (double value : spec.sweep->values) {
            Variant v = make(param + "=" + format_number(value));
            v.fleet = apply_sweep(v.fleet, spec.sweep->parameter, value);
            v.parameter = param;
            v.value = value;
            out.push_back(v);
        }
    } else if (n == "exact") {
        out.push_back(make("exact"));
        out.back().exact = true;
        out.push_back(make("finder"));
    } else if (n == "custom") {
        out.push_back(make(std::string(to_string(spec.mode))));
    } else {
        throw ConfigurationError("unknown scenario '" + n + "'");
    }
    return out;
}

namespace {

struct Job {
    const Variant* variant;
    int size;
    int repetition;
};

RunResult run_one(const Job& job, const ScenarioSpec& spec, bool keep_plan) {
    const Variant& v = *job.variant;
    RunResult r;
    r.variant = v.label;
    r.parameter = v.parameter;
    r.value = v.value;
    r.size = job.size;
    r.repetition = job.repetition;
    r.seed = spec.seed_base + static_cast<std::uint64_t>(job.repetition);

    const Instance inst = generate_instance(job.size, r.seed, v.fleet, spec.unreachable_frac);
    const ModelOptions options = v.toggles.options();
    const auto start = std::chrono::steady_clock::now();
    std::optional<Plan> plan;
    try {
        if (v.exact) {
            const auto res = exact::solve_exact(inst, v.fleet, options, exact::SearchBudget{});
            if (res.status == exact::Status::optimal) plan = res.plan;
            else r.status = std::string(exact::to_string(res.status));
        } else {
            finder::Config config;
            config.cost_filter = spec.cost_filter;
            plan = finder::solve_finder(inst, v.fleet, options, config);
        }
    } catch (const finder::UnservedError&) {
        r.status = "unserved";
    } catch (const Error&) {
        r.status = "error";
    }
    r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    if (plan) {
        const auto report = validator::validate(*plan, inst, v.fleet, options);
        r.status = report.feasible ? "ok" : "infeasible";
        r.violations = static_cast<int>(report.violations.size());
        r.objective = plan->objective;
        r.simulated_makespan = report.simulated_makespan;
        if (keep_plan) r.plan = std::move(plan);
    }
    return r;
}

}  // namespace

std::vector<RunResult> run_scenario(const ScenarioSpec& spec, const RunOptions& run) {
    const auto variants = expand_variants(spec);
    std::vector<Job> jobs;
    for (const auto& v : variants)
        for (int size : spec.sizes)
            for (int rep = 0; rep < spec.repetitions; ++rep) jobs.push_back({&v, size, rep});

    std::vector<RunResult> results(jobs.size());
    int threads = run.threads > 0 ? run.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(1, jobs.size())));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();)
            results[i] = run_one(jobs[i], spec, run.keep_plans);
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    return results;
}

double mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double sample_sd(const std::vector<double>& xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::vector<SummaryRow> summarize(const std::vector<RunResult>& results) {
    std::vector<SummaryRow> rows;
    std::vector<std::array<std::vector<double>, 4>> samples;
    std::map<std::pair<std::string, int>, std::size_t> index;
    for (const auto& r : results) {
        auto [it, fresh] = index.try_emplace({r.variant, r.size}, rows.size());
        if (fresh) {
            SummaryRow row;
            row.variant = r.variant;
            row.parameter = r.parameter;
            row.value = r.value;
            row.size = r.size;
            rows.push_back(row);
            samples.emplace_back();
        }
        SummaryRow& row = rows[it->second];
        ++row.runs;
        if (!r.ok()) continue;
        ++row.ok;
        auto& s = samples[it->second];
        s[0].push_back(r.objective.operational_cost());
        s[1].push_back(r.objective.makespan);
        s[2].push_back(r.simulated_makespan);
        s[3].push_back(r.objective.weighted);
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& s = samples[i];
        rows[i].cost_mean = mean(s[0]), rows[i].cost_sd = sample_sd(s[0]);
        rows[i].makespan_mean = mean(s[1]), rows[i].makespan_sd = sample_sd(s[1]);
        rows[i].simulated_mean = mean(s[2]), rows[i].simulated_sd = sample_sd(s[2]);
        rows[i].weighted_mean = mean(s[3]), rows[i].weighted_sd = sample_sd(s[3]);
    }
    return rows;
}

std::string format_number(double v) {
    if (v == 0.0) return "0";  // folds -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

class Csv {
public:
    explicit Csv(std::initializer_list<const char*> header) {
        bool first = true;
        for (const char* h : header) {
            out_ << (first ? "" : ",") << h;
            first = false;
        }
        out_ << '\n';
    }
    template <class... Ts>
    void row(const Ts&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }
    std::string str() const { return out_.str(); }

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(double v) { return format_number(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::uint64_t v) { return std::to_string(v); }
    std::ostringstream out_;
};

}  // namespace

std::string results_csv(const std::vector<RunResult>& results) {
    Csv csv({"variant", "parameter", "value", "size", "repetition", "seed", "status", "violations", "variable_cost",
             "fixed_cost", "operational_cost", "makespan", "simulated_makespan", "weighted"});
    for (const auto& r : results)
        csv.row(r.variant, r.parameter, r.value, r.size, r.repetition, r.seed, r.status, r.violations,
                r.objective.variable_cost, r.objective.fixed_cost, r.objective.operational_cost(), r.objective.makespan,
                r.simulated_makespan, r.objective.weighted);
    return csv.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    Csv csv({"variant", "parameter", "value", "size", "runs", "ok", "cost_mean", "cost_sd", "makespan_mean",
             "makespan_sd", "simulated_makespan_mean", "simulated_makespan_sd", "weighted_mean", "weighted_sd"});
    for (const auto& r : rows)
        csv.row(r.variant, r.parameter, r.value, r.size, r.runs, r.ok, r.cost_mean, r.cost_sd, r.makespan_mean,
                r.makespan_sd, r.simulated_mean, r.simulated_sd, r.weighted_mean, r.weighted_sd);
    return csv.str();
}

std::vector<PlotFile> emit_plot_data(const std::vector<RunResult>& results) {
    if (results.empty()) throw DomainError("no results to plot");
    const auto rows = summarize(results);

    Csv objective({"series", "size", "weighted_mean", "weighted_sd"});
    Csv cost({"series", "size", "cost_mean", "cost_sd"});
    Csv time({"series", "size", "makespan_mean", "makespan_sd", "simulated_makespan_mean"});
    for (const auto& r : rows) {
        objective.row(r.variant, r.size, r.weighted_mean, r.weighted_sd);
        cost.row(r.variant, r.size, r.cost_mean, r.cost_sd);
        time.row(r.variant, r.size, r.makespan_mean, r.makespan_sd, r.simulated_mean);
    }

    // Gap of every series against the first series at the same size; blank
    // when the reference has no successful run.
    Csv gaps({"series", "reference", "size", "cost_gap_pct", "makespan_gap_pct", "weighted_gap_pct"});
    const std::string& reference = rows.front().variant;
    std::map<int, const SummaryRow*> ref;
    for (const auto& r : rows)
        if (r.variant == reference) ref[r.size] = &r;
    for (const auto& r : rows) {
        if (r.variant == reference) continue;
        const SummaryRow* b = ref.count(r.size) ? ref[r.size] : nullptr;
        auto pct = [&](double base, double value) {
            return b && b->ok > 0 && r.ok > 0 && base > 0.0 ? format_number(gap(base, value)) : std::string();
        };
        gaps.row(r.variant, reference, r.size, pct(b ? b->cost_mean : 0, r.cost_mean),
                 pct(b ? b->makespan_mean : 0, r.makespan_mean), pct(b ? b->weighted_mean : 0, r.weighted_mean));
    }

    Csv sweep({"parameter", "value", "size", "cost_mean", "makespan_mean", "weighted_mean"});
    for (const auto& r : rows)
        if (!r.parameter.empty()) sweep.row(r.parameter, r.value, r.size, r.cost_mean, r.makespan_mean, r.weighted_mean);

    return {{"objective_vs_size.csv", objective.str()},
            {"cost_vs_size.csv", cost.str()},
            {"time_vs_size.csv", time.str()},
            {"gap_vs_size.csv", gaps.str()},
            {"sweep.csv", sweep.str()}};
}

namespace {

std::string file_label(const std::string& label) {
    std::string out;
    for (char c : label) out += std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' ? c : '_';
    return out;
}

}  // namespace

void write_outputs(const std::filesystem::path& dir, const std::vector<RunResult>& results) {
    std::filesystem::create_directories(dir / "plots");
    io::write_text(dir / "results.csv", results_csv(results));
    io::write_text(dir / "summary.csv", summary_csv(summarize(results)));
    for (const auto& f : emit_plot_data(results)) io::write_text(dir / "plots" / f.name, f.text);
    for (const auto& r : results) {
        if (!r.plan) continue;
        auto sub = dir / "plans" / file_label(r.variant);
        std::filesystem::create_directories(sub);
        io::write_text(sub / ("n" + std::to_string(r.size) + "_r" + std::to_string(r.repetition) + ".json"),
                       io::dump(io::plan_to_json(*r.plan)));
    }
}

namespace {

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    auto number = [&](const std::string& s) {
        double v = 0.0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw ConfigurationError("bad number '" + s + "' in '" + text + "'");
        return v;
    };
    if (text.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::stringstream ss(text);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(number(p));
        if (parts.size() != 3 || !(parts[2] > 0) || parts[1] < parts[0])
            throw ConfigurationError("range must be start:stop:step with step > 0, got '" + text + "'");
        const auto n = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
        for (long i = 0; i <= n; ++i) out.push_back(parts[0] + static_cast<double>(i) * parts[2]);
        return out;
    }
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(number(p));
    if (out.empty()) throw ConfigurationError("empty list");
    return out;
}

}  // namespace

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_list(text)) {
        if (v < 0 || v != std::floor(v)) throw ConfigurationError("sizes must be whole numbers, got '" + text + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::vector<double> parse_values(const std::string& text) { return parse_list(text); }

}  // namespace vrpdr::bench
