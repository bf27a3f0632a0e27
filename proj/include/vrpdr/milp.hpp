#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "vrpdr/core.hpp"

namespace vrpdr::milp {

class LpNameError : public Error { public: using Error::Error; };

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { binary, continuous };
enum class Sense { le, eq, ge };

struct Variable {
    std::string name;
    VarKind kind = VarKind::continuous;
    double lower = 0.0;
    double upper = kInf;
};

struct Term {
    int var = 0;
    double coef = 0.0;
};

struct Constraint {
    std::string name;
    std::string group;
    std::vector<Term> terms;
    Sense sense = Sense::le;
    double rhs = 0.0;
};

// One (vehicle, truck pair, launch, sequence, recovery) selection variable.
// launch 0 is the depot start copy, recovery 0 the depot end copy.
struct SortieVar {
    VehicleKind kind = VehicleKind::drone;
    int vehicle = 0;
    int launch_truck = 0;
    int recovery_truck = 0;
    int launch = 0;
    int recovery = 0;
    std::vector<int> sequence;
    int select = -1;       // y or z
    int launch_time = -1;  // Γ_s
    int linearized = -1;   // E' (robots only)
    double energy = 0.0;
    double distance = 0.0;
};

class MilpModel {
public:
    std::vector<Variable> variables;
    std::vector<Constraint> constraints;
    std::vector<Term> objective;  // minimized
    std::vector<std::string> groups;
    std::vector<SortieVar> sorties;

    int add_variable(std::string name, VarKind kind, double lower = 0.0, double upper = kInf);
    void add_constraint(std::string_view group, std::vector<Term> terms, Sense sense, double rhs);
    int find(const std::string& name) const;  // -1 when absent
    int at(const std::string& name) const;    // throws when absent
    std::size_t group_size(std::string_view group) const;
    std::size_t count_binaries() const;

private:
    std::unordered_map<std::string, int> index_;
    std::unordered_map<std::string, std::size_t> group_counter_;
};

/// Number of sortie selection variables build_model would create.
std::int64_t count_sortie_variables(const Instance& inst, const FleetSpec& fleet, const ModelOptions& options);

/// Throws ModelSizeError when the sortie count exceeds options.max_sortie_variables.
MilpModel build_model(const Instance& inst, const FleetSpec& fleet, const ModelOptions& options);

/// CPLEX-LP text. Names are sanitized; a collision after sanitizing throws LpNameError.
std::string export_lp(const MilpModel& model);

struct ParsedLp {
    std::size_t objective_terms = 0;
    std::vector<std::pair<std::string, std::size_t>> constraint_terms;  // name, term count
    std::size_t bound_lines = 0;
    std::vector<std::string> binaries;
};

/// Minimal reader for the subset of LP text that export_lp writes.
ParsedLp parse_lp(const std::string& text);

/// Weighted cost/makespan objective of a plan; makespan is the travel-sum bound.
ObjectiveBreakdown objective_value(const Plan& plan, const Instance& inst, const FleetSpec& fleet);

/// Variable values that a plan induces in the model built with the same inputs.
std::vector<double> induced_assignment(const MilpModel& model, const Plan& plan, const Instance& inst,
                                       const FleetSpec& fleet, const ModelOptions& options);

struct Residual {
    std::string name;
    std::string group;
    double violation = 0.0;
};

/// Rows, bounds and integrality violated by more than tol.
std::vector<Residual> check_assignment(const MilpModel& model, const std::vector<double>& values, double tol = 1e-6);

double evaluate_objective(const MilpModel& model, const std::vector<double>& values);

}  // namespace vrpdr::milp
