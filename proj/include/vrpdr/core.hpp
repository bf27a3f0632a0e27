#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace vrpdr {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInstanceError : public Error { public: using Error::Error; };
class KindMismatchError : public Error { public: using Error::Error; };
class InvalidEventError : public Error { public: using Error::Error; };
class ModelSizeError : public Error { public: using Error::Error; };
class ConfigurationError : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class StructuralError : public Error { public: using Error::Error; };

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

struct Point {
    double x = 0.0;  // km
    double y = 0.0;  // km
};

double manhattan_distance(Point a, Point b);
double euclidean_distance(Point a, Point b);

// ---------------------------------------------------------------------------
// Instance and fleet
// ---------------------------------------------------------------------------

struct Node {
    int id = 0;
    Point pos;
    double weight = 0.0;  // kg, 0 for the depot
    bool truck_reachable = true;
};

enum class VehicleKind { drone, robot };

std::string_view to_string(VehicleKind kind);
VehicleKind vehicle_kind_from_string(std::string_view text);

/// Fleet composition and per-modality parameters. Defaults are the
/// standard experiment values (one truck carrying one drone and one robot).
struct FleetSpec {
    int num_trucks = 1;
    int num_drones = 1;
    int num_robots = 1;

    double s_t = 45.0;  // km/h
    double s_d = 75.0;
    double s_r = 25.0;

    double C_t = 2.9;  // $/km
    double C_d = 0.08;
    double C_r = 0.06;

    double f_t = 30.0;  // $
    double f_d = 10.0;
    double f_r = 8.0;

    double rho_d = 25.0;  // kg
    double rho_r = 20.0;

    double D_max_d = 20.0;  // km per sortie
    double D_max_r = 15.0;

    double W_d = 18.0;  // kg
    double W_r = 15.0;

    double B_d = 14000.0;  // energy units
    double B_r = 8000.0;

    double alpha_d = 128.0;
    double g = 9.81;       // m/s^2
    double l_leg = 0.5;    // m

    double C_rate_d = 5000.0;  // energy units per hour
    double C_rate_r = 4000.0;

    double k1 = 0.1;
    double k2 = 0.2;

    int m = 3;            // max customers per sortie
    double alpha = 0.5;   // objective weight
    double big_M = 1e5;

    // Energy units per watt-hour of robot consumption (mAh at a 14.8 V pack).
    double robot_energy_scale = 1000.0 / 14.8;

    int vehicle_count(VehicleKind kind) const { return kind == VehicleKind::drone ? num_drones : num_robots; }
    double speed(VehicleKind kind) const { return kind == VehicleKind::drone ? s_d : s_r; }
    double unit_cost(VehicleKind kind) const { return kind == VehicleKind::drone ? C_d : C_r; }
    double fixed_cost(VehicleKind kind) const { return kind == VehicleKind::drone ? f_d : f_r; }
    double payload(VehicleKind kind) const { return kind == VehicleKind::drone ? rho_d : rho_r; }
    double max_range(VehicleKind kind) const { return kind == VehicleKind::drone ? D_max_d : D_max_r; }
    double battery(VehicleKind kind) const { return kind == VehicleKind::drone ? B_d : B_r; }
    double charge_rate(VehicleKind kind) const { return kind == VehicleKind::drone ? C_rate_d : C_rate_r; }

    /// Throws ConfigurationError when an invariant is broken.
    void validate() const;
};

/// Fleet modes used by the experiments: truck only, truck+drone,
/// truck+robot, entire fleet.
enum class Mode { to, td, tr, ef };

std::string_view to_string(Mode mode);
Mode mode_from_string(std::string_view text);
FleetSpec apply_mode(FleetSpec fleet, Mode mode);

/// Depot plus customers. nodes[0] is the depot; ids are dense.
struct Instance {
    std::vector<Node> nodes;
    std::int64_t seed = 0;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_customers() const { return num_nodes() - 1; }
    const Node& node(int id) const;
    bool valid_id(int id) const { return id >= 0 && id < num_nodes(); }
    std::vector<int> customer_ids() const;

    /// Throws InvalidInstanceError on broken invariants.
    void validate() const;
};

/// Truck metric with unreachable nodes masked to big_M.
double truck_distance(const Instance& inst, const FleetSpec& fleet, int from, int to);
double truck_travel_time(const Instance& inst, const FleetSpec& fleet, int from, int to);

/// Feature toggles shared by model building, validation, and the solvers.
struct ModelOptions {
    bool charging = true;
    bool fixed_docking = false;
    bool single_visit = false;
    bool single_trip = false;
    // Upper bound on sortie variables the model builder may create.
    std::int64_t max_sortie_variables = 2'000'000;

    int sortie_capacity(const FleetSpec& fleet) const { return single_visit ? 1 : fleet.m; }
};

// ---------------------------------------------------------------------------
// Sorties and plans
// ---------------------------------------------------------------------------

struct Sortie {
    VehicleKind vehicle_kind = VehicleKind::drone;
    int vehicle_id = 0;
    int launch_node = 0;
    int recovery_node = 0;
    std::vector<int> sequence;
    int launch_truck = 0;
    int recovery_truck = 0;
    double launch_time = 0.0;  // h

    bool operator==(const Sortie&) const = default;
};

/// Sum of leg lengths launch -> c1 -> ... -> recovery in the vehicle's metric.
double sortie_distance(const Sortie& s, const Instance& inst);
double sortie_distance(VehicleKind kind, int launch, const std::vector<int>& sequence, int recovery,
                       const Instance& inst);
double sortie_payload(const std::vector<int>& sequence, const Instance& inst);

struct ChargingEvent {
    VehicleKind vehicle_kind = VehicleKind::drone;
    int vehicle_id = 0;
    int truck_id = 0;
    int node = 0;          // node where the carrying leg starts
    double duration = 0.0; // h
    double amount = 0.0;   // energy units

    bool operator==(const ChargingEvent&) const = default;
};

enum class LedgerCause { sortie, charge };

struct LedgerEntry {
    double time = 0.0;
    double delta = 0.0;
    LedgerCause cause = LedgerCause::sortie;

    bool operator==(const LedgerEntry&) const = default;
};

struct BatteryLedger {
    VehicleKind vehicle_kind = VehicleKind::drone;
    int vehicle_id = 0;
    double capacity = 0.0;
    std::vector<LedgerEntry> entries;

    /// Level after all entries, starting from full capacity.
    double level() const;
    bool operator==(const BatteryLedger&) const = default;
};

struct TimelineEntry {
    int node = 0;
    double time = 0.0;

    bool operator==(const TimelineEntry&) const = default;
};

struct ObjectiveBreakdown {
    double variable_cost = 0.0;
    double fixed_cost = 0.0;
    double makespan = 0.0;
    double weighted = 0.0;

    double operational_cost() const { return variable_cost + fixed_cost; }
    bool operator==(const ObjectiveBreakdown&) const = default;
};

struct Plan {
    std::vector<std::vector<int>> truck_routes;
    std::vector<Sortie> sorties;
    // Route-aligned arrival times, one list per truck.
    std::vector<std::vector<TimelineEntry>> truck_arrivals;
    std::vector<ChargingEvent> charging_events;
    std::vector<BatteryLedger> ledgers;
    ObjectiveBreakdown objective;

    bool operator==(const Plan&) const = default;
};

/// Every customer appears exactly once across routes and sortie sequences.
bool covers_customers_exactly_once(const Plan& plan, const Instance& inst);

// ---------------------------------------------------------------------------
// Sortie sequences
// ---------------------------------------------------------------------------

/// All ordered tuples of distinct customers of length 1..m, ordered by
/// (length, lexicographic ids). `customers` is sorted internally.
std::vector<std::vector<int>> enumerate_sequences(std::vector<int> customers, int m);

/// Number of sequences enumerate_sequences would return.
std::int64_t count_sequences(std::int64_t n, int m);

}  // namespace vrpdr
