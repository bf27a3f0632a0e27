#include "vrpdr/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vrpdr::energy {

namespace {

constexpr double kKmhToMs = 1.0 / 3.6;
constexpr double kLevelTolerance = 1e-9;

// Calls visit(leg_length, payload_aboard) for each leg of the sortie.
template <typename Metric, typename Visit>
void for_each_leg(int launch, const std::vector<int>& sequence, int recovery, const Instance& inst, Metric metric,
                  Visit visit) {
    double aboard = sortie_payload(sequence, inst);
    Point prev = inst.node(launch).pos;
    for (int c : sequence) {
        const Node& n = inst.node(c);
        visit(metric(prev, n.pos), aboard);
        aboard -= n.weight;
        prev = n.pos;
    }
    // Last leg flies empty; avoid accumulating round-off from the subtraction.
    visit(metric(prev, inst.node(recovery).pos), 0.0);
}

}  // namespace

double drone_energy(int launch, const std::vector<int>& sequence, int recovery, const Instance& inst,
                    const FleetSpec& fleet) {
    double weighted = 0.0;
    for_each_leg(launch, sequence, recovery, inst, euclidean_distance,
                 [&](double leg, double aboard) { weighted += (fleet.W_d + aboard) * leg; });
    return fleet.alpha_d * weighted;
}

double drone_sortie_energy(const Sortie& s, const Instance& inst, const FleetSpec& fleet) {
    if (s.vehicle_kind != VehicleKind::drone) throw KindMismatchError("drone energy requested for a robot sortie");
    return drone_energy(s.launch_node, s.sequence, s.recovery_node, inst, fleet);
}

double robot_power(double payload_kg, const FleetSpec& fleet) {
    if (payload_kg < 0.0) throw DomainError("robot payload must be nonnegative");
    const double v = fleet.s_r * kKmhToMs;
    if (!(v > 0.0)) throw DomainError("robot speed must be positive (gait factor is singular at zero)");
    const double mech = fleet.k1 * (fleet.W_r + payload_kg) * fleet.g * v * (1.0 + fleet.g / (2.0 * fleet.l_leg * v * v));
    return mech + fleet.k2 * mech;
}

double robot_energy(int launch, const std::vector<int>& sequence, int recovery, const Instance& inst,
                    const FleetSpec& fleet) {
    if (!(fleet.s_r > 0.0)) throw DomainError("robot speed must be positive");
    double watt_hours = 0.0;
    for_each_leg(launch, sequence, recovery, inst, manhattan_distance, [&](double leg, double aboard) {
        watt_hours += robot_power(std::max(0.0, aboard), fleet) * (leg / fleet.s_r);
    });
    return watt_hours * fleet.robot_energy_scale;
}

double robot_sortie_energy(const Sortie& s, const Instance& inst, const FleetSpec& fleet) {
    if (s.vehicle_kind != VehicleKind::robot) throw KindMismatchError("robot energy requested for a drone sortie");
    return robot_energy(s.launch_node, s.sequence, s.recovery_node, inst, fleet);
}

double sortie_energy(VehicleKind kind, int launch, const std::vector<int>& sequence, int recovery,
                     const Instance& inst, const FleetSpec& fleet) {
    return kind == VehicleKind::drone ? drone_energy(launch, sequence, recovery, inst, fleet)
                                      : robot_energy(launch, sequence, recovery, inst, fleet);
}

double sortie_energy(const Sortie& s, const Instance& inst, const FleetSpec& fleet) {
    return sortie_energy(s.vehicle_kind, s.launch_node, s.sequence, s.recovery_node, inst, fleet);
}

BatteryLedger make_ledger(VehicleKind kind, int vehicle_id, const FleetSpec& fleet) {
    BatteryLedger ledger;
    ledger.vehicle_kind = kind;
    ledger.vehicle_id = vehicle_id;
    ledger.capacity = fleet.battery(kind);
    return ledger;
}

ChargeOutcome apply_charging(BatteryLedger ledger, const ChargingEvent& event, double time) {
    if (event.duration < 0.0) throw InvalidEventError("charging event has negative duration");
    if (event.amount < 0.0) throw InvalidEventError("charging event has negative amount");
    const double requested = event.duration == 0.0 ? 0.0 : event.amount;
    const double room = std::max(0.0, ledger.capacity - ledger.level());
    ChargeOutcome out;
    out.applied = std::min(requested, room);
    out.clamped = requested - out.applied;
    ledger.entries.push_back({time, out.applied, LedgerCause::charge});
    out.ledger = std::move(ledger);
    return out;
}

BatteryLedger apply_consumption(BatteryLedger ledger, double energy, double time) {
    if (energy < 0.0) throw InvalidEventError("sortie consumption must be nonnegative");
    if (energy > ledger.level() + kLevelTolerance)
        throw InvalidEventError("sortie needs " + std::to_string(energy) + " but only " +
                                std::to_string(ledger.level()) + " remains");
    ledger.entries.push_back({time, -energy, LedgerCause::sortie});
    return ledger;
}

}  // namespace vrpdr::energy
