#pragma once

#include <vector>

#include "vrpdr/core.hpp"

namespace vrpdr::energy {

/// Load-dependent drone consumption: alpha_d times the sum over euclidean
/// legs of (self weight + parcels still aboard) x leg length.
double drone_energy(int launch, const std::vector<int>& sequence, int recovery, const Instance& inst,
                    const FleetSpec& fleet);
double drone_sortie_energy(const Sortie& s, const Instance& inst, const FleetSpec& fleet);

/// Total (mechanical + electrical) robot power in watts at the given payload.
double robot_power(double payload_kg, const FleetSpec& fleet);

/// Robot consumption in energy units: power at each leg's payload times the
/// manhattan leg time, converted with fleet.robot_energy_scale.
double robot_energy(int launch, const std::vector<int>& sequence, int recovery, const Instance& inst,
                    const FleetSpec& fleet);
double robot_sortie_energy(const Sortie& s, const Instance& inst, const FleetSpec& fleet);

double sortie_energy(VehicleKind kind, int launch, const std::vector<int>& sequence, int recovery,
                     const Instance& inst, const FleetSpec& fleet);
double sortie_energy(const Sortie& s, const Instance& inst, const FleetSpec& fleet);

BatteryLedger make_ledger(VehicleKind kind, int vehicle_id, const FleetSpec& fleet);

struct ChargeOutcome {
    BatteryLedger ledger;
    double applied = 0.0;  // energy actually added
    double clamped = 0.0;  // requested amount that did not fit under capacity
};

/// Appends a charge entry, clamped so the running level never exceeds the
/// capacity. A zero-duration event carries no energy.
ChargeOutcome apply_charging(BatteryLedger ledger, const ChargingEvent& event, double time = 0.0);

/// Appends a sortie consumption entry. Throws InvalidEventError when the
/// level would drop below zero.
BatteryLedger apply_consumption(BatteryLedger ledger, double energy, double time = 0.0);

}  // namespace vrpdr::energy
