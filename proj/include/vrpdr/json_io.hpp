#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "vrpdr/core.hpp"

namespace vrpdr::io {

using json = nlohmann::ordered_json;

struct InstanceFile {
    Instance instance;
    FleetSpec fleet;
};

// Unknown keys anywhere in the document are rejected with InvalidInstanceError.
InstanceFile instance_from_json(const json& j);
json instance_to_json(const Instance& inst, const FleetSpec& fleet);

FleetSpec fleet_from_json(const json& j);
json fleet_to_json(const FleetSpec& fleet);

Plan plan_from_json(const json& j);
json plan_to_json(const Plan& plan);

json sortie_to_json(const Sortie& s);
json ledger_to_json(const BatteryLedger& ledger);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

InstanceFile load_instance(const std::filesystem::path& path);
Plan load_plan(const std::filesystem::path& path);

// Two-space indented dump with trailing newline.
std::string dump(const json& j);

}  // namespace vrpdr::io
