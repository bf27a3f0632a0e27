#include "vrpdr/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>
#include <utility>

namespace vrpdr::io {

namespace {

template <typename E = InvalidInstanceError>
void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
    if (!obj.is_object()) throw E(std::string(where) + ": expected an object");
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
            throw E(std::string(where) + ": unknown field '" + item.key() + "'");
    }
}

template <typename T, typename E = InvalidInstanceError>
T required(const json& obj, const char* key, std::string_view where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw E(std::string(where) + ": missing field '" + key + "'");
    try {
        return it->template get<T>();
    } catch (const json::exception& e) {
        throw E(std::string(where) + ": bad field '" + key + "': " + e.what());
    }
}

struct DoubleField {
    const char* name;
    double FleetSpec::*member;
};

struct IntField {
    const char* name;
    int FleetSpec::*member;
};

constexpr IntField kIntFields[] = {
    {"num_trucks", &FleetSpec::num_trucks},
    {"num_drones", &FleetSpec::num_drones},
    {"num_robots", &FleetSpec::num_robots},
    {"m", &FleetSpec::m},
};

constexpr DoubleField kDoubleFields[] = {
    {"s_t", &FleetSpec::s_t},         {"s_d", &FleetSpec::s_d},
    {"s_r", &FleetSpec::s_r},         {"C_t", &FleetSpec::C_t},
    {"C_d", &FleetSpec::C_d},         {"C_r", &FleetSpec::C_r},
    {"f_t", &FleetSpec::f_t},         {"f_d", &FleetSpec::f_d},
    {"f_r", &FleetSpec::f_r},         {"rho_d", &FleetSpec::rho_d},
    {"rho_r", &FleetSpec::rho_r},     {"D_max_d", &FleetSpec::D_max_d},
    {"D_max_r", &FleetSpec::D_max_r}, {"W_d", &FleetSpec::W_d},
    {"W_r", &FleetSpec::W_r},         {"B_d", &FleetSpec::B_d},
    {"B_r", &FleetSpec::B_r},         {"alpha_d", &FleetSpec::alpha_d},
    {"g", &FleetSpec::g},             {"l_leg", &FleetSpec::l_leg},
    {"C_rate_d", &FleetSpec::C_rate_d}, {"C_rate_r", &FleetSpec::C_rate_r},
    {"k1", &FleetSpec::k1},           {"k2", &FleetSpec::k2},
    {"alpha", &FleetSpec::alpha},     {"big_M", &FleetSpec::big_M},
    {"robot_energy_scale", &FleetSpec::robot_energy_scale},
};

VehicleKind kind_field(const json& obj, std::string_view where) {
    return vehicle_kind_from_string(required<std::string, StructuralError>(obj, "vehicle_kind", where));
}

}  // namespace

FleetSpec fleet_from_json(const json& j) {
    if (!j.is_object()) throw InvalidInstanceError("fleet: expected an object");
    FleetSpec fleet;
    for (const auto& item : j.items()) {
        const std::string& key = item.key();
        bool known = false;
        for (const auto& f : kIntFields) {
            if (key == f.name) {
                if (!item.value().is_number_integer())
                    throw InvalidInstanceError("fleet: field '" + key + "' must be an integer");
                fleet.*f.member = item.value().get<int>();
                known = true;
            }
        }
        for (const auto& f : kDoubleFields) {
            if (key == f.name) {
                if (!item.value().is_number()) throw InvalidInstanceError("fleet: field '" + key + "' must be a number");
                fleet.*f.member = item.value().get<double>();
                known = true;
            }
        }
        if (!known) throw InvalidInstanceError("fleet: unknown field '" + key + "'");
    }
    fleet.validate();
    return fleet;
}

json fleet_to_json(const FleetSpec& fleet) {
    json j = json::object();
    for (const auto& f : kIntFields) j[f.name] = fleet.*f.member;
    for (const auto& f : kDoubleFields) j[f.name] = fleet.*f.member;
    return j;
}

InstanceFile instance_from_json(const json& j) {
    reject_unknown(j, {"depot", "customers", "fleet", "seed"}, "instance");
    InstanceFile out;
    const json& depot = j.at("depot");
    reject_unknown(depot, {"x", "y"}, "depot");
    Node d;
    d.id = 0;
    d.pos = {required<double>(depot, "x", "depot"), required<double>(depot, "y", "depot")};
    out.instance.nodes.push_back(d);

    std::vector<Node> customers;
    if (j.contains("customers")) {
        if (!j["customers"].is_array()) throw InvalidInstanceError("customers: expected an array");
        for (const auto& c : j["customers"]) {
            reject_unknown(c, {"id", "x", "y", "weight", "truck_reachable"}, "customer");
            Node n;
            n.id = required<int>(c, "id", "customer");
            n.pos = {required<double>(c, "x", "customer"), required<double>(c, "y", "customer")};
            n.weight = required<double>(c, "weight", "customer");
            n.truck_reachable = c.contains("truck_reachable") ? c["truck_reachable"].get<bool>() : true;
            customers.push_back(n);
        }
    }
    std::sort(customers.begin(), customers.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < customers.size(); ++i) {
        if (customers[i].id != static_cast<int>(i) + 1)
            throw InvalidInstanceError("customer ids must be 1..n without gaps");
    }
    out.instance.nodes.insert(out.instance.nodes.end(), customers.begin(), customers.end());
    if (j.contains("seed")) out.instance.seed = j["seed"].get<std::int64_t>();
    if (j.contains("fleet")) out.fleet = fleet_from_json(j["fleet"]);
    out.instance.validate();
    return out;
}

json instance_to_json(const Instance& inst, const FleetSpec& fleet) {
    json j;
    const Node& depot = inst.node(0);
    j["depot"] = {{"x", depot.pos.x}, {"y", depot.pos.y}};
    json customers = json::array();
    for (int id = 1; id < inst.num_nodes(); ++id) {
        const Node& n = inst.node(id);
        customers.push_back(
            {{"id", n.id}, {"x", n.pos.x}, {"y", n.pos.y}, {"weight", n.weight}, {"truck_reachable", n.truck_reachable}});
    }
    j["customers"] = std::move(customers);
    j["fleet"] = fleet_to_json(fleet);
    j["seed"] = inst.seed;
    return j;
}

json sortie_to_json(const Sortie& s) {
    return {{"vehicle_kind", std::string(to_string(s.vehicle_kind))},
            {"vehicle_id", s.vehicle_id},
            {"launch_node", s.launch_node},
            {"recovery_node", s.recovery_node},
            {"sequence", s.sequence},
            {"launch_truck", s.launch_truck},
            {"recovery_truck", s.recovery_truck},
            {"launch_time", s.launch_time}};
}

json ledger_to_json(const BatteryLedger& ledger) {
    json entries = json::array();
    for (const auto& e : ledger.entries) {
        entries.push_back({{"time", e.time},
                           {"delta", e.delta},
                           {"cause", e.cause == LedgerCause::sortie ? "sortie" : "charge"}});
    }
    return {{"vehicle_kind", std::string(to_string(ledger.vehicle_kind))},
            {"vehicle_id", ledger.vehicle_id},
            {"capacity", ledger.capacity},
            {"entries", std::move(entries)}};
}

json plan_to_json(const Plan& plan) {
    json j;
    j["truck_routes"] = plan.truck_routes;
    json sorties = json::array();
    for (const auto& s : plan.sorties) sorties.push_back(sortie_to_json(s));
    j["sorties"] = std::move(sorties);
    json arrivals = json::array();
    for (const auto& truck : plan.truck_arrivals) {
        json list = json::array();
        for (const auto& e : truck) list.push_back({{"node", e.node}, {"time", e.time}});
        arrivals.push_back(std::move(list));
    }
    j["truck_arrivals"] = std::move(arrivals);
    json events = json::array();
    for (const auto& e : plan.charging_events) {
        events.push_back({{"vehicle_kind", std::string(to_string(e.vehicle_kind))},
                          {"vehicle_id", e.vehicle_id},
                          {"truck_id", e.truck_id},
                          {"node", e.node},
                          {"duration", e.duration},
                          {"amount", e.amount}});
    }
    j["charging_events"] = std::move(events);
    json ledgers = json::array();
    for (const auto& l : plan.ledgers) ledgers.push_back(ledger_to_json(l));
    j["ledgers"] = std::move(ledgers);
    j["objective_breakdown"] = {{"variable_cost", plan.objective.variable_cost},
                                {"fixed_cost", plan.objective.fixed_cost},
                                {"makespan", plan.objective.makespan},
                                {"weighted_objective", plan.objective.weighted}};
    return j;
}

Plan plan_from_json(const json& j) {
    reject_unknown<StructuralError>(
        j, {"truck_routes", "sorties", "truck_arrivals", "charging_events", "ledgers", "objective_breakdown"}, "plan");
    Plan plan;
    try {
        plan.truck_routes = j.at("truck_routes").get<std::vector<std::vector<int>>>();
    } catch (const json::exception& e) {
        throw StructuralError(std::string("plan: bad truck_routes: ") + e.what());
    }
    if (j.contains("sorties")) {
        for (const auto& s : j["sorties"]) {
            reject_unknown<StructuralError>(s,
                                            {"vehicle_kind", "vehicle_id", "launch_node", "recovery_node", "sequence",
                                             "launch_truck", "recovery_truck", "launch_time"},
                                            "sortie");
            Sortie out;
            out.vehicle_kind = kind_field(s, "sortie");
            out.vehicle_id = required<int, StructuralError>(s, "vehicle_id", "sortie");
            out.launch_node = required<int, StructuralError>(s, "launch_node", "sortie");
            out.recovery_node = required<int, StructuralError>(s, "recovery_node", "sortie");
            out.sequence = required<std::vector<int>, StructuralError>(s, "sequence", "sortie");
            out.launch_truck = required<int, StructuralError>(s, "launch_truck", "sortie");
            out.recovery_truck = required<int, StructuralError>(s, "recovery_truck", "sortie");
            out.launch_time = required<double, StructuralError>(s, "launch_time", "sortie");
            plan.sorties.push_back(std::move(out));
        }
    }
    if (j.contains("truck_arrivals")) {
        for (const auto& truck : j["truck_arrivals"]) {
            std::vector<TimelineEntry> list;
            for (const auto& e : truck) {
                reject_unknown<StructuralError>(e, {"node", "time"}, "arrival");
                list.push_back({required<int, StructuralError>(e, "node", "arrival"),
                                required<double, StructuralError>(e, "time", "arrival")});
            }
            plan.truck_arrivals.push_back(std::move(list));
        }
    }
    if (j.contains("charging_events")) {
        for (const auto& e : j["charging_events"]) {
            reject_unknown<StructuralError>(e, {"vehicle_kind", "vehicle_id", "truck_id", "node", "duration", "amount"},
                                            "charging event");
            ChargingEvent ev;
            ev.vehicle_kind = kind_field(e, "charging event");
            ev.vehicle_id = required<int, StructuralError>(e, "vehicle_id", "charging event");
            ev.truck_id = required<int, StructuralError>(e, "truck_id", "charging event");
            ev.node = required<int, StructuralError>(e, "node", "charging event");
            ev.duration = required<double, StructuralError>(e, "duration", "charging event");
            ev.amount = required<double, StructuralError>(e, "amount", "charging event");
            plan.charging_events.push_back(ev);
        }
    }
    if (j.contains("ledgers")) {
        for (const auto& l : j["ledgers"]) {
            reject_unknown<StructuralError>(l, {"vehicle_kind", "vehicle_id", "capacity", "entries"}, "ledger");
            BatteryLedger ledger;
            ledger.vehicle_kind = kind_field(l, "ledger");
            ledger.vehicle_id = required<int, StructuralError>(l, "vehicle_id", "ledger");
            ledger.capacity = required<double, StructuralError>(l, "capacity", "ledger");
            for (const auto& e : l.value("entries", json::array())) {
                reject_unknown<StructuralError>(e, {"time", "delta", "cause"}, "ledger entry");
                const auto cause = required<std::string, StructuralError>(e, "cause", "ledger entry");
                if (cause != "sortie" && cause != "charge")
                    throw StructuralError("ledger entry: unknown cause '" + cause + "'");
                ledger.entries.push_back({required<double, StructuralError>(e, "time", "ledger entry"),
                                          required<double, StructuralError>(e, "delta", "ledger entry"),
                                          cause == "sortie" ? LedgerCause::sortie : LedgerCause::charge});
            }
            plan.ledgers.push_back(std::move(ledger));
        }
    }
    if (j.contains("objective_breakdown")) {
        const json& o = j["objective_breakdown"];
        reject_unknown<StructuralError>(o, {"variable_cost", "fixed_cost", "makespan", "weighted_objective"},
                                        "objective_breakdown");
        plan.objective.variable_cost = o.value("variable_cost", 0.0);
        plan.objective.fixed_cost = o.value("fixed_cost", 0.0);
        plan.objective.makespan = o.value("makespan", 0.0);
        plan.objective.weighted = o.value("weighted_objective", 0.0);
    }
    return plan;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

InstanceFile load_instance(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw InvalidInstanceError(path.string() + ": " + e.what());
    }
    return instance_from_json(j);
}

Plan load_plan(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_text(path));
    } catch (const json::parse_error& e) {
        throw StructuralError(path.string() + ": " + e.what());
    }
    return plan_from_json(j);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace vrpdr::io
