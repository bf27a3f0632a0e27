#pragma once

#include <string>
#include <vector>

#include "vrpdr/core.hpp"

// Variable naming scheme of the model. The depot appears as a start copy "S"
// (launch side, arrival time 0) and an end copy "E" (recovery side).
namespace vrpdr::milp::names {

struct Tok {
    std::string text;
    static Tok start() { return {"S"}; }
    static Tok end() { return {"E"}; }
    static Tok node(int v) { return {std::to_string(v)}; }
    static Tok launch(int v) { return v == 0 ? start() : node(v); }
    static Tok recovery(int v) { return v == 0 ? end() : node(v); }
};

inline std::string vehicle(VehicleKind kind, int id) {
    return (kind == VehicleKind::drone ? "d" : "r") + std::to_string(id);
}

inline std::string x(int t, int i, int j) {
    return "x_t" + std::to_string(t) + "_" + std::to_string(i) + "_" + std::to_string(j);
}

inline std::string u(int c) { return "u_" + std::to_string(c); }

inline std::string A(int t, const Tok& v) { return "A_t" + std::to_string(t) + "_" + v.text; }

inline std::string sortie_suffix(VehicleKind kind, int id, int ti, int tk, int i, int k, const std::vector<int>& seq) {
    std::string s = vehicle(kind, id) + "_t" + std::to_string(ti) + "_t" + std::to_string(tk) + "_" +
                    Tok::launch(i).text + "_" + Tok::recovery(k).text + "_l";
    for (std::size_t q = 0; q < seq.size(); ++q) s += (q ? "." : "") + std::to_string(seq[q]);
    return s;
}

inline std::string select(VehicleKind kind, const std::string& suffix) {
    return (kind == VehicleKind::drone ? "y_" : "z_") + suffix;
}
inline std::string launch_time(const std::string& suffix) { return "g_" + suffix; }
inline std::string linearized(const std::string& suffix) { return "Ep_" + suffix; }

inline std::string etot(VehicleKind kind, int id) { return "Etot_" + vehicle(kind, id); }

inline std::string charge(VehicleKind kind, int id, int t, const Tok& v) {
    return "c_" + vehicle(kind, id) + "_t" + std::to_string(t) + "_" + v.text;
}
inline std::string charge_time(int t, const Tok& v) { return "ct_t" + std::to_string(t) + "_" + v.text; }

inline std::string ride(VehicleKind kind, int id, int t, const Tok& i, const Tok& j) {
    return "r_" + vehicle(kind, id) + "_t" + std::to_string(t) + "_" + i.text + "_" + j.text;
}
inline std::string level(VehicleKind kind, int id, int t, const Tok& v) {
    return "lev_" + vehicle(kind, id) + "_t" + std::to_string(t) + "_" + v.text;
}
inline std::string idle(VehicleKind kind, int id) { return "idle_" + vehicle(kind, id); }

}  // namespace vrpdr::milp::names
