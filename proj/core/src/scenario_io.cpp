#include "quattrack/scenario_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace quattrack {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError(field, why);
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) known = true;
        if (!known) fail(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
}

const json& require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, "missing required key");
    return *it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(path, "must be finite");
    return d;
}

double number_or(const json& obj, const char* key, double fallback, const std::string& path) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : number(*it, path);
}

Vec3 vec3_of(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) fail(path, "expected an array of 3 numbers");
    return {number(v[0], path + "[0]"), number(v[1], path + "[1]"), number(v[2], path + "[2]")};
}

Inertia parse_inertia(const json& v) {
    if (!v.is_array()) fail("inertia", "expected an array (diag triple, flat 9, or 3x3 rows)");
    Mat3 m;
    if (v.size() == 3 && v[0].is_number()) {
        m = Mat3::diagonal(number(v[0], "inertia[0]"), number(v[1], "inertia[1]"),
                           number(v[2], "inertia[2]"));
    } else if (v.size() == 9) {
        for (int i = 0; i < 9; ++i) m.m[static_cast<size_t>(i)] = number(v[static_cast<size_t>(i)], "inertia");
    } else if (v.size() == 3 && v[0].is_array()) {
        for (int r = 0; r < 3; ++r) {
            const json& row = v[static_cast<size_t>(r)];
            if (!row.is_array() || row.size() != 3) fail("inertia", "rows must have 3 entries");
            for (int c = 0; c < 3; ++c) m(r, c) = number(row[static_cast<size_t>(c)], "inertia");
        }
    } else {
        fail("inertia", "expected a diag triple, a flat 9-array, or 3 rows of 3");
    }
    try {
        return Inertia(m);
    } catch (const std::invalid_argument& ex) {
        fail("inertia", ex.what());
    }
}

// Shortest round-trip decimal form; locale-independent by construction.
void append_number(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void append_fields(std::string& out, const TraceRecord& r) {
    const double cols[18] = {r.t,
                             r.q.s,
                             r.q.v.x,
                             r.q.v.y,
                             r.q.v.z,
                             r.omega.x,
                             r.omega.y,
                             r.omega.z,
                             norm(r.e_q),
                             norm(r.e_omega),
                             r.delta_hat.x,
                             r.delta_hat.y,
                             r.delta_hat.z,
                             r.tau.x,
                             r.tau.y,
                             r.tau.z,
                             r.v_k1,
                             r.v_aux};
    for (int i = 0; i < 18; ++i) {
        if (i) out.push_back(',');
        append_number(out, cols[i]);
    }
    out.push_back('\n');
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) fail("config", "cannot open file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

Scenario parse_scenario(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        fail("config", std::string("invalid JSON: ") + ex.what());
    }
    if (!doc.is_object()) fail("config", "top level must be a JSON object");
    reject_unknown_keys(doc, {"inertia", "gains", "mode", "disturbance", "initial", "sim", "region"},
                        "");

    Scenario cfg;
    cfg.reference = analytic_reference();
    cfg.inertia = parse_inertia(require(doc, "inertia", "inertia"));

    const json& mode_v = require(doc, "mode", "mode");
    if (!mode_v.is_string()) fail("mode", "expected a string");
    const std::string mode = mode_v.get<std::string>();
    if (mode == "robust")
        cfg.mode = ControllerMode::robust;
    else if (mode == "non_robust")
        cfg.mode = ControllerMode::non_robust;
    else
        fail("mode", "expected \"robust\" or \"non_robust\"");

    const json& gains = require(doc, "gains", "gains");
    if (!gains.is_object()) fail("gains", "expected an object");
    reject_unknown_keys(gains, {"alpha", "k_q", "k1", "k_omega", "k_delta", "delta_bound"},
                        "gains");
    cfg.gains.base.k1 = number(require(gains, "k1", "gains.k1"), "gains.k1");
    cfg.gains.base.k_omega = number(require(gains, "k_omega", "gains.k_omega"), "gains.k_omega");
    cfg.gains.base.alpha = number_or(gains, "alpha", 1.0, "gains.alpha");
    cfg.gains.base.k_q = number_or(gains, "k_q", cfg.gains.base.k1, "gains.k_q");
    cfg.gains.delta_bound = number_or(gains, "delta_bound", 0.0, "gains.delta_bound");
    if (cfg.mode == ControllerMode::robust) {
        cfg.gains.k_delta =
            number(require(gains, "k_delta", "gains.k_delta"), "gains.k_delta");
    } else {
        cfg.gains.k_delta = number_or(gains, "k_delta", 1.0, "gains.k_delta");
    }
    try {
        validate(cfg.gains.base);
        if (cfg.mode == ControllerMode::robust) validate(cfg.gains);
    } catch (const std::invalid_argument& ex) {
        fail("gains", ex.what());
    }

    const json& dist = require(doc, "disturbance", "disturbance");
    if (!dist.is_object()) fail("disturbance", "expected an object");
    reject_unknown_keys(dist, {"type", "vector", "frequency"}, "disturbance");
    const json& dtype = require(dist, "type", "disturbance.type");
    if (!dtype.is_string()) fail("disturbance.type", "expected a string");
    const std::string type = dtype.get<std::string>();
    if (type == "none") {
        cfg.disturbance = Disturbance::none();
    } else if (type == "constant") {
        cfg.disturbance = Disturbance::constant(
            vec3_of(require(dist, "vector", "disturbance.vector"), "disturbance.vector"));
    } else if (type == "sinusoidal") {
        cfg.disturbance = Disturbance::sinusoidal(
            vec3_of(require(dist, "vector", "disturbance.vector"), "disturbance.vector"),
            number(require(dist, "frequency", "disturbance.frequency"), "disturbance.frequency"));
    } else {
        fail("disturbance.type", "expected \"none\", \"constant\", or \"sinusoidal\"");
    }

    const json& init = require(doc, "initial", "initial");
    if (!init.is_object()) fail("initial", "expected an object");
    reject_unknown_keys(init, {"q", "omega"}, "initial");
    const json& q = require(init, "q", "initial.q");
    if (!q.is_array() || q.size() != 4) fail("initial.q", "expected [w, x, y, z]");
    cfg.initial_q = {number(q[0], "initial.q[0]"),
                     {number(q[1], "initial.q[1]"), number(q[2], "initial.q[2]"),
                      number(q[3], "initial.q[3]")}};
    cfg.initial_omega = vec3_of(require(init, "omega", "initial.omega"), "initial.omega");

    if (auto it = doc.find("sim"); it != doc.end()) {
        if (!it->is_object()) fail("sim", "expected an object");
        reject_unknown_keys(*it, {"dt", "t_end", "record_stride"}, "sim");
        cfg.dt = number_or(*it, "dt", cfg.dt, "sim.dt");
        cfg.t_end = number_or(*it, "t_end", cfg.t_end, "sim.t_end");
        if (auto st = it->find("record_stride"); st != it->end()) {
            if (!st->is_number_integer()) fail("sim.record_stride", "expected an integer");
            cfg.record_stride = st->get<int>();
        }
    }
    if (!(cfg.dt > 0.0)) fail("sim.dt", "must be > 0");
    if (!(cfg.t_end >= 0.0)) fail("sim.t_end", "must be >= 0");
    if (cfg.record_stride < 1) fail("sim.record_stride", "must be >= 1");

    if (auto it = doc.find("region"); it != doc.end()) {
        if (!it->is_object()) fail("region", "expected an object");
        reject_unknown_keys(*it, {"c", "epsilon"}, "region");
        RegionSpec spec;
        spec.c = number(require(*it, "c", "region.c"), "region.c");
        spec.epsilon = number(require(*it, "epsilon", "region.epsilon"), "region.epsilon");
        try {
            validate(spec);
        } catch (const std::invalid_argument& ex) {
            fail("region", ex.what());
        }
        if (cfg.mode == ControllerMode::robust &&
            !(cfg.gains.k_delta > cfg.gains.delta_bound * cfg.gains.delta_bound / (2.0 * spec.c)))
            fail("gains.k_delta", "must exceed delta_bound^2 / (2 c) for the configured region");
        cfg.region = spec;
    }

    return cfg;
}

const char* const trace_csv_header =
    "t,qw,qx,qy,qz,wx,wy,wz,eq_norm,ew_norm,dhx,dhy,dhz,taux,tauy,tauz,Vk1,Vaux";

void write_trace_csv(std::ostream& out, const Trace& trace) {
    std::string buf;
    buf.reserve(trace.records.size() * 160 + 64);
    buf += trace_csv_header;
    buf.push_back('\n');
    for (const TraceRecord& r : trace.records) append_fields(buf, r);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_trace_json(std::ostream& out, const Trace& trace) {
    json records = json::array();
    for (const TraceRecord& r : trace.records) {
        records.push_back({{"t", r.t},
                           {"q", {r.q.s, r.q.v.x, r.q.v.y, r.q.v.z}},
                           {"omega", {r.omega.x, r.omega.y, r.omega.z}},
                           {"eq_norm", norm(r.e_q)},
                           {"ew_norm", norm(r.e_omega)},
                           {"delta_hat", {r.delta_hat.x, r.delta_hat.y, r.delta_hat.z}},
                           {"tau", {r.tau.x, r.tau.y, r.tau.z}},
                           {"Vk1", r.v_k1},
                           {"Vaux", r.v_aux}});
    }
    out << json{{"records", std::move(records)}}.dump(1) << '\n';
}

void write_metrics_json(std::ostream& out, const Metrics& m) {
    nlohmann::ordered_json doc;
    doc["final_eq_norm"] = m.final_eq_norm;
    doc["final_ew_norm"] = m.final_ew_norm;
    doc["final_delta_err_norm"] = m.final_delta_err_norm;
    doc["rms_ew_20_40"] = m.rms_ew_20_40;
    doc["settle_time_eq_1e-2"] = m.settle_time_eq;
    doc["vk1_monotonicity_violations"] = m.vk1_monotonicity_violations;
    out << doc.dump(1) << '\n';
}

}  // namespace quattrack
