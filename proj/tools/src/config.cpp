#include "config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include "ste/shortcut.hpp"

namespace ste::cli {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items())
        if (!allowed.count(key))
            throw std::invalid_argument("config: unknown key \"" + key + "\" in " + where);
}

double require_number(const json& j, const std::string& key, const std::string& where) {
    if (!j.contains(key))
        throw std::invalid_argument("config: missing key \"" + key + "\" in " + where);
    if (!j.at(key).is_number())
        throw std::invalid_argument("config: \"" + key + "\" in " + where + " must be a number");
    return j.at(key).get<double>();
}

}  // namespace

Method method_from_string(const std::string& name) {
    if (name == "master") return Method::master;
    if (name == "exact") return Method::exact;
    if (name == "both") return Method::both;
    throw std::invalid_argument("config: unknown method \"" + name + "\"");
}

const char* to_string(Method method) {
    switch (method) {
        case Method::master: return "master";
        case Method::exact: return "exact";
        case Method::both: return "both";
    }
    return "unknown";
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    json j;
    in >> j;
    return parse_config(j);
}

RunConfig parse_config(const json& j) {
    reject_unknown_keys(j,
                        {"omega0", "omegaf", "temperature", "hbar", "mass", "kb", "bath",
                         "method", "integrator", "protocol", "sweep", "jobs"},
                        "top level");

    RunConfig cfg;
    cfg.model.omega0 = j.value("omega0", 1.0);
    cfg.model.omegaf = require_number(j, "omegaf", "top level");
    cfg.model.temperature = require_number(j, "temperature", "top level");
    cfg.model.hbar = j.value("hbar", 1.0);
    cfg.model.mass = j.value("mass", 1.0);
    cfg.model.kb = j.value("kb", 1.0);
    cfg.model.validate();

    if (!j.contains("bath"))
        throw std::invalid_argument("config: missing \"bath\" block");
    const json& jb = j.at("bath");
    reject_unknown_keys(jb, {"gamma", "cutoff", "n_modes"}, "bath");
    cfg.bath.gamma = require_number(jb, "gamma", "bath");
    cfg.bath.cutoff = require_number(jb, "cutoff", "bath");
    cfg.bath.n_modes = jb.value("n_modes", 600);
    cfg.bath.validate();
    if (cfg.bath.cutoff <= cfg.model.omega0)
        throw std::invalid_argument("config: bath cutoff must exceed omega0");

    if (j.contains("method")) cfg.method = method_from_string(j.at("method").get<std::string>());

    if (j.contains("integrator")) {
        const json& ji = j.at("integrator");
        reject_unknown_keys(ji, {"dt", "rtol", "samples"}, "integrator");
        cfg.integrator.dt = ji.value("dt", cfg.integrator.dt);
        cfg.integrator.rtol = ji.value("rtol", cfg.integrator.rtol);
        cfg.integrator.samples = ji.value("samples", cfg.integrator.samples);
        if (!(cfg.integrator.dt > 0) || !(cfg.integrator.rtol > 0) || cfg.integrator.samples < 1)
            throw std::invalid_argument("config: invalid integrator block");
    }

    if (j.contains("protocol")) cfg.protocol = j.at("protocol");

    if (j.contains("sweep")) {
        const json& js = j.at("sweep");
        reject_unknown_keys(js, {"t_f", "protocols"}, "sweep");
        if (js.contains("t_f")) cfg.sweep.t_f = js.at("t_f").get<std::vector<double>>();
        if (js.contains("protocols"))
            cfg.sweep.protocols = js.at("protocols").get<std::vector<std::string>>();
        for (const auto& name : cfg.sweep.protocols)
            if (name != "ste" && name != "quench" && name != "ramp")
                throw std::invalid_argument("config: sweep protocol must be ste|quench|ramp, got " +
                                            name);
        for (double t : cfg.sweep.t_f)
            if (!(t > 0)) throw std::invalid_argument("config: sweep t_f values must be > 0");
    }

    cfg.jobs = j.value("jobs", 0);
    if (cfg.jobs < 0) throw std::invalid_argument("config: jobs must be >= 0");

    cfg.resolved = j;
    cfg.resolved["method"] = to_string(cfg.method);
    cfg.resolved["integrator"] = {{"dt", cfg.integrator.dt},
                                  {"rtol", cfg.integrator.rtol},
                                  {"samples", cfg.integrator.samples}};
    return cfg;
}

Protocol parse_protocol(const json& j, const ModelParams& params) {
    // Design outputs are valid protocol files, so their metadata keys are
    // accepted alongside the required fields.
    reject_unknown_keys(j,
                        {"kind", "t_f", "coefficients", "samples", "a6_opt", "predicted_fidelity",
                         "predicted_final_occupation", "omega_sq_negative", "model", "bath",
                         "optimizer_evaluations", "optimizer_trace", "timescales"},
                        "protocol");
    if (!j.contains("kind"))
        throw std::invalid_argument("protocol: missing \"kind\"");

    Protocol protocol;
    protocol.kind = profile_kind_from_string(j.at("kind").get<std::string>());
    protocol.source = j;

    if (protocol.kind == ProfileKind::custom) {
        if (!j.contains("samples"))
            throw std::invalid_argument("protocol: custom kind requires \"samples\"");
        std::vector<double> ts, w2;
        for (const auto& pair : j.at("samples")) {
            if (!pair.is_array() || pair.size() != 2)
                throw std::invalid_argument("protocol: samples must be [t, omega_sq] pairs");
            ts.push_back(pair[0].get<double>());
            w2.push_back(pair[1].get<double>());
        }
        protocol.profile = custom_profile(ts, w2);
        protocol.t_f = protocol.profile.duration;
        return protocol;
    }

    protocol.t_f = require_number(j, "t_f", "protocol");
    if (!(protocol.t_f > 0)) throw std::invalid_argument("protocol: t_f must be > 0");

    switch (protocol.kind) {
        case ProfileKind::ste: {
            if (!j.contains("coefficients"))
                throw std::invalid_argument("protocol: ste kind requires \"coefficients\"");
            const auto coeffs = j.at("coefficients").get<std::vector<double>>();
            if (coeffs.size() != 7)
                throw std::invalid_argument("protocol: need exactly 7 coefficients a0..a6");
            std::array<double, 7> a{};
            std::copy(coeffs.begin(), coeffs.end(), a.begin());
            auto scaling =
                std::make_shared<PolynomialScaling>(a, protocol.t_f, params.omega0);
            protocol.scaling = scaling;
            protocol.profile = reverse_frequency(scaling);
            break;
        }
        case ProfileKind::quench:
            protocol.profile = quench_protocol(params, protocol.t_f);
            break;
        case ProfileKind::ramp:
            protocol.profile = ramp_protocol(params, protocol.t_f);
            break;
        case ProfileKind::constant: {
            // static trap at omega0
            protocol.profile.kind = ProfileKind::constant;
            protocol.profile.duration = protocol.t_f;
            const double w2 = params.omega0 * params.omega0;
            protocol.profile.omega_sq = [w2](double) { return w2; };
            protocol.scaling = std::make_shared<PolynomialScaling>(
                std::array<double, 7>{1, 0, 0, 0, 0, 0, 0}, protocol.t_f, params.omega0);
            break;
        }
        default:
            throw std::invalid_argument("protocol: unsupported kind");
    }
    return protocol;
}

Protocol load_protocol(const std::string& path, const ModelParams& params) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open protocol file " + path);
    json j;
    in >> j;
    return parse_protocol(j, params);
}

void realize_scaling(Protocol& protocol, const ModelParams& params, double rtol) {
    if (protocol.scaling) return;
    ErmakovOptions opts;
    opts.rel_tol = rtol;
    protocol.scaling = std::make_shared<TabulatedScaling>(
        forward_ermakov(protocol.profile, 1.0, 0.0, params.omega0, opts));
}

}  // namespace ste::cli
