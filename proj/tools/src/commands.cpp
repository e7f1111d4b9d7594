#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "ste/fock.hpp"
#include "ste/gaussian.hpp"
#include "ste/io.hpp"
#include "ste/master.hpp"
#include "ste/observables.hpp"
#include "ste/shortcut.hpp"

namespace ste::cli {

namespace {

using nlohmann::json;

constexpr double kCrossMethodTolerance = 0.005;

json timescale_json(const TimescaleReport& rep) {
    return json{{"threshold", rep.threshold},
                {"tau_bath", rep.tau_bath},
                {"omega_max", rep.omega_max},
                {"tau_drive", std::isinf(rep.tau_drive) ? -1.0 : rep.tau_drive},
                {"secular_margin", rep.secular_margin},
                {"bath_vs_system_ok", rep.bath_vs_system_ok},
                {"drive_ok", rep.drive_ok},
                {"secular_ok", rep.secular_ok},
                {"all_ok", rep.all_ok()}};
}

void print_timescales(const TimescaleReport& rep, std::ostream& out) {
    auto line = [&](const char* name, double value, bool ok) {
        out << "  " << name << " = " << value << "  [" << (ok ? "pass" : "WARN") << "]\n";
    };
    out << "timescale report (threshold " << rep.threshold << "):\n";
    line("tau_bath * max omega(t)", rep.tau_bath * rep.omega_max, rep.bath_vs_system_ok);
    line("tau_bath / tau_drive", std::isinf(rep.tau_drive) ? 0.0 : rep.tau_bath / rep.tau_drive,
         rep.drive_ok);
    line("secular margin", rep.secular_margin, rep.secular_ok);
}

double profile_peak_omega(const FrequencyProfile& profile) {
    double peak = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        const double w2 = profile.omega_sq(profile.duration * i / 2000.0);
        peak = std::max(peak, std::sqrt(std::abs(w2)));
    }
    return peak;
}

// Fidelity of the master-equation final state against the thermal target,
// both expressed in the omega0 reference frame.
double master_fidelity(double n_final, double b_f, double bdot_f, const ModelParams& params) {
    const auto bog = fock::bogoliubov_coefficients(b_f, bdot_f, params.omega0, params.omega0);
    const auto cov = gauss::covariance_from_moments(n_final, bog.mu, bog.nu);
    return gauss::gaussian_fidelity(cov, gauss::target_covariance(params));
}

struct MasterRun {
    MomentTrajectory trajectory;
    ObservableTrace observables;
    double fidelity = 0.0;
};

MasterRun run_master(const RunConfig& cfg, const Protocol& protocol) {
    Protocol realized = protocol;
    realize_scaling(realized, cfg.model, cfg.integrator.rtol);

    MomentState init;
    init.n_occ = planck_occupation(cfg.model.omega0, cfg.model.temperature);
    MomentOptions opts;
    opts.rel_tol = cfg.integrator.rtol;
    opts.n_samples = cfg.integrator.samples;

    MasterRun run;
    run.trajectory = propagate_moments(*realized.scaling, cfg.bath, cfg.model, init, opts);
    run.observables = build_observable_trace(run.trajectory, realized.profile);

    const auto& last = run.trajectory.back();
    run.fidelity = master_fidelity(last.n_occ, last.b, last.bdot, cfg.model);
    return run;
}

void write_master_csv(const std::string& path, const json& header, const MasterRun& run,
                      const FrequencyProfile& profile) {
    std::vector<std::vector<double>> rows;
    rows.reserve(run.trajectory.samples.size());
    for (const auto& s : run.trajectory.samples) {
        const double w2 = profile.omega_sq(s.time);
        rows.push_back({s.time, w2 >= 0 ? std::sqrt(w2) : std::nan(""), s.b, s.bdot,
                        s.omega_tilde, s.n_occ, s.squeeze_moment.real(), s.squeeze_moment.imag(),
                        s.gamma_plus, s.gamma_minus});
    }
    io::write_csv(path, header.dump(),
                  {"t", "omega", "b", "bdot", "omega_tilde", "n_occ", "re_a2", "im_a2",
                   "gamma_plus", "gamma_minus"},
                  rows);
}

void write_observables_csv(const std::string& path, const json& header,
                           const ObservableTrace& trace) {
    std::vector<std::vector<double>> rows;
    rows.reserve(trace.times.size());
    for (std::size_t k = 0; k < trace.times.size(); ++k)
        rows.push_back({trace.times[k], trace.omega[k], trace.n_occ[k], trace.epsilon[k],
                        trace.t_eff[k], trace.coherence[k]});
    io::write_csv(path, header.dump(), {"t", "omega", "n_occ", "epsilon", "t_eff", "coherence"},
                  rows);
}

void write_exact_csv(const std::string& path, const json& header,
                     const gauss::ExactTrajectory& traj, const ModelParams& params) {
    const auto target = gauss::target_covariance(params);
    std::vector<std::vector<double>> rows;
    rows.reserve(traj.times.size());
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto& s = traj.sigma_s[k];
        rows.push_back({traj.times[k], s(0, 0), s(0, 1), s(1, 1),
                        gauss::gaussian_fidelity(s, target),
                        1.0 / (2.0 * std::sqrt(s.determinant()))});
    }
    io::write_csv(path, header.dump(),
                  {"t", "sxx", "sxp", "spp", "fidelity_to_target", "purity"}, rows);
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << j.dump(2) << "\n";
}

RunConfig load_from(const CommonArgs& args) {
    if (args.config_path.empty()) throw std::runtime_error("--config is required");
    RunConfig cfg = load_config(args.config_path);
    if (args.method_override) {
        cfg.method = *args.method_override;
        cfg.resolved["method"] = to_string(cfg.method);
    }
    if (args.jobs_override >= 0) cfg.jobs = args.jobs_override;
    return cfg;
}

Protocol protocol_from(const CommonArgs& args, const RunConfig& cfg) {
    if (!args.protocol_path.empty()) return load_protocol(args.protocol_path, cfg.model);
    if (cfg.protocol) return parse_protocol(*cfg.protocol, cfg.model);
    throw std::runtime_error("no protocol: pass --protocol or add a protocol block to the config");
}

int worker_count(const RunConfig& cfg) {
    if (cfg.jobs > 0) return cfg.jobs;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

int cmd_design(const CommonArgs& args, double t_f_flag) {
    const RunConfig cfg = load_from(args);
    double t_f = t_f_flag;
    if (t_f <= 0 && cfg.protocol && cfg.protocol->contains("t_f"))
        t_f = cfg.protocol->at("t_f").get<double>();
    if (t_f <= 0) throw std::runtime_error("design: pass --t-f or a protocol block with t_f");

    const STEResult res = design_ste(cfg.model, cfg.bath, t_f);
    const TimescaleReport report = validate_timescales(res.scaling, res.profile, cfg.bath);

    json out{{"kind", "ste"},
             {"t_f", t_f},
             {"coefficients", res.scaling.coefficients()},
             {"a6_opt", res.a6_opt},
             {"predicted_fidelity", res.predicted_fidelity},
             {"predicted_final_occupation", res.predicted_final_occupation},
             {"omega_sq_negative", res.omega_sq_negative},
             {"optimizer_evaluations", res.optimizer_evaluations},
             {"model", {{"omega0", cfg.model.omega0},
                        {"omegaf", cfg.model.omegaf},
                        {"temperature", cfg.model.temperature}}},
             {"bath", {{"gamma", cfg.bath.gamma},
                       {"cutoff", cfg.bath.cutoff},
                       {"n_modes", cfg.bath.n_modes}}},
             {"timescales", timescale_json(report)}};
    if (args.with_trace) {
        json trace = json::array();
        for (const auto& [a6, f] : res.trace) trace.push_back({a6, f});
        out["optimizer_trace"] = trace;
    }

    std::filesystem::create_directories(args.out_dir);
    const std::string path = args.out_dir + "/design.json";
    write_json(path, out);

    std::cout << "designed STE protocol (t_f = " << t_f << ")\n"
              << "  a6 = " << res.a6_opt << " (" << res.optimizer_evaluations
              << " objective evaluations)\n"
              << "  predicted final occupation = " << res.predicted_final_occupation << "\n"
              << "  predicted fidelity = " << res.predicted_fidelity << "\n"
              << "  max omega(t) = " << profile_peak_omega(res.profile) << "\n"
              << "  wrote " << path << "\n";
    if (res.omega_sq_negative)
        std::cout << "  note: omega^2(t) goes negative (expulsive trap segments)\n";
    print_timescales(report, std::cout);
    return report.all_ok() ? 0 : 2;
}

int cmd_simulate(const CommonArgs& args) {
    const RunConfig cfg = load_from(args);
    Protocol protocol = protocol_from(args, cfg);
    std::filesystem::create_directories(args.out_dir);

    json header = cfg.resolved;
    header["protocol"] = protocol.source;

    json summary{{"config", header}, {"t_f", protocol.t_f},
                 {"kind", to_string(protocol.kind)}, {"fidelity", json::object()}};
    bool warned = false;

    if (cfg.method == Method::master || cfg.method == Method::both) {
        const MasterRun run = run_master(cfg, protocol);
        write_master_csv(args.out_dir + "/master_trajectory.csv", header, run, protocol.profile);
        write_observables_csv(args.out_dir + "/observables.csv", header, run.observables);
        summary["fidelity"]["master"] = run.fidelity;
        summary["final_occupation_master"] = run.trajectory.back().n_occ;
        summary["flags"] = {{"negative_omega_sq", run.observables.any_negative_omega_sq},
                            {"capped_epsilon", run.observables.any_capped_epsilon}};
        warned |= run.observables.any_negative_omega_sq || run.observables.any_capped_epsilon;
        std::cout << "master: final fidelity = " << run.fidelity << "\n";
    }

    if (cfg.method == Method::exact || cfg.method == Method::both) {
        const BathModes modes = discretize_bath(cfg.bath);
        gauss::ExactOptions opts;
        opts.dt = cfg.integrator.dt;
        opts.n_samples = cfg.integrator.samples;
        if (args.dump_final_sigma) opts.checkpoint_samples = {opts.n_samples};
        const auto traj = gauss::evolve_exact(protocol.profile, modes, cfg.model, opts);
        if (args.dump_final_sigma && !traj.checkpoints.empty())
            io::dump_real_matrix(args.out_dir + "/sigma_final.bin",
                                 traj.checkpoints.back().matrix, traj.checkpoints.back().time);
        write_exact_csv(args.out_dir + "/exact_trajectory.csv", header, traj, cfg.model);
        const double f =
            gauss::gaussian_fidelity(traj.final_sigma(), gauss::target_covariance(cfg.model));
        summary["fidelity"]["exact"] = f;
        summary["exact"] = {{"dt_used", traj.dt_used},
                            {"min_det_sigma_s", traj.min_det_sigma_s}};
        std::cout << "exact: final fidelity = " << f << "\n";
    }

    if (cfg.method == Method::both) {
        const double delta = std::abs(summary["fidelity"]["master"].get<double>() -
                                      summary["fidelity"]["exact"].get<double>());
        summary["cross_method_delta"] = delta;
        std::cout << "cross-method |delta F| = " << delta
                  << (delta <= kCrossMethodTolerance ? "" : "  (exceeds tolerance)") << "\n";
    }

    write_json(args.out_dir + "/summary.json", summary);
    return warned ? 2 : 0;
}

int cmd_sweep(const CommonArgs& args) {
    const RunConfig cfg = load_from(args);
    if (cfg.sweep.t_f.empty()) throw std::runtime_error("sweep: config needs sweep.t_f grid");
    std::filesystem::create_directories(args.out_dir);

    struct Point {
        double t_f;
        std::string protocol;
        double f_master = std::nan("");
        double f_exact = std::nan("");
        std::string error;
    };
    std::vector<Point> points;
    for (double t_f : cfg.sweep.t_f)
        for (const auto& name : cfg.sweep.protocols) {
            Point pt;
            pt.t_f = t_f;
            pt.protocol = name;
            points.push_back(std::move(pt));
        }

    const BathModes modes = discretize_bath(cfg.bath);
    const auto target = gauss::target_covariance(cfg.model);

    auto run_point = [&](Point& pt) {
        try {
            Protocol protocol;
            if (pt.protocol == "ste") {
                const STEResult res = design_ste(cfg.model, cfg.bath, pt.t_f);
                json j{{"kind", "ste"}, {"t_f", pt.t_f}, {"coefficients",
                                                          res.scaling.coefficients()}};
                protocol = parse_protocol(j, cfg.model);
            } else {
                json j{{"kind", pt.protocol}, {"t_f", pt.t_f}};
                protocol = parse_protocol(j, cfg.model);
            }
            if (cfg.method == Method::master || cfg.method == Method::both) {
                Protocol realized = protocol;
                realize_scaling(realized, cfg.model, cfg.integrator.rtol);
                MomentState init;
                init.n_occ = planck_occupation(cfg.model.omega0, cfg.model.temperature);
                MomentOptions mopts;
                mopts.rel_tol = cfg.integrator.rtol;
                mopts.n_samples = 64;
                const auto traj =
                    propagate_moments(*realized.scaling, cfg.bath, cfg.model, init, mopts);
                pt.f_master =
                    master_fidelity(traj.back().n_occ, traj.back().b, traj.back().bdot, cfg.model);
            }
            if (cfg.method == Method::exact || cfg.method == Method::both) {
                double dt = cfg.integrator.dt;
                const double peak = profile_peak_omega(protocol.profile);
                if (peak > 0.1 / dt) dt = 0.1 / peak;  // deep STE dips need finer steps
                const auto fin =
                    gauss::evolve_exact_final(protocol.profile, modes, cfg.model, dt);
                pt.f_exact = gauss::gaussian_fidelity(fin.sigma_s, target);
            }
        } catch (const std::exception& ex) {
            pt.error = ex.what();
        }
    };

    const int jobs = worker_count(cfg);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= points.size()) break;
            run_point(points[i]);
        }
    };
    std::vector<std::thread> threads;
    for (int i = 1; i < jobs; ++i) threads.emplace_back(worker);
    worker();
    for (auto& t : threads) t.join();

    const std::string path = args.out_dir + "/sweep.csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "# " << cfg.resolved.dump() << "\n";
    out << "# t_f,protocol,fidelity_master,fidelity_exact,error\n";
    bool any_error = false;
    for (const auto& pt : points) {
        out << io::format_double(pt.t_f) << "," << pt.protocol << ","
            << io::format_double(pt.f_master) << "," << io::format_double(pt.f_exact) << ",\""
            << pt.error << "\"\n";
        any_error |= !pt.error.empty();
    }
    out.close();
    std::cout << "wrote " << path << " (" << points.size() << " points, method "
              << to_string(cfg.method) << ")\n";
    return any_error ? 2 : 0;
}

int cmd_validate(const CommonArgs& args) {
    const RunConfig cfg = load_from(args);
    Protocol protocol = protocol_from(args, cfg);
    realize_scaling(protocol, cfg.model, cfg.integrator.rtol);

    const TimescaleReport report =
        validate_timescales(*protocol.scaling, protocol.profile, cfg.bath);

    std::filesystem::create_directories(args.out_dir);
    json out = timescale_json(report);
    out["t_f"] = protocol.t_f;
    out["kind"] = to_string(protocol.kind);
    out["config"] = cfg.resolved;
    write_json(args.out_dir + "/validate.json", out);

    print_timescales(report, std::cout);
    return report.all_ok() ? 0 : 2;
}

}  // namespace ste::cli
