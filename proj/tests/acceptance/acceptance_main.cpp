// Acceptance suite: runs every headline requirement at the reference
// parameters (omegaf = 3 omega0, T = 1, gamma = 0.002, cutoff = 100,
// N = 600 bath modes) and prints one PASS/FAIL line per criterion.
//
// The exact benchmark is evaluated with the fast adjoint engine for final
// states and with the full trajectory engine where time-resolved data is
// required; both are cross-validated against a reference integrator in the
// unit tests.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "ste/fock.hpp"
#include "ste/gaussian.hpp"
#include "ste/master.hpp"
#include "ste/observables.hpp"
#include "ste/shortcut.hpp"

using namespace ste;
using gauss::Matrix2d;

namespace {

struct Outcome {
    int id;
    std::string title;
    bool pass;
    std::string detail;
};

std::vector<Outcome> outcomes;

void record(int id, const std::string& title, bool pass, const std::string& detail) {
    outcomes.push_back({id, title, pass, detail});
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << id << ": " << title;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << std::endl;
}

std::string fmt(double v, int prec = 6) {
    std::ostringstream ss;
    ss.precision(prec);
    ss << v;
    return ss.str();
}

struct Context {
    ModelParams params;
    BathSpec bath{0.002, 100.0, 600};
    BathModes modes;
    Matrix2d target;
    double n_target = 0.0;

    std::map<double, STEResult> designs;
    std::map<double, double> f_exact_ste;     // adjoint engine, adaptive dt
    std::map<double, double> f_exact_ste_h;   // halved dt
    std::map<double, double> f_master_ste;
    std::map<double, double> f_exact_quench;
    std::map<double, double> f_exact_ramp;

    const STEResult& design(double t_f) {
        auto it = designs.find(t_f);
        if (it == designs.end())
            it = designs.emplace(t_f, design_ste(params, bath, t_f)).first;
        return it->second;
    }

    double adaptive_dt(const FrequencyProfile& profile) const {
        double peak = 1.0;
        for (int i = 0; i <= 2000; ++i)
            peak = std::max(peak,
                            std::sqrt(std::abs(profile.omega_sq(profile.duration * i / 2000.0))));
        return std::min(1e-3, 0.1 / peak);
    }

    double exact_final_fidelity(const FrequencyProfile& profile, double dt_scale = 1.0) {
        const double dt = adaptive_dt(profile) * dt_scale;
        const auto fin = gauss::evolve_exact_final(profile, modes, params, dt);
        return gauss::gaussian_fidelity(fin.sigma_s, target);
    }

    double master_fidelity_of_design(const STEResult& res) {
        MomentState init;
        init.n_occ = planck_occupation(params.omega0, params.temperature);
        MomentOptions opts;
        opts.n_samples = 64;
        const auto traj = propagate_moments(res.scaling, bath, params, init, opts);
        const auto bog = fock::bogoliubov_coefficients(traj.back().b, traj.back().bdot,
                                                       params.omega0, params.omega0);
        return gauss::gaussian_fidelity(
            gauss::covariance_from_moments(traj.back().n_occ, bog.mu, bog.nu), target);
    }
};

// -------------------------------------------------------------------------
// criterion 1: headline fidelity numbers
void criterion_1(Context& ctx) {
    const double f16 = ctx.f_exact_ste.at(16.0);
    double best = 0.0, best_tf = 0.0;
    for (const auto& [tf, f] : ctx.f_exact_ste)
        if (tf <= 20.0 && f > best) {
            best = f;
            best_tf = tf;
        }
    std::ostringstream detail;
    detail << "F_exact(16) = " << fmt(f16) << ", best F_exact for t_f <= 20 is " << fmt(best)
           << " at t_f = " << best_tf;
    record(1, "designed STE reaches 0.995 at t_f = 16 and 0.999 somewhere below t_f = 20",
           f16 >= 0.995 && best >= 0.999, detail.str());
}

// criterion 2: protocol ordering on the exact benchmark
void criterion_2(Context& ctx) {
    const std::vector<double> grid{12.0, 14.0, 16.0, 20.0, 25.0};
    bool ste_beats_quench = true, quench_beats_ramp = true;
    std::ostringstream detail;
    for (double tf : grid) {
        const double fs = ctx.f_exact_ste.at(tf);
        const double fq = ctx.f_exact_quench.at(tf);
        const double fr = ctx.f_exact_ramp.at(tf);
        ste_beats_quench &= fs > fq;
        quench_beats_ramp &= fq > fr;
        detail << "t_f=" << tf << ": STE " << fmt(fs, 4) << " quench " << fmt(fq, 4) << " ramp "
               << fmt(fr, 4) << "; ";
    }
    record(2, "exact-benchmark ordering F_STE > F_quench > F_ramp on {12,14,16,20,25}",
           ste_beats_quench && quench_beats_ramp, detail.str());
    if (!quench_beats_ramp)
        std::cout << "       note: the exact benchmark penalizes the quench's residual "
                     "squeezing; the ordering claim holds for the occupation-only "
                     "(master-equation) fidelity, see the supplementary line below"
                  << std::endl;
}

// criterion 3: single-parameter exponential law for the quench
void criterion_3(Context& ctx) {
    std::vector<double> ts, fs;
    for (const auto& [tf, f] : ctx.f_exact_quench)
        if (tf >= 10.0 && tf <= 30.0) {
            ts.push_back(tf);
            fs.push_back(f);
        }
    const double mean = std::accumulate(fs.begin(), fs.end(), 0.0) / fs.size();
    double ss_tot = 0.0;
    for (double f : fs) ss_tot += (f - mean) * (f - mean);

    auto sse = [&](double tau) {
        double acc = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double model = 1.0 - std::exp(-ts[i] / tau);
            acc += (fs[i] - model) * (fs[i] - model);
        }
        return acc;
    };
    // golden-section over a wide bracket
    double lo = 0.5, hi = 300.0;
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo), x2 = lo + invphi * (hi - lo);
    double f1 = sse(x1), f2 = sse(x2);
    while (hi - lo > 1e-8) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = sse(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = sse(x2);
        }
    }
    const double tau = 0.5 * (lo + hi);
    const double r2 = 1.0 - sse(tau) / ss_tot;

    // supplementary two-parameter fit 1 - A exp(-t/tau) for context
    double best_r2_2p = -1e9, best_tau2 = 0.0;
    for (double tau2 = 2.0; tau2 <= 120.0; tau2 *= 1.02) {
        double sy = 0, sx = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double x = std::exp(-ts[i] / tau2), y = 1.0 - fs[i];
            sy += y;
            sx += x;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(ts.size());
        const double a = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        double ss = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double resid = (1.0 - fs[i]) - a * std::exp(-ts[i] / tau2);
            ss += resid * resid;
        }
        const double r = 1.0 - ss / ss_tot;
        if (r > best_r2_2p) {
            best_r2_2p = r;
            best_tau2 = tau2;
        }
    }

    std::ostringstream detail;
    detail << "R^2 = " << fmt(r2, 4) << " at tau_q = " << fmt(tau, 4)
           << "; two-parameter fit 1 - A exp(-t/tau) reaches R^2 = " << fmt(best_r2_2p, 4)
           << " at tau = " << fmt(best_tau2, 4);
    record(3, "quench fidelity fits 1 - exp(-t_f/tau_q) with R^2 >= 0.99 on [10, 30]", r2 >= 0.99,
           detail.str());
}

// criterion 4: gaussian_fidelity vs Uhlmann fidelity in Fock space
void criterion_4(Context&) {
    struct State {
        double n, r, p;
    };
    std::vector<State> states;
    for (double n : {0.0, 0.05, 0.5, 1.0, 3.0}) states.push_back({n, 0.0, 0.0});
    states.push_back({0.0, 1.0, 0.0});
    states.push_back({0.05, 0.3, 0.0});
    states.push_back({0.5, 1.0, 0.6});
    states.push_back({1.0, 0.5, -0.9});
    states.push_back({3.0, 1.0, 0.0});

    auto eff_occ = [](const State& s) {
        return s.n * std::cosh(2 * s.r) + std::sinh(s.r) * std::sinh(s.r);
    };

    double worst = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = i; j < states.size(); ++j) {
            const auto &a = states[i], &b = states[j];
            const int dim = std::max(fock::choose_dim(eff_occ(a), 2.0),
                                     fock::choose_dim(eff_occ(b), 2.0));
            const double ff =
                fock::fidelity(fock::squeezed_thermal_state(a.n, a.r, a.p, dim),
                               fock::squeezed_thermal_state(b.n, b.r, b.p, dim));
            const double fg = gauss::gaussian_fidelity(
                gauss::squeezed_thermal_covariance(a.n, a.r, a.p),
                gauss::squeezed_thermal_covariance(b.n, b.r, b.p));
            worst = std::max(worst, std::abs(ff - fg));
            ++pairs;
        }

    // truncation convergence on the heaviest pair
    const int dim1 = fock::choose_dim(eff_occ(states.back()), 2.0);
    const double fa = fock::fidelity(fock::squeezed_thermal_state(3.0, 1.0, 0.0, dim1),
                                     fock::squeezed_thermal_state(0.5, 1.0, 0.6, dim1));
    const double fb =
        fock::fidelity(fock::squeezed_thermal_state(3.0, 1.0, 0.0, dim1 + dim1 / 2),
                       fock::squeezed_thermal_state(0.5, 1.0, 0.6, dim1 + dim1 / 2));
    std::ostringstream detail;
    detail << pairs << " pairs, max |F_gauss - F_fock| = " << fmt(worst, 3)
           << ", truncation shift " << fmt(std::abs(fa - fb), 3);
    record(4, "closed-form Gaussian fidelity matches the Fock oracle to 1e-6",
           worst <= 1e-6 && std::abs(fa - fb) <= 1e-7, detail.str());
}

// criterion 5: moment ODE vs direct Lindblad propagation
void criterion_5(Context& ctx) {
    const STEResult& res = ctx.design(16.0);
    const double n0 = planck_occupation(1.0, 1.0);
    const int dim = fock::choose_dim(n0);

    std::vector<double> times(401);
    for (int i = 0; i <= 400; ++i) times[static_cast<std::size_t>(i)] = 16.0 * i / 400.0;

    fock::FockLindbladOptions fopts;
    fopts.sample_times = times;
    const auto fres = fock::lindblad_propagate(res.scaling, ctx.bath, ctx.params,
                                               fock::thermal_state(n0, dim), fopts);

    MomentOptions mopts;
    mopts.n_samples = 400;
    MomentState init;
    init.n_occ = n0;
    const auto mres = propagate_moments(res.scaling, ctx.bath, ctx.params, init, mopts);

    double worst = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k)
        worst = std::max(worst, std::abs(fres.n_occ[k] - mres.samples[k].n_occ));
    record(5, "moment equations match Fock-space Lindblad propagation to 1e-5", worst <= 1e-5,
           "max |dn| = " + fmt(worst, 3) + " at dim " + std::to_string(dim));
}

// criterion 6: invariant conservation under closed evolution
void criterion_6(Context& ctx) {
    const STEResult& res = ctx.design(16.0);
    const int dim = 192;
    const int n_cols = 5;  // thermal weights, renormalized; covers 99.3% of the state

    fock::Mat init = fock::Mat::Zero(dim, n_cols);
    for (int c = 0; c < n_cols; ++c) init(c, c) = 1.0;
    fock::ClosedEvolutionOptions opts;
    for (int i = 0; i <= 8; ++i) opts.sample_times.push_back(16.0 * i / 8.0);

    const auto run = fock::closed_evolution(res.profile, init, opts);

    const double x = std::exp(-1.0);  // thermal ratio at T = 1, omega0 = 1
    std::vector<double> w(n_cols);
    double norm = 0.0;
    for (int c = 0; c < n_cols; ++c) norm += std::pow(x, c);
    for (int c = 0; c < n_cols; ++c) w[static_cast<std::size_t>(c)] = std::pow(x, c) / norm;

    double i_ref = 0.0, worst_drift = 0.0, worst_pop = 0.0;
    for (std::size_t k = 0; k < run.times.size(); ++k) {
        double b, bd, bdd;
        res.scaling.eval(run.times[k], b, bd, bdd);
        const fock::Mat inv = fock::invariant_matrix(b, bd, ctx.params, dim);
        double i_mean = 0.0;
        for (int c = 0; c < n_cols; ++c)
            i_mean += w[static_cast<std::size_t>(c)] *
                      (run.states[k].col(c).adjoint() * inv * run.states[k].col(c))(0, 0).real();
        if (k == 0) i_ref = i_mean;
        worst_drift = std::max(worst_drift, std::abs(i_mean - i_ref) / std::abs(i_ref));

        const auto bog = fock::bogoliubov_coefficients(b, bd, 1.0, 1.0);
        const fock::Mat a_inv = fock::invariant_mode_annihilation(bog, dim);
        Eigen::SelfAdjointEigenSolver<fock::Mat> es(a_inv.adjoint() * a_inv);
        for (int c = 0; c < n_cols; ++c) {
            const double pop =
                std::norm((es.eigenvectors().col(c).adjoint() * run.states[k].col(c))(0, 0));
            worst_pop = std::max(worst_pop, std::abs(pop - 1.0));
        }
    }
    std::ostringstream detail;
    detail << "relative <I> drift " << fmt(worst_drift, 3) << ", max population leakage "
           << fmt(worst_pop, 3) << ", boundary population " << fmt(run.max_boundary_population, 3);
    record(6, "dynamical invariant conserved under closed evolution to 1e-6",
           worst_drift <= 1e-6 && worst_pop <= 1e-6, detail.str());
}

// criterion 7: squeezing moment stays zero
void criterion_7(Context& ctx) {
    const STEResult& res = ctx.design(16.0);
    MomentState init;
    init.n_occ = planck_occupation(1.0, 1.0);
    const auto traj = propagate_moments(res.scaling, ctx.bath, ctx.params, init);
    double worst = 0.0;
    for (const auto& s : traj.samples) worst = std::max(worst, std::abs(s.squeeze_moment));
    record(7, "squeezing moment remains zero along the shortcut", worst <= 1e-12,
           "max |<a^2>| = " + fmt(worst, 3));
}

// criterion 8: reverse-engineering correctness
void criterion_8(Context& ctx) {
    const STEResult& res = ctx.design(16.0);
    const double bf = std::sqrt(1.0 / 3.0);
    const double boundary = res.scaling.boundary_residual(bf);

    double residual = 0.0;
    for (int i = 0; i <= 10000; ++i) {
        const double t = 16.0 * i / 10000.0;
        double b, bd, bdd;
        res.scaling.eval(t, b, bd, bdd);
        residual = std::max(residual,
                            std::abs(bdd + res.profile.omega_sq(t) * b - 1.0 / (b * b * b)));
    }

    const TabulatedScaling back = forward_ermakov(res.profile, 1.0, 0.0, 1.0);
    double round_trip = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double t = 16.0 * i / 4000.0;
        round_trip = std::max(round_trip, std::abs(back.b(t) - res.scaling.b(t)));
    }

    const FrequencyProfile quench = quench_protocol(ctx.params, 12.0);
    const TabulatedScaling qb = forward_ermakov(quench, 1.0, 0.0, 1.0);
    double quench_err = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double t = 12.0 * i / 4000.0;
        const double c = std::cos(3.0 * t), s = std::sin(3.0 * t);
        quench_err = std::max(quench_err, std::abs(qb.b(t) * qb.b(t) - (c * c + s * s / 9.0)));
    }

    std::ostringstream detail;
    detail << "boundary " << fmt(boundary, 3) << ", Ermakov residual " << fmt(residual, 3)
           << ", round trip " << fmt(round_trip, 3) << ", quench closed form "
           << fmt(quench_err, 3);
    record(8, "boundary conditions, Ermakov residual, round trips and quench closed form",
           boundary <= 1e-10 && residual <= 1e-8 && round_trip <= 1e-6 && quench_err <= 1e-8,
           detail.str());
}

// criterion 9: observable endpoints and orderings
void criterion_9(Context& ctx) {
    struct TraceStats {
        double c0, cf, cmax, teff0, tefff, teffmax;
    };
    std::map<double, TraceStats> stats;
    for (double tf : {16.0, 20.0, 30.0}) {
        const STEResult& res = ctx.design(tf);
        MomentState init;
        init.n_occ = planck_occupation(1.0, 1.0);
        MomentOptions mopts;
        mopts.n_samples = 400;
        const auto traj = propagate_moments(res.scaling, ctx.bath, ctx.params, init, mopts);
        const auto trace = build_observable_trace(traj, res.profile);
        TraceStats s{};
        s.c0 = trace.coherence.front();
        s.cf = trace.coherence.back();
        s.teff0 = trace.t_eff.front();
        s.tefff = trace.t_eff.back();
        s.cmax = 0.0;
        s.teffmax = 0.0;
        for (std::size_t k = 0; k < trace.times.size(); ++k) {
            s.cmax = std::max(s.cmax, trace.coherence[k]);
            s.teffmax = std::max(s.teffmax, trace.t_eff[k]);
        }
        stats[tf] = s;
    }

    bool ok = true;
    std::ostringstream detail;
    for (const auto& [tf, s] : stats) {
        ok &= std::abs(s.c0) <= 1e-6 && std::abs(s.cf) <= 1e-4;
        ok &= std::abs(s.teff0 - 1.0) <= 1e-6 && std::abs(s.tefff - 1.0) <= 1e-3;
        ok &= s.teffmax > 1.0;
        detail << "t_f=" << tf << ": maxC " << fmt(s.cmax, 4) << " maxTeff " << fmt(s.teffmax, 4)
               << "; ";
    }
    ok &= stats[16.0].cmax > stats[20.0].cmax && stats[20.0].cmax > stats[30.0].cmax;
    ok &= stats[16.0].teffmax > stats[20.0].teffmax && stats[20.0].teffmax > stats[30.0].teffmax;
    record(9, "coherence/effective-temperature endpoints and orderings across {16,20,30}", ok,
           detail.str());
}

// criterion 10: exact benchmark integrity
void criterion_10(Context& ctx) {
    // time-resolved physicality on the showcase trajectory
    const STEResult& res = ctx.design(16.0);
    gauss::ExactOptions opts;
    opts.dt = 1e-3;
    opts.n_samples = 2000;
    const auto t0 = std::chrono::steady_clock::now();
    const auto traj = gauss::evolve_exact(res.profile, ctx.modes, ctx.params, opts);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << "  [trajectory t_f=16] " << fmt(seconds, 3) << " s for "
              << fmt(16.0 / traj.dt_used, 3) << " steps" << std::endl;
    const double f_traj = gauss::gaussian_fidelity(traj.final_sigma(), ctx.target);
    const double engine_delta = std::abs(f_traj - ctx.f_exact_ste.at(16.0));

    // energy conservation for a coupled constant-frequency run; the classic
    // RK4 damps the fastest bath modes at theta = cutoff*dt, so the
    // conservation check runs at a converged step size
    FrequencyProfile flat;
    flat.kind = ProfileKind::constant;
    flat.duration = 2.0;
    flat.omega_sq = [](double) { return 4.0; };
    gauss::ExactOptions eopts;
    eopts.dt = 2.5e-4;
    eopts.n_samples = 50;
    eopts.collect_energy = true;
    const auto flat_run = gauss::evolve_exact(flat, ctx.modes, ctx.params, eopts);
    double energy_drift = 0.0;
    for (double e : flat_run.energy)
        energy_drift = std::max(energy_drift, std::abs(e - flat_run.energy.front()) /
                                                  std::abs(flat_run.energy.front()));

    // dt-halving stability of every final fidelity
    double halving = 0.0;
    for (const auto& [tf, f] : ctx.f_exact_ste)
        halving = std::max(halving, std::abs(f - ctx.f_exact_ste_h.at(tf)));

    std::ostringstream detail;
    detail << "min det sigma_S - 1/4 = " << fmt(traj.min_det_sigma_s - 0.25, 3)
           << ", energy drift " << fmt(energy_drift, 3) << ", max dt-halving shift "
           << fmt(halving, 3) << ", engine consistency " << fmt(engine_delta, 3);
    record(10, "physicality, energy conservation and dt-convergence of the exact benchmark",
           traj.min_det_sigma_s >= 0.25 - 1e-9 && energy_drift <= 1e-6 && halving <= 1e-5,
           detail.str());
}

// criterion 11: short-time breakdown of the master equation
void criterion_11(Context& ctx) {
    const std::vector<double> grid{0.5, 1.0, 2.0, 3.0, 5.0};
    bool all_warn = true;
    double max_gap = 0.0;
    std::ostringstream detail;
    for (double tf : grid) {
        const STEResult& res = ctx.design(tf);
        const double fm = ctx.f_master_ste.at(tf);
        const double fe = ctx.f_exact_ste.at(tf);
        const auto report = validate_timescales(res.scaling, res.profile, ctx.bath);
        all_warn &= !report.all_ok();
        max_gap = std::max(max_gap, fm - fe);
        detail << "t_f=" << tf << ": gap " << fmt(fm - fe, 3)
               << (report.all_ok() ? " (no warn!)" : " warn") << "; ";
    }
    detail << "breakdown gap " << fmt(max_gap, 3) << " vs tolerance 0.005";
    record(11,
           "short protocols (t_f <= 5) break the master equation and trigger validation warnings",
           all_warn && max_gap > 0.005, detail.str());
}

// criterion 12: cross-method agreement in the validity regime
void criterion_12(Context& ctx) {
    bool ok = true;
    std::ostringstream detail;
    for (double tf : {16.0, 20.0, 30.0}) {
        const double delta = std::abs(ctx.f_master_ste.at(tf) - ctx.f_exact_ste.at(tf));
        ok &= delta <= 0.005;
        detail << "t_f=" << tf << ": |dF| = " << fmt(delta, 4) << "; ";
    }
    record(12, "master and exact fidelities agree within 0.005 at t_f in {16,20,30}", ok,
           detail.str());
}

}  // namespace

int main() {
    Context ctx;
    ctx.params.omegaf = 3.0;
    ctx.modes = discretize_bath(ctx.bath);
    ctx.target = gauss::target_covariance(ctx.params);
    ctx.n_target = target_occupation(ctx.params);

    std::cout << "shortcut-to-equilibration acceptance suite" << std::endl
              << "parameters: omegaf = 3, T = 1, gamma = 0.002, cutoff = 100, N = 600"
              << std::endl;

    // --- shared heavy computations ---------------------------------------
    const std::vector<double> ste_grid{0.5, 1.0, 2.0, 3.0, 5.0, 12.0, 14.0, 16.0, 20.0, 25.0,
                                       30.0};
    for (double tf : ste_grid) {
        const STEResult& res = ctx.design(tf);
        ctx.f_master_ste[tf] = ctx.master_fidelity_of_design(res);
        ctx.f_exact_ste[tf] = ctx.exact_final_fidelity(res.profile);
        ctx.f_exact_ste_h[tf] = ctx.exact_final_fidelity(res.profile, 0.5);
        std::cout << "  [ste t_f=" << tf << "] F_master = " << fmt(ctx.f_master_ste[tf])
                  << ", F_exact = " << fmt(ctx.f_exact_ste[tf]) << std::endl;
    }
    for (double tf = 10.0; tf <= 30.0; tf += 1.0)
        ctx.f_exact_quench[tf] =
            ctx.exact_final_fidelity(quench_protocol(ctx.params, tf));
    for (double tf : {12.0, 14.0, 16.0, 20.0, 25.0})
        ctx.f_exact_ramp[tf] = ctx.exact_final_fidelity(ramp_protocol(ctx.params, tf));

    criterion_1(ctx);
    criterion_2(ctx);
    criterion_3(ctx);
    criterion_4(ctx);
    criterion_5(ctx);
    criterion_6(ctx);
    criterion_7(ctx);
    criterion_8(ctx);
    criterion_9(ctx);
    criterion_10(ctx);
    criterion_11(ctx);
    criterion_12(ctx);

    // Supplementary context for criterion 2: the ordering claimed by the
    // occupation-only route.
    {
        auto master_f = [&](const FrequencyProfile& prof) {
            ErmakovOptions eopts;
            const TabulatedScaling sc = forward_ermakov(prof, 1.0, 0.0, 1.0, eopts);
            MomentState init;
            init.n_occ = planck_occupation(1.0, 1.0);
            MomentOptions mopts;
            mopts.n_samples = 64;
            const auto traj = propagate_moments(sc, ctx.bath, ctx.params, init, mopts);
            return thermal_fidelity(traj.back().n_occ, ctx.n_target);
        };
        const double q16 = master_f(quench_protocol(ctx.params, 16.0));
        const double r16 = master_f(ramp_protocol(ctx.params, 16.0));
        std::cout << "supplementary: occupation-only (master) fidelities at t_f=16: quench "
                  << fmt(q16, 4) << ", ramp " << fmt(r16, 4)
                  << (q16 > r16 ? "  -> quench beats ramp on this route" : "") << std::endl;
    }

    int failures = 0;
    for (const auto& o : outcomes) failures += o.pass ? 0 : 1;
    std::cout << (failures == 0 ? "ALL CRITERIA PASSED"
                                : std::to_string(failures) + " CRITERIA FAILED")
              << " (" << outcomes.size() - static_cast<std::size_t>(failures) << "/"
              << outcomes.size() << ")" << std::endl;
    return failures == 0 ? 0 : 1;
}
