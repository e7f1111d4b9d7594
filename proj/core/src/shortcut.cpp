#include "ste/shortcut.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ste {

double target_occupation(const ModelParams& params) {
    params.validate();
    return planck_occupation(params.omegaf, params.temperature);
}

double thermal_fidelity(double n1, double n2) {
    if (n1 < 0.0 || n2 < 0.0) throw std::invalid_argument("thermal_fidelity: occupations >= 0");
    const double x = n1 / (1.0 + n1);
    const double y = n2 / (1.0 + n2);
    const double denom = 1.0 - std::sqrt(x * y);
    return std::clamp((1.0 - x) * (1.0 - y) / (denom * denom), 0.0, 1.0);
}

namespace {

struct Objective {
    const ModelParams& params;
    const BathSpec& bath;
    double t_f;
    double n_initial;
    double n_target;
    const DesignOptions& opts;
    mutable int evaluations = 0;
    mutable std::vector<std::pair<double, double>> trace;

    // Returns (fidelity, final occupation); candidates with b <= 0 score -1
    // and are discarded, not fatal.
    std::pair<double, double> operator()(double a6) const {
        ++evaluations;
        try {
            const PolynomialScaling scaling = solve_boundary_coefficients(params, t_f, a6);
            MomentState init;
            init.n_occ = n_initial;
            const MomentTrajectory traj =
                propagate_moments(scaling, bath, params, init, opts.moments);
            const double f = thermal_fidelity(traj.back().n_occ, n_target);
            trace.emplace_back(a6, f);
            return {f, traj.back().n_occ};
        } catch (const std::runtime_error&) {
            trace.emplace_back(a6, -1.0);
            return {-1.0, 0.0};
        }
    }
};

}  // namespace

STEResult design_ste(const ModelParams& params, const BathSpec& bath, double t_f,
                     const DesignOptions& opts) {
    params.validate();
    bath.validate();
    if (!(t_f > 0.0)) throw std::invalid_argument("design_ste: t_f must be > 0");

    Objective objective{params, bath, t_f,
                        planck_occupation(params.omega0, params.temperature),
                        target_occupation(params), opts, 0, {}};

    double best_a6 = 0.0;
    auto [best_f, best_n] = objective(0.0);

    if (best_f < 1.0 - 1e-14) {
        // Expanding grid scan for a bracket around the maximum.
        double span = opts.initial_span;
        double lo = 0.0, hi = 0.0;
        bool bracketed = false;
        for (int expansion = 0; expansion <= opts.max_expansions && !bracketed; ++expansion) {
            const int n = std::max(5, opts.scan_points);
            std::vector<double> grid(static_cast<std::size_t>(n));
            std::vector<double> val(static_cast<std::size_t>(n));
            int ibest = -1;
            for (int i = 0; i < n; ++i) {
                grid[static_cast<std::size_t>(i)] = -span + 2.0 * span * i / (n - 1);
                auto [f, nf] = objective(grid[static_cast<std::size_t>(i)]);
                val[static_cast<std::size_t>(i)] = f;
                if (ibest < 0 || f > val[static_cast<std::size_t>(ibest)]) ibest = i;
            }
            if (val[static_cast<std::size_t>(ibest)] < 0.0) break;
            if (ibest > 0 && ibest < n - 1) {
                lo = grid[static_cast<std::size_t>(ibest - 1)];
                hi = grid[static_cast<std::size_t>(ibest + 1)];
                if (val[static_cast<std::size_t>(ibest)] > best_f) {
                    best_f = val[static_cast<std::size_t>(ibest)];
                    best_a6 = grid[static_cast<std::size_t>(ibest)];
                }
                bracketed = true;
            } else {
                span *= opts.expansion_factor;
            }
        }
        if (!bracketed) {
            std::string msg = "design_ste: no bracket found for a6 (fidelity monotone over the "
                              "scanned range); scan trace:";
            for (const auto& [a6, f] : objective.trace)
                msg += " (" + std::to_string(a6) + ", " + std::to_string(f) + ")";
            throw std::runtime_error(msg);
        }

        // Golden-section refinement inside [lo, hi].
        const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
        const double f_enter = best_f;
        const double lo0 = lo, hi0 = hi;
        double x1 = hi - invphi * (hi - lo);
        double x2 = lo + invphi * (hi - lo);
        double f1 = objective(x1).first;
        double f2 = objective(x2).first;
        while (hi - lo > opts.a6_tol) {
            if (f1 >= f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - invphi * (hi - lo);
                f1 = objective(x1).first;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + invphi * (hi - lo);
                f2 = objective(x2).first;
            }
            if (std::max(f1, f2) > best_f) {
                best_f = std::max(f1, f2);
                best_a6 = f1 >= f2 ? x1 : x2;
            }
        }
        if (best_f - f_enter <= opts.stall_improvement) {
            // Interval shrank without improving the objective; sweep the
            // original bracket on a fine grid instead.
            for (int i = 0; i <= 200; ++i) {
                const double a6 = lo0 + (hi0 - lo0) * i / 200.0;
                const double f = objective(a6).first;
                if (f > best_f) {
                    best_f = f;
                    best_a6 = a6;
                }
            }
        }
    }

    PolynomialScaling scaling = solve_boundary_coefficients(params, t_f, best_a6);
    MomentState init;
    init.n_occ = objective.n_initial;
    MomentOptions final_moments = opts.moments;
    final_moments.n_samples = std::max(final_moments.n_samples, 64);
    const MomentTrajectory traj = propagate_moments(scaling, bath, params, init, final_moments);

    STEResult result{std::move(scaling),
                     reverse_frequency(solve_boundary_coefficients(params, t_f, best_a6)),
                     0.0, 0.0, 0.0, 0, false, {}};
    result.predicted_final_occupation = traj.back().n_occ;
    result.predicted_fidelity =
        thermal_fidelity(result.predicted_final_occupation, objective.n_target);
    result.a6_opt = best_a6;
    result.optimizer_evaluations = objective.evaluations;
    result.omega_sq_negative = result.profile.has_negative_omega_sq;
    result.trace = std::move(objective.trace);
    return result;
}

FrequencyProfile quench_protocol(const ModelParams& params, double duration) {
    params.validate();
    if (!(duration > 0.0)) throw std::invalid_argument("quench_protocol: duration must be > 0");
    FrequencyProfile profile;
    profile.kind = ProfileKind::quench;
    profile.duration = duration;
    const double wf2 = params.omegaf * params.omegaf;
    profile.omega_sq = [wf2](double) { return wf2; };
    return profile;
}

FrequencyProfile ramp_protocol(const ModelParams& params, double t_f) {
    params.validate();
    if (!(t_f > 0.0)) throw std::invalid_argument("ramp_protocol: t_f must be > 0");
    FrequencyProfile profile;
    profile.kind = ProfileKind::ramp;
    profile.duration = t_f;
    const double w0 = params.omega0;
    const double dw = params.omegaf - params.omega0;
    profile.omega_sq = [w0, dw, t_f](double t) {
        const double s = std::clamp(t / t_f, 0.0, 1.0);
        const double w = w0 + dw * s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
        return w * w;
    };
    return profile;
}

}  // namespace ste
