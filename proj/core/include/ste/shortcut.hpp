#ifndef STE_SHORTCUT_HPP
#define STE_SHORTCUT_HPP

#include <utility>
#include <vector>

#include "ste/master.hpp"
#include "ste/model.hpp"
#include "ste/scaling.hpp"

namespace ste {

struct STEResult {
    PolynomialScaling scaling;
    FrequencyProfile profile;
    double predicted_final_occupation = 0.0;
    double predicted_fidelity = 0.0;
    double a6_opt = 0.0;
    int optimizer_evaluations = 0;
    bool omega_sq_negative = false;
    std::vector<std::pair<double, double>> trace;  // (a6, fidelity) evaluations in order
};

struct DesignOptions {
    double initial_span = 10.0;
    double expansion_factor = 4.0;
    int max_expansions = 5;
    int scan_points = 41;
    double a6_tol = 1e-6;
    double stall_improvement = 1e-12;
    MomentOptions moments{1e-9, 1e-12, 8};
};

// Equilibrium occupation at the final frequency.
double target_occupation(const ModelParams& params);

// Closed-form fidelity of two single-mode thermal states with the same mode.
double thermal_fidelity(double n1, double n2);

// Finds a6 maximizing the final-state fidelity predicted by the moment
// equations: expanding grid scan for a bracket, then golden-section
// refinement (200-point grid fallback if the refinement stalls).
STEResult design_ste(const ModelParams& params, const BathSpec& bath, double t_f,
                     const DesignOptions& opts = {});

// omega(t > 0) = omegaf; omega(0) = omega0 only as a limit, the step sits at
// t = 0+ and integrators see omegaf everywhere.
FrequencyProfile quench_protocol(const ModelParams& params, double duration);

// omega_r(t) = omega0 + dw (10 s^3 - 15 s^4 + 6 s^5), s = t/t_f.
FrequencyProfile ramp_protocol(const ModelParams& params, double t_f);

}  // namespace ste

#endif
