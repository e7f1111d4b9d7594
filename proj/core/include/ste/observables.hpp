#ifndef STE_OBSERVABLES_HPP
#define STE_OBSERVABLES_HPP

#include <vector>

#include "ste/master.hpp"
#include "ste/scaling.hpp"

// Derived observables of the driven state: effective inverse-temperature
// parameter epsilon(t), effective temperature, and the relative-entropy
// coherence in the instantaneous energy eigenbasis. All entropies in nats.

namespace ste {

// ln(1 + 1/n); n <= 0 maps to the capped sentinel (flagged through `capped`).
inline constexpr double kEpsilonCap = 746.0;
double epsilon_from_occupation(double n, bool* capped = nullptr);

// T_eff = omega / epsilon; throws for epsilon <= 0.
double effective_temperature(double omega, double epsilon);

struct CoherenceOptions {
    int dim = 0;             // 0 = automatic with convergence loop
    double convergence = 1e-8;
    int max_dim = 1024;
    double omega0 = 1.0;
};

// C = S(rho_diag) - S(rho) for a state thermal in the invariant mode, with
// populations taken in the instantaneous-oscillator basis. Truncation is
// doubled until S(rho_diag) is converged.
double coherence(double b, double bdot, double omega_inst, double epsilon,
                 const CoherenceOptions& opts = {});

struct ObservableTrace {
    std::vector<double> times;
    std::vector<double> omega;      // NaN where omega^2 < 0
    std::vector<double> n_occ;
    std::vector<double> epsilon;
    std::vector<double> t_eff;      // NaN where undefined
    std::vector<double> coherence;  // NaN where omega^2 <= 0
    bool any_capped_epsilon = false;
    bool any_negative_omega_sq = false;
};

ObservableTrace build_observable_trace(const MomentTrajectory& trajectory,
                                       const FrequencyProfile& profile,
                                       const CoherenceOptions& opts = {});

}  // namespace ste

#endif
