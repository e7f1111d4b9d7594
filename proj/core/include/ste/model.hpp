#ifndef STE_MODEL_HPP
#define STE_MODEL_HPP

#include <vector>

// Units convention: hbar = m = k_B = 1 and frequencies are measured in units
// of the initial trap frequency omega0. Times are in 1/omega0, temperatures
// in hbar*omega0/k_B.

namespace ste {

struct ModelParams {
    double omega0 = 1.0;       // initial trap frequency
    double omegaf = 1.0;       // final trap frequency
    double temperature = 1.0;  // bath temperature
    double hbar = 1.0;
    double mass = 1.0;
    double kb = 1.0;

    // Throws std::invalid_argument on violated invariants
    // (positivity, and hbar = mass = kb = 1 exactly).
    void validate() const;
};

// Ohmic bath with an abrupt cutoff, J(w) = gamma * w for w < cutoff.
struct BathSpec {
    double gamma = 0.002;   // Ohmic prefactor
    double cutoff = 100.0;  // abrupt cutoff Lambda
    int n_modes = 600;      // modes used by the discretized (exact) bath

    void validate() const;
};

// Midpoint discretization of the Ohmic bath: w_n = (n - 1/2) dw, dw = cutoff/N,
// g_n = sqrt(J(w_n) dw).
struct BathModes {
    std::vector<double> frequencies;
    std::vector<double> couplings;
    double delta_omega = 0.0;

    // Finite baths re-cohere after 2*pi/dw; the exact benchmark is only
    // trusted up to a safety fraction of that.
    double recurrence_time() const;
    double max_duration() const;
};

// Fraction of the recurrence time up to which exact-benchmark runs are allowed.
inline constexpr double kRecurrenceSafety = 0.8;

double spectral_density(double omega, const BathSpec& bath);
double planck_occupation(double omega, double temperature);
BathModes discretize_bath(const BathSpec& bath);

// Throws std::invalid_argument if duration exceeds the recurrence guard.
void check_recurrence_guard(const BathModes& modes, double duration);

}  // namespace ste

#endif
