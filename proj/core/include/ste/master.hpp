#ifndef STE_MASTER_HPP
#define STE_MASTER_HPP

#include <complex>
#include <utility>
#include <vector>

#include "ste/model.hpp"
#include "ste/scaling.hpp"

namespace ste {

using cdouble = std::complex<double>;

// Per-time diagnostic of the time-dependent master equation.
struct RateSnapshot {
    double time = 0.0;
    double bohr_frequency = 0.0;  // omega0 / b^2
    cdouble d1;                   // b + 1/b + i*bdot/omega0
    cdouble d2;                   // b - 1/b - i*bdot/omega0
    double gamma_plus = 0.0;      // pi J(w~) (1 + n(w~))
    double gamma_minus = 0.0;     // gamma_plus * exp(-w~/T)
    double lamb_shift_plus = 0.0;   // PV integral of J/(w~ - w)
    double lamb_shift_minus = 0.0;  // integral of J/(w~ + w)
};

// Gaussian moment pair evolved by the master equation (interaction picture,
// invariant-mode operators).
struct MomentState {
    double n_occ = 0.0;
    cdouble squeeze_moment{0.0, 0.0};
    double time = 0.0;
};

struct MomentSample {
    double time;
    double n_occ;
    cdouble squeeze_moment;
    double omega_tilde;
    double b;
    double bdot;
    double gamma_plus;
    double gamma_minus;
};

struct MomentTrajectory {
    std::vector<MomentSample> samples;
    const MomentSample& back() const { return samples.back(); }
};

struct TimescaleReport {
    double threshold = 10.0;
    double tau_bath = 0.0;      // 1 / cutoff
    double omega_max = 0.0;     // sup_t |omega(t)|
    double tau_drive = 0.0;     // min_t |D1| / max_i |dD_i/dt|
    double secular_margin = 0.0;  // min_{t > t0} phi(t) / (w~(t) tau_bath)
    bool bath_vs_system_ok = false;  // tau_bath * omega_max <= 1/threshold
    bool drive_ok = false;           // tau_bath / tau_drive <= 1/threshold
    bool secular_ok = false;         // secular_margin >= threshold

    bool all_ok() const { return bath_vs_system_ok && drive_ok && secular_ok; }
};

double bohr_frequency(const Scaling& scaling, double t);

// Bogoliubov coefficients of Eq.-(8)-type driving, D_{1,2} = b +- 1/b +- i*bdot/w0.
std::pair<cdouble, cdouble> d_coefficients(double b, double bdot, double omega0);

// phi(t) = int_0^t omega0 / b^2, adaptive quadrature to abs_tol.
double dynamical_phase(const Scaling& scaling, double t, double abs_tol = 1e-10);

// Emission/absorption rates at the instantaneous Bohr frequency.
std::pair<double, double> decay_rates(double omega_tilde, const BathSpec& bath,
                                      double temperature);

// Closed-form principal-value integrals for the Ohmic-with-cutoff bath:
//   first:  P int_0^L J(w)/(w~ - w) dw
//   second:   int_0^L J(w)/(w~ + w) dw
std::pair<double, double> lamb_shift(double omega_tilde, const BathSpec& bath);

RateSnapshot rate_snapshot(const Scaling& scaling, const BathSpec& bath, double temperature,
                           double t, bool with_lamb_shift = true);

struct MomentOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int n_samples = 2000;  // uniform output intervals; endpoint is exact
};

// Integrates
//   d<n>/dt   = (pi/2) |D|^2 J(w~) (n(w~) - <n>)
//   d<a^2>/dt = -(pi/2) |D|^2 J(w~) <a^2>
MomentTrajectory propagate_moments(const Scaling& scaling, const BathSpec& bath,
                                   const ModelParams& params, const MomentState& initial,
                                   const MomentOptions& opts = {});

struct TimescaleOptions {
    double threshold = 10.0;
    int grid_points = 2001;
};

TimescaleReport validate_timescales(const Scaling& scaling, const FrequencyProfile& profile,
                                    const BathSpec& bath, const TimescaleOptions& opts = {});

}  // namespace ste

#endif
