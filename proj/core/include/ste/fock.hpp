#ifndef STE_FOCK_HPP
#define STE_FOCK_HPP

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ste/master.hpp"
#include "ste/model.hpp"
#include "ste/scaling.hpp"

// Truncated-Fock-space oracle. Everything here is brute force on dense
// matrices in the number basis of the reference-frequency oscillator (or of
// the instantaneous oscillator where stated); it exists to validate the
// closed-form and moment-equation paths, not to be fast.

namespace ste::fock {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct BogoliubovPair {
    cdouble mu;
    cdouble nu;
};

std::pair<Mat, Mat> ladder_matrices(int dim);  // (a, a^dagger)
Mat number_operator(int dim);
Mat position_operator(int dim);  // (a + a^dagger)/sqrt(2), reference units
Mat momentum_operator(int dim);  // i (a^dagger - a)/sqrt(2)

// Smallest truncation with thermal tail below 1e-10 at the given occupation,
// widened by a squeezing margin.
int choose_dim(double nbar_max, double squeeze_margin = 4.0);

Mat thermal_state(double nbar, int dim);
// S(xi) = exp((conj(xi) a^2 - xi a^dagger^2)/2) with xi = r e^{i phi}.
Mat squeeze_operator(double r, double phi, int dim);
Mat squeezed_thermal_state(double nbar, double r, double phi, int dim);

double hermiticity_error(const Mat& m);
double min_eigenvalue(const Mat& m);

// Maps the invariant mode to the instantaneous-oscillator mode:
// a_inst = mu a_I + nu a_I^dagger, |mu|^2 - |nu|^2 = 1.
BogoliubovPair bogoliubov_coefficients(double b, double bdot, double omega_inst, double omega0);

// a_I in the basis of the mode the pair refers to: a_I = conj(mu) a - nu a^dagger.
Mat invariant_mode_annihilation(const BogoliubovPair& bog, int dim);

// I(t) = (b p - m bdot x)^2 / 2m + m omega0^2 (x/b)^2 / 2 in the reference basis.
Mat invariant_matrix(double b, double bdot, const ModelParams& params, int dim);

struct ClosedEvolutionOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    std::vector<double> sample_times;  // must be increasing, start at 0
    double boundary_tolerance = 1e-8;
    double reference_omega = 0.0;  // Fock basis frequency; 0 = omega(0) of the profile
};

struct ClosedEvolutionResult {
    std::vector<double> times;
    std::vector<Mat> states;  // column states (Schroedinger) or densities (von Neumann)
    double max_norm_drift = 0.0;
    double max_boundary_population = 0.0;
};

// Schroedinger propagation of the columns of `initial` under H_S(t) expressed
// in the reference Fock basis.
ClosedEvolutionResult closed_evolution(const FrequencyProfile& profile, const Mat& initial,
                                       const ClosedEvolutionOptions& opts);
// Same Hamiltonian, von Neumann equation for a density matrix.
ClosedEvolutionResult closed_evolution_density(const FrequencyProfile& profile, const Mat& rho0,
                                               const ClosedEvolutionOptions& opts);

struct FockLindbladOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    bool with_lamb_shift = false;
    std::vector<double> sample_times;
    double boundary_tolerance = 1e-8;
};

struct FockLindbladResult {
    std::vector<double> times;
    std::vector<double> n_occ;  // Tr(a^dagger a rho)
    std::vector<Mat> states;
    double max_trace_error = 0.0;
    double min_state_eigenvalue = 0.0;
    double max_boundary_population = 0.0;
};

// Direct propagation of the interaction-picture Lindblad equation with the
// |D(t)|^2-modulated rates; jump operators are the (fixed) invariant-mode
// ladder operators.
FockLindbladResult lindblad_propagate(const Scaling& scaling, const BathSpec& bath,
                                      const ModelParams& params, const Mat& rho0,
                                      const FockLindbladOptions& opts);

double fidelity(const Mat& rho1, const Mat& rho2);  // Uhlmann, Tr(sqrt(sqrt(r2) r1 sqrt(r2)))^2
double entropy(const Mat& rho);                     // von Neumann, natural log

}  // namespace ste::fock

#endif
