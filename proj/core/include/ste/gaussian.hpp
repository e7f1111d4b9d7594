#ifndef STE_GAUSSIAN_HPP
#define STE_GAUSSIAN_HPP

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ste/model.hpp"
#include "ste/scaling.hpp"

// Exact benchmark: Gaussian (covariance-matrix) dynamics of the system plus a
// discretized bath under the full quadratic Hamiltonian. Quadratures are
// dimensionless at the fixed reference frequency omega0, ordered
// (X, P, X_1, P_1, ..., X_N, P_N); sigma_ij = <{R_i, R_j}>/2, vacuum = I/2.

namespace ste::gauss {

using Matrix2d = Eigen::Matrix2d;

struct CovarianceState {
    Eigen::MatrixXd matrix;
    double time = 0.0;
};

// Sparse symmetric generator M(t) of H = R^T M R / 2: system block
// diag(omega^2(t)/omega0, omega0), bath blocks omega_n I_2, couplings g_n I_2.
struct QuadraticGenerator {
    double omega0 = 1.0;
    std::function<double(double)> omega_sq;
    std::vector<double> bath_freq;
    std::vector<double> couplings;

    int dim() const { return 2 * static_cast<int>(bath_freq.size()) + 2; }
};

QuadraticGenerator make_generator(const FrequencyProfile& profile, const BathModes& modes,
                                  const ModelParams& params);

Eigen::VectorXd initial_covariance_diagonal(const ModelParams& params, const BathModes& modes);
CovarianceState initial_covariance(const ModelParams& params, const BathModes& modes);

Matrix2d reduce_system(const CovarianceState& sigma);

struct ExactOptions {
    double dt = 1e-3;
    int n_samples = 2000;             // reduced-state samples per run
    bool collect_energy = false;      // track <H> (constant-omega conservation checks)
    std::vector<int> checkpoint_samples;  // sample indices at which to keep full sigma
};

struct ExactTrajectory {
    std::vector<double> times;
    std::vector<Matrix2d> sigma_s;
    std::vector<double> energy;           // filled when collect_energy
    std::vector<CovarianceState> checkpoints;
    double dt_used = 0.0;
    double min_det_sigma_s = 0.0;
    const Matrix2d& final_sigma() const { return sigma_s.back(); }
};

// Trajectory engine: propagates the fundamental solution Phi(t) of
// dR/dt = Omega M(t) R with classic fixed-step RK4 and reads the reduced
// 2x2 block off sigma(t) = Phi sigma_0 Phi^T at the sample times.
ExactTrajectory evolve_exact(const FrequencyProfile& profile, const BathModes& modes,
                             const ModelParams& params, const ExactOptions& opts = {});

struct ExactFinal {
    Matrix2d sigma_s;
    double det_sigma_s = 0.0;
    double dt_used = 0.0;
};

// Final-state engine: integrates the two adjoint rows z(s) = E Phi(T) Phi(s)^-1
// backwards, which costs O(N) per step instead of O(N^2). Agrees with
// evolve_exact to integrator accuracy.
ExactFinal evolve_exact_final(const FrequencyProfile& profile, const BathModes& modes,
                              const ModelParams& params, double dt = 1e-3);

// Reference implementation: dense RK4 directly on sigma. Cross-validates the
// two production engines; use only for small baths.
ExactTrajectory evolve_sigma_reference(const FrequencyProfile& profile, const BathModes& modes,
                                       const ModelParams& params, const ExactOptions& opts = {});

// Closed-form single-mode fidelity and entropy (zero-mean states).
double gaussian_fidelity(const Matrix2d& sigma_a, const Matrix2d& sigma_b);
double gaussian_entropy(const Matrix2d& sigma);

Matrix2d thermal_covariance(double nbar);
Matrix2d squeezed_thermal_covariance(double nbar, double r, double phi);
// Thermal state at omegaf expressed in the omega0 reference quadratures.
Matrix2d target_covariance(const ModelParams& params);
// Covariance of a state thermal in the invariant mode, seen from the mode the
// Bogoliubov pair (mu, nu) refers to.
Matrix2d covariance_from_moments(double n_occ, std::complex<double> mu, std::complex<double> nu);

}  // namespace ste::gauss

#endif
