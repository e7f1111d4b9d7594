#include "ste/observables.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ste/fock.hpp"

namespace ste {

double epsilon_from_occupation(double n, bool* capped) {
    if (capped) *capped = false;
    if (!(n > 0.0)) {
        if (capped) *capped = true;
        return kEpsilonCap;
    }
    return std::log1p(1.0 / n);
}

double effective_temperature(double omega, double epsilon) {
    if (!(epsilon > 0.0))
        throw std::domain_error("effective_temperature: epsilon must be > 0");
    return omega / epsilon;
}

namespace {

double diagonal_entropy(double b, double bdot, double omega_inst, double epsilon, double omega0,
                        int dim) {
    const auto bog = fock::bogoliubov_coefficients(b, bdot, omega_inst, omega0);
    const fock::Mat a_inv = fock::invariant_mode_annihilation(bog, dim);
    const fock::Mat n_inv = a_inv.adjoint() * a_inv;
    Eigen::SelfAdjointEigenSolver<fock::Mat> es(n_inv);
    const auto& v = es.eigenvectors();  // columns ~ invariant eigenstates, ascending

    // Thermal weights in the invariant basis.
    const double z = -std::expm1(-epsilon);  // 1 - e^{-eps}
    Eigen::VectorXd q = Eigen::VectorXd::Zero(dim);
    for (int m = 0; m < dim; ++m) {
        const double p = z * std::exp(-epsilon * m);
        if (p < 1e-18) break;
        for (int k = 0; k < dim; ++k) q[k] += p * std::norm(v(k, m));
    }
    double s = 0.0;
    for (int k = 0; k < dim; ++k)
        if (q[k] > 1e-18) s -= q[k] * std::log(q[k]);
    return s;
}

}  // namespace

double coherence(double b, double bdot, double omega_inst, double epsilon,
                 const CoherenceOptions& opts) {
    if (!(omega_inst > 0.0))
        throw std::domain_error("coherence: omega_inst must be > 0 (energy basis undefined)");
    if (!(epsilon > 0.0)) throw std::domain_error("coherence: epsilon must be > 0");

    const double nbar = 1.0 / std::expm1(epsilon);
    const double s_rho =
        nbar > 0.0 ? (nbar + 1.0) * std::log(nbar + 1.0) - nbar * std::log(nbar) : 0.0;

    int dim = opts.dim > 0 ? opts.dim : fock::choose_dim(nbar);
    double s_diag = diagonal_entropy(b, bdot, omega_inst, epsilon, opts.omega0, dim);
    if (opts.dim == 0) {
        while (true) {
            if (2 * dim > opts.max_dim)
                throw std::runtime_error("coherence: truncation not converged at dim " +
                                         std::to_string(dim));
            const double refined =
                diagonal_entropy(b, bdot, omega_inst, epsilon, opts.omega0, 2 * dim);
            if (std::abs(refined - s_diag) <= opts.convergence) {
                s_diag = refined;
                break;
            }
            dim *= 2;
            s_diag = refined;
        }
    }
    return s_diag - s_rho;
}

ObservableTrace build_observable_trace(const MomentTrajectory& trajectory,
                                       const FrequencyProfile& profile,
                                       const CoherenceOptions& opts) {
    ObservableTrace trace;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& s : trajectory.samples) {
        trace.times.push_back(s.time);
        trace.n_occ.push_back(s.n_occ);

        bool capped = false;
        const double eps = epsilon_from_occupation(s.n_occ, &capped);
        trace.any_capped_epsilon |= capped;
        trace.epsilon.push_back(eps);

        const double w2 = profile.omega_sq(s.time);
        if (w2 < 0.0) trace.any_negative_omega_sq = true;
        const double w = w2 >= 0.0 ? std::sqrt(w2) : nan;
        trace.omega.push_back(w);
        trace.t_eff.push_back(w2 > 0.0 && !capped ? effective_temperature(w, eps) : nan);

        if (w2 > 0.0 && !capped) {
            CoherenceOptions copts = opts;
            trace.coherence.push_back(coherence(s.b, s.bdot, w, eps, copts));
        } else {
            trace.coherence.push_back(nan);
        }
    }
    return trace;
}

}  // namespace ste
