#include "ste/fock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>
#include <boost/numeric/odeint/external/eigen/eigen.hpp>

namespace boost::numeric::odeint {

// The stock Eigen adapter covers resizing but routes state copies through
// boost.range (rejects 2-D matrices) and reports a complex-valued inf norm.
template <>
struct copy_impl<Eigen::MatrixXcd, Eigen::MatrixXcd> {
    static void copy(const Eigen::MatrixXcd& from, Eigen::MatrixXcd& to) { to = from; }
};

template <>
struct vector_space_norm_inf<Eigen::MatrixXcd> {
    typedef double result_type;
    double operator()(const Eigen::MatrixXcd& m) const { return m.cwiseAbs().maxCoeff(); }
};

}  // namespace boost::numeric::odeint

namespace ste::fock {

namespace {

constexpr cdouble kI{0.0, 1.0};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

void require_density_matrix(const Mat& rho, const char* where) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument(std::string(where) + ": not square");
    if (hermiticity_error(rho) > 1e-9)
        throw std::invalid_argument(std::string(where) + ": not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-10)
        throw std::invalid_argument(std::string(where) + ": trace != 1");
    if (min_eigenvalue(rho) < -1e-8)
        throw std::invalid_argument(std::string(where) + ": negative eigenvalue beyond tolerance");
}

}  // namespace

std::pair<Mat, Mat> ladder_matrices(int dim) {
    if (dim < 2) throw std::invalid_argument("ladder_matrices: dim must be >= 2");
    Mat a = Mat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {a, a.adjoint()};
}

Mat number_operator(int dim) {
    Mat n = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

Mat position_operator(int dim) {
    auto [a, ad] = ladder_matrices(dim);
    return (a + ad) / std::sqrt(2.0);
}

Mat momentum_operator(int dim) {
    auto [a, ad] = ladder_matrices(dim);
    return kI * (ad - a) / std::sqrt(2.0);
}

int choose_dim(double nbar_max, double squeeze_margin) {
    int m = 8;
    if (nbar_max > 0.0) {
        const double x = nbar_max / (1.0 + nbar_max);
        m = static_cast<int>(std::ceil(std::log(1e-10) / std::log(x))) + 1;
    }
    const int raw = static_cast<int>(std::ceil(squeeze_margin * m)) + 16;
    const int dim = ((raw + 15) / 16) * 16;
    return std::clamp(dim, 32, 1024);
}

Mat thermal_state(double nbar, int dim) {
    if (nbar < 0.0) throw std::invalid_argument("thermal_state: nbar must be >= 0");
    Mat rho = Mat::Zero(dim, dim);
    if (nbar == 0.0) {
        rho(0, 0) = 1.0;
        return rho;
    }
    const double x = nbar / (1.0 + nbar);
    double norm = 0.0;
    for (int n = 0; n < dim; ++n) {
        const double p = std::pow(x, n);
        rho(n, n) = p;
        norm += p;
    }
    rho /= norm;
    return rho;
}

Mat squeeze_operator(double r, double phi, int dim) {
    auto [a, ad] = ladder_matrices(dim);
    const cdouble xi = r * std::exp(kI * phi);
    const Mat gen = 0.5 * (std::conj(xi) * (a * a) - xi * (ad * ad));
    // gen is anti-Hermitian; exponentiate through the Hermitian i*gen.
    Eigen::SelfAdjointEigenSolver<Mat> es(kI * gen);
    const auto& lam = es.eigenvalues();
    Mat d = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) d(k, k) = std::exp(-kI * lam(k));
    return es.eigenvectors() * d * es.eigenvectors().adjoint();
}

Mat squeezed_thermal_state(double nbar, double r, double phi, int dim) {
    const Mat s = squeeze_operator(r, phi, dim);
    return s * thermal_state(nbar, dim) * s.adjoint();
}

double hermiticity_error(const Mat& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

BogoliubovPair bogoliubov_coefficients(double b, double bdot, double omega_inst, double omega0) {
    if (!(b > 0.0)) throw std::invalid_argument("bogoliubov_coefficients: b must be > 0");
    if (!(omega_inst > 0.0) || !(omega0 > 0.0))
        throw std::invalid_argument("bogoliubov_coefficients: frequencies must be > 0");
    const cdouble c(bdot / omega0, -1.0 / b);
    const double sq = std::sqrt(omega_inst / omega0);
    const double sqi = std::sqrt(omega0 / omega_inst);
    BogoliubovPair out;
    out.mu = 0.5 * (sq * b + kI * sqi * c);
    out.nu = 0.5 * (sq * b + kI * sqi * std::conj(c));
    return out;
}

Mat invariant_mode_annihilation(const BogoliubovPair& bog, int dim) {
    auto [a, ad] = ladder_matrices(dim);
    return std::conj(bog.mu) * a - bog.nu * ad;
}

Mat invariant_matrix(double b, double bdot, const ModelParams& params, int dim) {
    if (!(b > 0.0)) throw std::invalid_argument("invariant_matrix: b must be > 0");
    const Mat x = position_operator(dim);
    const Mat p = momentum_operator(dim);
    const Mat pi = b * p - bdot * x;  // mass = 1
    const double w0 = params.omega0;
    return 0.5 * (pi * pi) + 0.5 * w0 * w0 / (b * b) * (x * x);
}

namespace {

using odeint_stepper_tag = boost::numeric::odeint::vector_space_algebra;

// H(t) = c1(t) X^2 + c2 P^2 is pentadiagonal in the number basis:
// main diagonal (c1 + c2)(n + 1/2), second off-diagonals (c1 - c2) g_n with
// g_n = sqrt((n+1)(n+2))/2. The banded form keeps the oracle O(dim) per state.
struct BandedOscillator {
    Eigen::VectorXd number_half;  // n + 1/2
    Eigen::VectorXd g;            // sqrt((n+1)(n+2))/2, size dim-2

    explicit BandedOscillator(int dim) : number_half(dim), g(dim - 2) {
        for (int n = 0; n < dim; ++n) number_half[n] = n + 0.5;
        for (int n = 0; n + 2 < dim; ++n)
            g[n] = 0.5 * std::sqrt(static_cast<double>(n + 1) * (n + 2));
    }

    // out = H * psi for every column of psi.
    void apply(double c1, double c2, const Mat& psi, Mat& out) const {
        const auto dim = psi.rows();
        const double cs = c1 + c2, cd = c1 - c2;
        out = (cs * number_half.array()).matrix().asDiagonal() * psi;
        out.topRows(dim - 2).noalias() += cd * (g.asDiagonal() * psi.bottomRows(dim - 2));
        out.bottomRows(dim - 2).noalias() += cd * (g.asDiagonal() * psi.topRows(dim - 2));
    }
};

template <typename Rhs>
ClosedEvolutionResult integrate_closed(const Rhs& rhs, const Mat& initial,
                                       const ClosedEvolutionOptions& opts, bool is_density) {
    namespace odeint = boost::numeric::odeint;
    if (opts.sample_times.empty())
        throw std::invalid_argument("closed_evolution: sample_times must not be empty");

    using stepper_t =
        odeint::runge_kutta_fehlberg78<Mat, double, Mat, double, odeint_stepper_tag>;
    auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, stepper_t());

    ClosedEvolutionResult result;
    const int dim = static_cast<int>(initial.rows());
    Mat state = initial;

    std::vector<double> norms0(static_cast<std::size_t>(state.cols()));
    for (Eigen::Index c = 0; c < state.cols(); ++c) norms0[static_cast<std::size_t>(c)] =
        is_density ? std::abs(state.trace()) : state.col(c).norm();

    auto observer = [&](const Mat& m, double t) {
        result.times.push_back(t);
        result.states.push_back(m);
        double boundary = 0.0;
        if (is_density) {
            boundary = std::abs(m(dim - 1, dim - 1));
            result.max_norm_drift =
                std::max(result.max_norm_drift, std::abs(m.trace().real() - norms0[0]));
        } else {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                boundary = std::max(boundary, std::norm(m(dim - 1, c)));
                result.max_norm_drift = std::max(
                    result.max_norm_drift,
                    std::abs(m.col(c).norm() - norms0[static_cast<std::size_t>(c)]));
            }
        }
        result.max_boundary_population = std::max(result.max_boundary_population, boundary);
        if (boundary > opts.boundary_tolerance)
            throw std::runtime_error(
                "closed_evolution: truncation overflow (boundary population " +
                sci(boundary) + "); increase dim to at least " +
                std::to_string(2 * dim));
    };

    odeint::integrate_times(stepper, rhs, state, opts.sample_times.begin(),
                            opts.sample_times.end(), 1e-4, observer);
    return result;
}

}  // namespace

ClosedEvolutionResult closed_evolution(const FrequencyProfile& profile, const Mat& initial,
                                       const ClosedEvolutionOptions& opts) {
    const int dim = static_cast<int>(initial.rows());
    const BandedOscillator band(dim);
    // H(t) in reference quadratures: (omega^2/omega0) X^2/2 + omega0 P^2/2.
    const double w0 = opts.reference_omega > 0.0 ? opts.reference_omega
                                                 : std::sqrt(profile.omega_sq(0.0));
    if (!(w0 > 0.0))
        throw std::invalid_argument("closed_evolution: profile must start at omega^2 > 0");

    auto rhs = [&band, &profile, w0](const Mat& psi, Mat& dpsi, double t) {
        band.apply(0.5 * profile.omega_sq(t) / w0, 0.5 * w0, psi, dpsi);
        dpsi *= -kI;
    };
    return integrate_closed(rhs, initial, opts, /*is_density=*/false);
}

ClosedEvolutionResult closed_evolution_density(const FrequencyProfile& profile, const Mat& rho0,
                                               const ClosedEvolutionOptions& opts) {
    const int dim = static_cast<int>(rho0.rows());
    const BandedOscillator band(dim);
    const double w0 = opts.reference_omega > 0.0 ? opts.reference_omega
                                                 : std::sqrt(profile.omega_sq(0.0));
    if (!(w0 > 0.0))
        throw std::invalid_argument("closed_evolution_density: profile must start at omega^2 > 0");

    Mat hrho(dim, dim);
    auto rhs = [&](const Mat& rho, Mat& drho, double t) {
        const double c1 = 0.5 * profile.omega_sq(t) / w0, c2 = 0.5 * w0;
        band.apply(c1, c2, rho, hrho);
        drho = -kI * hrho;
        band.apply(c1, c2, rho.adjoint(), hrho);  // rho H = (H rho^dagger)^dagger
        drho += kI * hrho.adjoint();
    };
    return integrate_closed(rhs, rho0, opts, /*is_density=*/true);
}

FockLindbladResult lindblad_propagate(const Scaling& scaling, const BathSpec& bath,
                                      const ModelParams& params, const Mat& rho0,
                                      const FockLindbladOptions& opts) {
    namespace odeint = boost::numeric::odeint;
    params.validate();
    bath.validate();
    require_density_matrix(rho0, "lindblad_propagate");
    if (opts.sample_times.empty())
        throw std::invalid_argument("lindblad_propagate: sample_times must not be empty");

    const int dim = static_cast<int>(rho0.rows());
    const double w0 = scaling.omega0();
    const double temperature = params.temperature;

    // Jump operators are bidiagonal, so every Lindblad term is an index shift
    // plus an entrywise weight: (a rho a^dag)[n,m]  = s_n s_m rho[n+1,m+1],
    // (a^dag rho a)[n,m] = s_{n-1} s_{m-1} rho[n-1,m-1], anticommutators and
    // the (diagonal) Lamb shift are entrywise.
    Eigen::VectorXcd s(dim - 1);
    for (int n = 0; n + 1 < dim; ++n) s[n] = std::sqrt(static_cast<double>(n + 1));
    Eigen::ArrayXXd half_nm(dim, dim), phase_nm(dim, dim);
    for (int n = 0; n < dim; ++n)
        for (int m = 0; m < dim; ++m) {
            half_nm(n, m) = 0.5 * (n + m);
            phase_nm(n, m) = static_cast<double>(n - m);
        }

    auto rhs = [&](const Mat& rho, Mat& drho, double t) {
        double b, bd, bdd;
        scaling.eval(t, b, bd, bdd);
        const double wt = w0 / (b * b);
        const double bp = b + 1.0 / b;
        const double dsq = bp * bp + (bd / w0) * (bd / w0);
        auto [gp, gm] = decay_rates(wt, bath, temperature);
        const double cp = 0.5 * dsq * gp;
        const double cm = 0.5 * dsq * gm;

        drho.array() = (-cp * half_nm - cm * (half_nm + 1.0)).cast<cdouble>() * rho.array();
        drho.topLeftCorner(dim - 1, dim - 1).noalias() +=
            cp * (s.asDiagonal() * rho.bottomRightCorner(dim - 1, dim - 1) * s.asDiagonal());
        drho.bottomRightCorner(dim - 1, dim - 1).noalias() +=
            cm * (s.asDiagonal() * rho.topLeftCorner(dim - 1, dim - 1) * s.asDiagonal());
        if (opts.with_lamb_shift) {
            auto [sp, sm] = lamb_shift(wt, bath);
            const double bm = b - 1.0 / b;
            const double d2sq = bm * bm + (bd / w0) * (bd / w0);
            const double lambda = 0.25 * (dsq * sp - d2sq * sm);
            drho.array() += (-kI * lambda) * (phase_nm.cast<cdouble>() * rho.array());
        }
    };

    using stepper_t = odeint::runge_kutta_dopri5<Mat, double, Mat, double, odeint_stepper_tag>;
    auto stepper = odeint::make_controlled(opts.abs_tol, opts.rel_tol, stepper_t());

    FockLindbladResult result;
    result.min_state_eigenvalue = 0.0;
    Mat state = rho0;
    auto observer = [&](const Mat& rho, double t) {
        result.times.push_back(t);
        double occ = 0.0;
        for (int n = 1; n < dim; ++n) occ += n * rho(n, n).real();
        result.n_occ.push_back(occ);
        result.states.push_back(rho);
        result.max_trace_error =
            std::max(result.max_trace_error, std::abs(rho.trace().real() - 1.0));
        result.min_state_eigenvalue = std::min(result.min_state_eigenvalue, min_eigenvalue(rho));
        const double boundary = std::abs(rho(dim - 1, dim - 1));
        result.max_boundary_population = std::max(result.max_boundary_population, boundary);
        if (boundary > opts.boundary_tolerance)
            throw std::runtime_error(
                "lindblad_propagate: truncation overflow (boundary population " +
                sci(boundary) + "); increase dim to at least " +
                std::to_string(2 * dim));
    };

    odeint::integrate_times(stepper, rhs, state, opts.sample_times.begin(),
                            opts.sample_times.end(), 1e-3, observer);
    return result;
}

double fidelity(const Mat& rho1, const Mat& rho2) {
    require_density_matrix(rho1, "fidelity");
    require_density_matrix(rho2, "fidelity");
    if (rho1.rows() != rho2.rows())
        throw std::invalid_argument("fidelity: dimension mismatch");

    Eigen::SelfAdjointEigenSolver<Mat> es2(0.5 * (rho2 + rho2.adjoint()));
    Eigen::VectorXd lam2 = es2.eigenvalues().cwiseMax(0.0);
    const Mat sqrt2 =
        es2.eigenvectors() * lam2.cwiseSqrt().asDiagonal() * es2.eigenvectors().adjoint();

    const Mat m = sqrt2 * rho1 * sqrt2;
    Eigen::SelfAdjointEigenSolver<Mat> esm(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
    double root_sum = 0.0;
    for (int k = 0; k < esm.eigenvalues().size(); ++k)
        root_sum += std::sqrt(std::max(0.0, esm.eigenvalues()(k)));
    return std::min(1.0, root_sum * root_sum);
}

double entropy(const Mat& rho) {
    require_density_matrix(rho, "entropy");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (int k = 0; k < es.eigenvalues().size(); ++k) {
        const double lam = es.eigenvalues()(k);
        if (lam > 1e-14) s -= lam * std::log(lam);
    }
    return s;
}

}  // namespace ste::fock
