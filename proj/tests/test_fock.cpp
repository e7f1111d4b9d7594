#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ste/fock.hpp"
#include "ste/io.hpp"
#include "ste/shortcut.hpp"

using namespace ste;
using fock::Mat;

namespace {

const BathSpec paper_bath{0.002, 100.0, 600};

ModelParams compression_params() {
    ModelParams p;
    p.omegaf = 3.0;
    return p;
}

PolynomialScaling constant_scaling(double value, double t_f) {
    return PolynomialScaling({value, 0, 0, 0, 0, 0, 0}, t_f, 1.0);
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
    return out;
}

}  // namespace

TEST_CASE("ladder matrices") {
    auto [a, ad] = fock::ladder_matrices(2);
    CHECK(a(0, 1) == cdouble(1.0, 0.0));
    CHECK(a(0, 0) == cdouble(0.0, 0.0));
    CHECK(a(1, 0) == cdouble(0.0, 0.0));
    CHECK(a(1, 1) == cdouble(0.0, 0.0));

    const int dim = 12;
    auto [b, bd] = fock::ladder_matrices(dim);
    const Mat comm = b * bd - bd * b;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            const cdouble expected =
                (i == j) ? (i == dim - 1 ? cdouble(1.0 - dim, 0.0) : cdouble(1.0, 0.0))
                         : cdouble(0.0, 0.0);
            CHECK(std::abs(comm(i, j) - expected) <= 1e-12);
        }

    const Mat num = bd * b;
    for (int i = 0; i < dim; ++i) CHECK(std::abs(num(i, i) - cdouble(i, 0.0)) <= 1e-12);
    CHECK_THROWS_AS(fock::ladder_matrices(1), std::invalid_argument);
}

TEST_CASE("thermal state and dimension choice") {
    const Mat rho = fock::thermal_state(0.5, 48);
    CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-14);
    const double x = 0.5 / 1.5;
    for (int n = 1; n < 8; ++n)
        CHECK(std::abs(rho(n, n).real() / rho(n - 1, n - 1).real() - x) <= 1e-12);

    CHECK(fock::choose_dim(0.0) >= 32);
    CHECK(fock::choose_dim(3.0) > fock::choose_dim(0.1));
}

TEST_CASE("squeeze operator conventions") {
    const int dim = 64;
    const double r = 0.4;
    const Mat s = fock::squeeze_operator(r, 0.0, dim);
    CHECK((s * s.adjoint() - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-10);

    const Mat rho = fock::squeezed_thermal_state(0.0, r, 0.0, dim);
    const Mat x = fock::position_operator(dim);
    const Mat p = fock::momentum_operator(dim);
    const double var_x = (x * x * rho).trace().real();
    const double var_p = (p * p * rho).trace().real();
    CHECK(var_x == doctest::Approx(0.5 * std::exp(-2 * r)).epsilon(1e-8));
    CHECK(var_p == doctest::Approx(0.5 * std::exp(2 * r)).epsilon(1e-8));
}

TEST_CASE("Bogoliubov coefficients") {
    const auto id = fock::bogoliubov_coefficients(1.0, 0.0, 1.0, 1.0);
    CHECK(std::abs(id.mu - cdouble(1, 0)) <= 1e-14);
    CHECK(std::abs(id.nu) <= 1e-14);

    // invariant realigns with the Hamiltonian at the end of the protocol
    const auto fin = fock::bogoliubov_coefficients(1.0 / std::sqrt(3.0), 0.0, 3.0, 1.0);
    CHECK(std::abs(fin.mu - cdouble(1, 0)) <= 1e-12);
    CHECK(std::abs(fin.nu) <= 1e-12);

    const auto mid = fock::bogoliubov_coefficients(1.0, 0.0, 3.0, 1.0);
    CHECK(mid.mu.real() == doctest::Approx(1.1547005383792515).epsilon(1e-14));
    CHECK(mid.nu.real() == doctest::Approx(0.57735026918962576).epsilon(1e-14));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ub(0.2, 3.0), ud(-3.0, 3.0), uw(0.2, 8.0);
    for (int i = 0; i < 500; ++i) {
        const auto bog = fock::bogoliubov_coefficients(ub(rng), ud(rng), uw(rng), 1.0);
        CHECK(std::abs(std::norm(bog.mu) - std::norm(bog.nu) - 1.0) <= 1e-10);
    }
}

TEST_CASE("invariant matrix spectrum") {
    const ModelParams params;
    const int dim = 96;

    // b = 1, bdot = 0: invariant equals the initial Hamiltonian
    const Mat i0 = fock::invariant_matrix(1.0, 0.0, params, dim);
    Eigen::SelfAdjointEigenSolver<Mat> es(i0);
    for (int n = 0; n < dim / 2; ++n)
        CHECK(es.eigenvalues()(n) == doctest::Approx(n + 0.5).epsilon(1e-8));

    // the spectrum is n + 1/2 for any (b, bdot); stronger squeezing needs a
    // larger truncation for the same accuracy
    for (auto [b, bd] : {std::pair{2.0, 0.0}, std::pair{0.7, 0.15}, std::pair{0.45, -0.3}}) {
        const Mat it = fock::invariant_matrix(b, bd, params, 160);
        Eigen::SelfAdjointEigenSolver<Mat> e2(it);
        for (int n = 0; n < 10; ++n)
            CHECK(e2.eigenvalues()(n) == doctest::Approx(n + 0.5).epsilon(1e-7));
    }
}

TEST_CASE("closed evolution: stationary eigenstates at constant frequency") {
    const int dim = 32;
    FrequencyProfile flat;
    flat.duration = 3.0;
    flat.omega_sq = [](double) { return 1.0; };

    Mat init = Mat::Zero(dim, 4);
    for (int c = 0; c < 4; ++c) init(c, c) = 1.0;
    fock::ClosedEvolutionOptions opts;
    opts.sample_times = linspace(0.0, 3.0, 7);
    const auto res = fock::closed_evolution(flat, init, opts);
    CHECK(res.max_norm_drift <= 1e-9);
    for (const auto& state : res.states)
        for (int c = 0; c < 4; ++c) CHECK(std::abs(std::abs(state(c, c)) - 1.0) <= 1e-9);
}

TEST_CASE("closed evolution: invariant conservation along a driven protocol") {
    const ModelParams params = compression_params();
    const PolynomialScaling scaling = solve_boundary_coefficients(params, 2.5, 1.0);
    const FrequencyProfile profile = reverse_frequency(scaling);
    const int dim = 96;
    const int n_cols = 10;

    Mat init = Mat::Zero(dim, n_cols);
    for (int c = 0; c < n_cols; ++c) init(c, c) = 1.0;
    fock::ClosedEvolutionOptions opts;
    opts.sample_times = linspace(0.0, 2.5, 6);
    opts.rel_tol = 1e-12;
    opts.abs_tol = 1e-14;
    const auto res = fock::closed_evolution(profile, init, opts);

    // thermal weights over the propagated columns
    const double nbar = 1.0 / std::expm1(1.0);
    std::vector<double> w(static_cast<std::size_t>(n_cols));
    for (int c = 0; c < n_cols; ++c)
        w[static_cast<std::size_t>(c)] = (1.0 - nbar / (1 + nbar)) * std::pow(nbar / (1 + nbar), c);

    double i_ref = 0.0;
    for (std::size_t k = 0; k < res.times.size(); ++k) {
        double b, bd, bdd;
        scaling.eval(res.times[k], b, bd, bdd);
        const Mat inv = fock::invariant_matrix(b, bd, params, dim);
        double i_mean = 0.0;
        for (int c = 0; c < n_cols; ++c)
            i_mean += w[static_cast<std::size_t>(c)] *
                      (res.states[k].col(c).adjoint() * inv * res.states[k].col(c))(0, 0).real();
        if (k == 0) i_ref = i_mean;
        CHECK(std::abs(i_mean - i_ref) <= 1e-6 * std::abs(i_ref));

        // populations in the instantaneous invariant eigenbasis stay put; the
        // pair with omega_inst = omega0 expresses a_I in the reference basis
        const auto bog_ref = fock::bogoliubov_coefficients(b, bd, 1.0, 1.0);
        const Mat a_inv = fock::invariant_mode_annihilation(bog_ref, dim);
        Eigen::SelfAdjointEigenSolver<Mat> es(a_inv.adjoint() * a_inv);
        for (int c = 0; c < n_cols; ++c) {
            const double pop = std::norm((es.eigenvectors().col(c).adjoint() *
                                          res.states[k].col(c))(0, 0));
            CHECK(pop >= 1.0 - 1e-6);
        }
    }
}

TEST_CASE("Lindblad propagation: Gibbs state is stationary") {
    const int dim = 48;
    const PolynomialScaling one = constant_scaling(1.0, 20.0);
    const double nbar = 1.0 / std::expm1(1.0);
    fock::FockLindbladOptions opts;
    opts.sample_times = linspace(0.0, 20.0, 5);
    const auto res = fock::lindblad_propagate(one, paper_bath, ModelParams{},
                                              fock::thermal_state(nbar, dim), opts);
    CHECK(res.max_trace_error <= 1e-9);
    CHECK(res.min_state_eigenvalue >= -1e-8);
    for (double n : res.n_occ) CHECK(std::abs(n - nbar) <= 1e-8);
}

TEST_CASE("Lindblad propagation matches the moment equations") {
    const ModelParams params = compression_params();
    const PolynomialScaling scaling = solve_boundary_coefficients(params, 4.0, 8.0);
    const int dim = 48;
    const double n0 = 1.0 / std::expm1(1.0);

    fock::FockLindbladOptions fopts;
    fopts.sample_times = linspace(0.0, 4.0, 41);
    const auto fres = fock::lindblad_propagate(scaling, paper_bath, params,
                                               fock::thermal_state(n0, dim), fopts);

    MomentOptions mopts;
    mopts.n_samples = 40;
    MomentState init;
    init.n_occ = n0;
    const MomentTrajectory mres = propagate_moments(scaling, paper_bath, params, init, mopts);

    REQUIRE(mres.samples.size() == fres.times.size());
    for (std::size_t k = 0; k < fres.times.size(); ++k)
        CHECK(std::abs(fres.n_occ[k] - mres.samples[k].n_occ) <= 1e-6);
}

TEST_CASE("Lamb shift is population-neutral") {
    const ModelParams params = compression_params();
    const PolynomialScaling scaling = solve_boundary_coefficients(params, 3.0, 4.0);
    const int dim = 40;
    const Mat rho0 = fock::thermal_state(0.4, dim);

    fock::FockLindbladOptions opts;
    opts.sample_times = linspace(0.0, 3.0, 4);
    const auto off = fock::lindblad_propagate(scaling, paper_bath, params, rho0, opts);
    opts.with_lamb_shift = true;
    const auto on = fock::lindblad_propagate(scaling, paper_bath, params, rho0, opts);

    for (std::size_t k = 0; k < off.times.size(); ++k)
        for (int n = 0; n < dim; ++n)
            CHECK(std::abs(off.states[k](n, n).real() - on.states[k](n, n).real()) <= 1e-10);
}

TEST_CASE("Uhlmann fidelity") {
    const int dim = 64;
    const Mat th1 = fock::thermal_state(1.0, dim);
    CHECK(fock::fidelity(th1, th1) == doctest::Approx(1.0).epsilon(1e-10));

    const Mat vac = fock::thermal_state(0.0, dim);
    CHECK(fock::fidelity(th1, vac) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(fock::fidelity(vac, th1) == doctest::Approx(0.5).epsilon(1e-8));

    // frozen thermal-pair value, cross-checked against the closed form
    const double n1 = 0.58197670686932642, n2 = 0.052395696491255952;
    const double f = fock::fidelity(fock::thermal_state(n1, dim), fock::thermal_state(n2, dim));
    CHECK(f == doctest::Approx(0.80338806675851815).epsilon(1e-8));
    CHECK(f == doctest::Approx(thermal_fidelity(n1, n2)).epsilon(1e-8));

    // vacuum vs squeezed vacuum: F = 1/cosh(r)
    for (double r : {0.3, 0.8}) {
        const Mat sq = fock::squeezed_thermal_state(0.0, r, 0.0, dim);
        CHECK(fock::fidelity(vac, sq) == doctest::Approx(1.0 / std::cosh(r)).epsilon(1e-8));
    }

    // truncation convergence
    const double f2 =
        fock::fidelity(fock::thermal_state(n1, 2 * dim), fock::thermal_state(n2, 2 * dim));
    CHECK(std::abs(f - f2) <= 1e-8);
}

TEST_CASE("von Neumann entropy") {
    const int dim = 64;
    CHECK(fock::entropy(fock::thermal_state(0.0, dim)) <= 1e-10);

    const double nbar = 0.58197670686932642;
    CHECK(fock::entropy(fock::thermal_state(nbar, dim)) ==
          doctest::Approx(1.0406518522564083).epsilon(1e-9));

    // unitary invariance
    CHECK(fock::entropy(fock::squeezed_thermal_state(nbar, 0.5, 0.3, 96)) ==
          doctest::Approx(1.0406518522564083).epsilon(1e-7));

    Mat mixed = Mat::Identity(8, 8) / 8.0;
    Mat padded = Mat::Zero(16, 16);
    padded.topLeftCorner(8, 8) = mixed;
    CHECK(fock::entropy(padded) == doctest::Approx(std::log(8.0)).epsilon(1e-10));
}

TEST_CASE("binary dump round trip") {
    const Mat rho = fock::squeezed_thermal_state(0.3, 0.2, 1.1, 24);
    const std::string path = "/tmp/ste_test_fock_dump.bin";
    io::dump_complex_matrix(path, rho);
    const Mat back = io::load_complex_matrix(path);
    CHECK((rho - back).cwiseAbs().maxCoeff() == 0.0);
}
