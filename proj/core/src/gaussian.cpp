#include "ste/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ste::gauss {

namespace {

// Reduced-state physicality slack: beyond this the integration step is
// considered broken, not merely noisy.
constexpr double kPhysicalityHardTol = 1e-6;

double profile_scale(const FrequencyProfile& profile) {
    double w = 1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double t = profile.duration * i / 1000.0;
        w = std::max(w, std::sqrt(std::abs(profile.omega_sq(t))));
    }
    return w;
}

// dst = Omega M(t) src for row-major dense src; the generator has O(N)
// nonzeros so this is O(N^2) per call. Column blocks keep the hot rows of
// dst in cache and make the arithmetic order independent of the thread count.
void apply_generator(const QuadraticGenerator& gen, double w2r, const double* src, double* dst,
                     int dim) {
    const int nm = static_cast<int>(gen.bath_freq.size());
    const double w0 = gen.omega0;
    constexpr int kBlock = 256;
    const int nblocks = (dim + kBlock - 1) / kBlock;

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int blk = 0; blk < nblocks; ++blk) {
        const int j0 = blk * kBlock;
        const int j1 = std::min(dim, j0 + kBlock);
        const double* s0 = src;
        const double* s1 = src + dim;
        double* d0 = dst;
        double* d1 = dst + dim;
        for (int j = j0; j < j1; ++j) {
            d0[j] = w0 * s1[j];
            d1[j] = -w2r * s0[j];
        }
        for (int n = 0; n < nm; ++n) {
            const double wn = gen.bath_freq[static_cast<std::size_t>(n)];
            const double gn = gen.couplings[static_cast<std::size_t>(n)];
            const double* sx = src + static_cast<std::ptrdiff_t>(2 + 2 * n) * dim;
            const double* sp = src + static_cast<std::ptrdiff_t>(3 + 2 * n) * dim;
            double* dx = dst + static_cast<std::ptrdiff_t>(2 + 2 * n) * dim;
            double* dp = dst + static_cast<std::ptrdiff_t>(3 + 2 * n) * dim;
            for (int j = j0; j < j1; ++j) {
                dx[j] = wn * sp[j] + gn * s1[j];
                dp[j] = -wn * sx[j] - gn * s0[j];
                d0[j] += gn * sp[j];
                d1[j] -= gn * sx[j];
            }
        }
    }
}

// Adjoint row update: dst = -(z K(t)) for a single row vector z.
void apply_generator_adjoint(const QuadraticGenerator& gen, double w2r, const double* z,
                             double* dst) {
    const int nm = static_cast<int>(gen.bath_freq.size());
    double acc0 = 0.0, acc1 = 0.0;
    for (int n = 0; n < nm; ++n) {
        const double wn = gen.bath_freq[static_cast<std::size_t>(n)];
        const double gn = gen.couplings[static_cast<std::size_t>(n)];
        const double zx = z[2 + 2 * n];
        const double zp = z[3 + 2 * n];
        dst[2 + 2 * n] = gn * z[1] + wn * zp;
        dst[3 + 2 * n] = -gn * z[0] - wn * zx;
        acc0 += gn * zp;
        acc1 += gn * zx;
    }
    dst[0] = w2r * z[1] + acc0;
    dst[1] = -gen.omega0 * z[0] - acc1;
}

struct StepGrid {
    long n_steps;
    double dt;
    std::vector<long> sample_steps;  // strictly increasing, first 0, last n_steps
};

StepGrid make_step_grid(double duration, double dt_request, int n_samples) {
    StepGrid grid;
    grid.n_steps = std::max<long>(1, std::lround(duration / dt_request));
    grid.dt = duration / static_cast<double>(grid.n_steps);
    const int ns = std::max(1, n_samples);
    grid.sample_steps.reserve(static_cast<std::size_t>(ns) + 1);
    long prev = -1;
    for (int i = 0; i <= ns; ++i) {
        long s = std::lround(static_cast<double>(i) * static_cast<double>(grid.n_steps) / ns);
        s = std::clamp<long>(s, 0, grid.n_steps);
        if (s > prev) {
            grid.sample_steps.push_back(s);
            prev = s;
        }
    }
    if (grid.sample_steps.back() != grid.n_steps) grid.sample_steps.push_back(grid.n_steps);
    return grid;
}

Matrix2d reduced_from_rows(const double* r0, const double* r1, const Eigen::VectorXd& s0,
                           int dim) {
    double sxx = 0.0, sxp = 0.0, spp = 0.0;
    for (int k = 0; k < dim; ++k) {
        const double w = s0[k];
        sxx += r0[k] * w * r0[k];
        sxp += r0[k] * w * r1[k];
        spp += r1[k] * w * r1[k];
    }
    Matrix2d m;
    m << sxx, sxp, sxp, spp;
    return m;
}

void check_reduced_physicality(const Matrix2d& sigma_s, double t) {
    const double det = sigma_s.determinant();
    if (det < 0.25 - kPhysicalityHardTol)
        throw std::runtime_error("evolve_exact: reduced state unphysical (det sigma_S = " +
                                 std::to_string(det) + " at t = " + std::to_string(t) +
                                 "); reduce dt");
}

double total_energy(const QuadraticGenerator& gen, double w2r, const double* phi,
                    const Eigen::VectorXd& s0, int dim) {
    // <H> = Tr(M sigma)/2 with sigma = Phi diag(s0) Phi^T, summed over the
    // O(N) nonzeros of M.
    const int nm = static_cast<int>(gen.bath_freq.size());
    auto sigma_entry = [&](int i, int j) {
        const double* ri = phi + static_cast<std::ptrdiff_t>(i) * dim;
        const double* rj = phi + static_cast<std::ptrdiff_t>(j) * dim;
        double acc = 0.0;
        for (int k = 0; k < dim; ++k) acc += ri[k] * s0[k] * rj[k];
        return acc;
    };
    double e = w2r * sigma_entry(0, 0) + gen.omega0 * sigma_entry(1, 1);
    for (int n = 0; n < nm; ++n) {
        const double wn = gen.bath_freq[static_cast<std::size_t>(n)];
        const double gn = gen.couplings[static_cast<std::size_t>(n)];
        e += wn * (sigma_entry(2 + 2 * n, 2 + 2 * n) + sigma_entry(3 + 2 * n, 3 + 2 * n));
        e += 2.0 * gn * (sigma_entry(0, 2 + 2 * n) + sigma_entry(1, 3 + 2 * n));
    }
    return 0.5 * e;
}

void validate_dt(const FrequencyProfile& profile, const BathModes& modes, double dt) {
    const double w_fast = std::max(profile_scale(profile),
                                   modes.frequencies.empty() ? 1.0 : modes.frequencies.back());
    if (dt > 0.1000001 / w_fast)
        throw std::invalid_argument("exact benchmark: dt = " + std::to_string(dt) +
                                    " too coarse for the fastest scale " + std::to_string(w_fast) +
                                    "; need dt <= 0.1/omega_fast");
}

}  // namespace

QuadraticGenerator make_generator(const FrequencyProfile& profile, const BathModes& modes,
                                  const ModelParams& params) {
    params.validate();
    QuadraticGenerator gen;
    gen.omega0 = params.omega0;
    gen.omega_sq = profile.omega_sq;
    gen.bath_freq = modes.frequencies;
    gen.couplings = modes.couplings;
    return gen;
}

Eigen::VectorXd initial_covariance_diagonal(const ModelParams& params, const BathModes& modes) {
    params.validate();
    const int dim = 2 * static_cast<int>(modes.frequencies.size()) + 2;
    Eigen::VectorXd diag(dim);
    const double sys = planck_occupation(params.omega0, params.temperature) + 0.5;
    diag[0] = diag[1] = sys;
    for (std::size_t n = 0; n < modes.frequencies.size(); ++n) {
        const double occ = planck_occupation(modes.frequencies[n], params.temperature) + 0.5;
        diag[2 + 2 * static_cast<int>(n)] = occ;
        diag[3 + 2 * static_cast<int>(n)] = occ;
    }
    return diag;
}

CovarianceState initial_covariance(const ModelParams& params, const BathModes& modes) {
    CovarianceState state;
    state.matrix = initial_covariance_diagonal(params, modes).asDiagonal();
    state.time = 0.0;
    return state;
}

Matrix2d reduce_system(const CovarianceState& sigma) {
    return sigma.matrix.topLeftCorner<2, 2>();
}

ExactTrajectory evolve_exact(const FrequencyProfile& profile, const BathModes& modes,
                             const ModelParams& params, const ExactOptions& opts) {
    check_recurrence_guard(modes, profile.duration);
    validate_dt(profile, modes, opts.dt);
    const QuadraticGenerator gen = make_generator(profile, modes, params);
    const int dim = gen.dim();
    const Eigen::VectorXd s0 = initial_covariance_diagonal(params, modes);
    const StepGrid grid = make_step_grid(profile.duration, opts.dt, opts.n_samples);
    const double h = grid.dt;

    const std::size_t nn = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
    std::vector<double> phi(nn, 0.0), y(nn), k(nn), acc(nn);
    for (int i = 0; i < dim; ++i) phi[static_cast<std::size_t>(i) * dim + i] = 1.0;

    ExactTrajectory traj;
    traj.dt_used = h;
    traj.min_det_sigma_s = std::numeric_limits<double>::infinity();

    std::size_t next_sample = 0;
    std::size_t next_checkpoint = 0;
    auto maybe_sample = [&](long step) {
        if (next_sample >= grid.sample_steps.size() || grid.sample_steps[next_sample] != step)
            return;
        const double t = static_cast<double>(step) * h;
        const Matrix2d sig = reduced_from_rows(phi.data(), phi.data() + dim, s0, dim);
        check_reduced_physicality(sig, t);
        traj.times.push_back(t);
        traj.sigma_s.push_back(sig);
        traj.min_det_sigma_s = std::min(traj.min_det_sigma_s, sig.determinant());
        if (opts.collect_energy)
            traj.energy.push_back(
                total_energy(gen, gen.omega_sq(t) / gen.omega0, phi.data(), s0, dim));
        if (next_checkpoint < opts.checkpoint_samples.size() &&
            opts.checkpoint_samples[next_checkpoint] ==
                static_cast<int>(next_sample)) {
            Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                           Eigen::RowMajor>>
                p(phi.data(), dim, dim);
            CovarianceState full;
            full.matrix = p * s0.asDiagonal() * p.transpose();
            full.time = t;
            traj.checkpoints.push_back(std::move(full));
            ++next_checkpoint;
        }
        ++next_sample;
    };

    maybe_sample(0);
    const auto axpy_stage = [&](double ca, double cy) {
        // acc += ca * k; y = phi + cy * k, fused over the flat buffers.
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long j = 0; j < static_cast<long>(nn); ++j) {
            acc[static_cast<std::size_t>(j)] += ca * k[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(j)] =
                phi[static_cast<std::size_t>(j)] + cy * k[static_cast<std::size_t>(j)];
        }
    };

    for (long step = 0; step < grid.n_steps; ++step) {
        const double t = static_cast<double>(step) * h;
        const double w2r_0 = gen.omega_sq(t) / gen.omega0;
        const double w2r_m = gen.omega_sq(t + 0.5 * h) / gen.omega0;
        const double w2r_1 = gen.omega_sq(t + h) / gen.omega0;

        apply_generator(gen, w2r_0, phi.data(), k.data(), dim);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long j = 0; j < static_cast<long>(nn); ++j) {
            acc[static_cast<std::size_t>(j)] = k[static_cast<std::size_t>(j)];
            y[static_cast<std::size_t>(j)] = phi[static_cast<std::size_t>(j)] +
                                             0.5 * h * k[static_cast<std::size_t>(j)];
        }
        apply_generator(gen, w2r_m, y.data(), k.data(), dim);
        axpy_stage(2.0, 0.5 * h);
        apply_generator(gen, w2r_m, y.data(), k.data(), dim);
        axpy_stage(2.0, h);
        apply_generator(gen, w2r_1, y.data(), k.data(), dim);
        const double h6 = h / 6.0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (long j = 0; j < static_cast<long>(nn); ++j)
            phi[static_cast<std::size_t>(j)] +=
                h6 * (acc[static_cast<std::size_t>(j)] + k[static_cast<std::size_t>(j)]);

        maybe_sample(step + 1);
    }
    return traj;
}

ExactFinal evolve_exact_final(const FrequencyProfile& profile, const BathModes& modes,
                              const ModelParams& params, double dt) {
    check_recurrence_guard(modes, profile.duration);
    validate_dt(profile, modes, dt);
    const QuadraticGenerator gen = make_generator(profile, modes, params);
    const int dim = gen.dim();
    const Eigen::VectorXd s0 = initial_covariance_diagonal(params, modes);
    const StepGrid grid = make_step_grid(profile.duration, dt, 1);
    const double h = grid.dt;

    // z rows start as the system unit vectors at s = T and pick up
    // E Phi(T) once integrated down to s = 0.
    std::vector<std::vector<double>> z(2, std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    z[0][0] = 1.0;
    z[1][1] = 1.0;
    std::vector<double> k1(static_cast<std::size_t>(dim)), k2(k1), k3(k1), k4(k1), tmp(k1);

    const double hs = -h;
    for (long step = 0; step < grid.n_steps; ++step) {
        const double s = profile.duration - static_cast<double>(step) * h;
        const double w2r_0 = gen.omega_sq(s) / gen.omega0;
        const double w2r_m = gen.omega_sq(s + 0.5 * hs) / gen.omega0;
        const double w2r_1 = gen.omega_sq(s + hs) / gen.omega0;
        for (auto& row : z) {
            double* zr = row.data();
            apply_generator_adjoint(gen, w2r_0, zr, k1.data());
            for (int j = 0; j < dim; ++j) tmp[static_cast<std::size_t>(j)] = zr[j] + 0.5 * hs * k1[static_cast<std::size_t>(j)];
            apply_generator_adjoint(gen, w2r_m, tmp.data(), k2.data());
            for (int j = 0; j < dim; ++j) tmp[static_cast<std::size_t>(j)] = zr[j] + 0.5 * hs * k2[static_cast<std::size_t>(j)];
            apply_generator_adjoint(gen, w2r_m, tmp.data(), k3.data());
            for (int j = 0; j < dim; ++j) tmp[static_cast<std::size_t>(j)] = zr[j] + hs * k3[static_cast<std::size_t>(j)];
            apply_generator_adjoint(gen, w2r_1, tmp.data(), k4.data());
            for (int j = 0; j < dim; ++j)
                zr[j] += hs / 6.0 *
                         (k1[static_cast<std::size_t>(j)] + 2.0 * k2[static_cast<std::size_t>(j)] +
                          2.0 * k3[static_cast<std::size_t>(j)] + k4[static_cast<std::size_t>(j)]);
        }
    }

    ExactFinal out;
    out.sigma_s = reduced_from_rows(z[0].data(), z[1].data(), s0, dim);
    out.det_sigma_s = out.sigma_s.determinant();
    out.dt_used = h;
    check_reduced_physicality(out.sigma_s, profile.duration);
    return out;
}

ExactTrajectory evolve_sigma_reference(const FrequencyProfile& profile, const BathModes& modes,
                                       const ModelParams& params, const ExactOptions& opts) {
    check_recurrence_guard(modes, profile.duration);
    validate_dt(profile, modes, opts.dt);
    const QuadraticGenerator gen = make_generator(profile, modes, params);
    const int dim = gen.dim();
    const std::size_t nn = static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim);
    const Eigen::VectorXd s0 = initial_covariance_diagonal(params, modes);
    const StepGrid grid = make_step_grid(profile.duration, opts.dt, opts.n_samples);
    const double h = grid.dt;

    std::vector<double> sig(nn, 0.0), y(nn), a(nn), k(nn), acc(nn);
    for (int i = 0; i < dim; ++i) sig[static_cast<std::size_t>(i) * dim + i] = s0[i];

    auto rhs = [&](double w2r, const std::vector<double>& state, std::vector<double>& out) {
        apply_generator(gen, w2r, state.data(), a.data(), dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                out[static_cast<std::size_t>(i) * dim + j] =
                    a[static_cast<std::size_t>(i) * dim + j] +
                    a[static_cast<std::size_t>(j) * dim + i];
    };

    ExactTrajectory traj;
    traj.dt_used = h;
    traj.min_det_sigma_s = std::numeric_limits<double>::infinity();
    std::size_t next_sample = 0;
    auto maybe_sample = [&](long step) {
        if (next_sample >= grid.sample_steps.size() || grid.sample_steps[next_sample] != step)
            return;
        const double t = static_cast<double>(step) * h;
        Matrix2d red;
        red << sig[0], sig[1], sig[static_cast<std::size_t>(dim)],
            sig[static_cast<std::size_t>(dim) + 1];
        check_reduced_physicality(red, t);
        traj.times.push_back(t);
        traj.sigma_s.push_back(red);
        traj.min_det_sigma_s = std::min(traj.min_det_sigma_s, red.determinant());
        if (opts.collect_energy) {
            double e = gen.omega_sq(t) / gen.omega0 * sig[0] +
                       gen.omega0 * sig[static_cast<std::size_t>(dim) + 1];
            for (int n = 0; n < static_cast<int>(gen.bath_freq.size()); ++n) {
                const std::size_t ix = static_cast<std::size_t>(2 + 2 * n);
                const std::size_t ip = ix + 1;
                e += gen.bath_freq[static_cast<std::size_t>(n)] *
                     (sig[ix * dim + ix] + sig[ip * dim + ip]);
                e += 2.0 * gen.couplings[static_cast<std::size_t>(n)] *
                     (sig[0 * dim + ix] + sig[static_cast<std::size_t>(dim) + ip]);
            }
            traj.energy.push_back(0.5 * e);
        }
        ++next_sample;
    };

    maybe_sample(0);
    for (long step = 0; step < grid.n_steps; ++step) {
        const double t = static_cast<double>(step) * h;
        const double w2r_0 = gen.omega_sq(t) / gen.omega0;
        const double w2r_m = gen.omega_sq(t + 0.5 * h) / gen.omega0;
        const double w2r_1 = gen.omega_sq(t + h) / gen.omega0;

        rhs(w2r_0, sig, k);
        for (std::size_t j = 0; j < nn; ++j) {
            acc[j] = k[j];
            y[j] = sig[j] + 0.5 * h * k[j];
        }
        rhs(w2r_m, y, k);
        for (std::size_t j = 0; j < nn; ++j) {
            acc[j] += 2.0 * k[j];
            y[j] = sig[j] + 0.5 * h * k[j];
        }
        rhs(w2r_m, y, k);
        for (std::size_t j = 0; j < nn; ++j) {
            acc[j] += 2.0 * k[j];
            y[j] = sig[j] + h * k[j];
        }
        rhs(w2r_1, y, k);
        for (std::size_t j = 0; j < nn; ++j) sig[j] += h / 6.0 * (acc[j] + k[j]);
        maybe_sample(step + 1);
    }

    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        sig.data(), dim, dim);
    CovarianceState full;
    full.matrix = m;
    full.time = profile.duration;
    traj.checkpoints.push_back(std::move(full));
    return traj;
}

double gaussian_fidelity(const Matrix2d& sigma_a, const Matrix2d& sigma_b) {
    double da = sigma_a.determinant();
    double db = sigma_b.determinant();
    if (da < 0.25 - kPhysicalityHardTol || db < 0.25 - kPhysicalityHardTol)
        throw std::invalid_argument("gaussian_fidelity: unphysical covariance (det < 1/4)");
    da = std::max(da, 0.25);
    db = std::max(db, 0.25);
    const double delta = (sigma_a + sigma_b).determinant();
    const double lambda = (4.0 * da - 1.0) * (4.0 * db - 1.0);
    const double f = 2.0 / (std::sqrt(4.0 * delta + lambda) - std::sqrt(lambda));
    return std::clamp(f, 0.0, 1.0);
}

double gaussian_entropy(const Matrix2d& sigma) {
    const double det = sigma.determinant();
    if (det < 0.25 - 1e-9)
        throw std::invalid_argument("gaussian_entropy: unphysical covariance (det < 1/4)");
    const double nu = std::sqrt(std::max(det, 0.25));
    if (nu <= 0.5) return 0.0;
    return (nu + 0.5) * std::log(nu + 0.5) - (nu - 0.5) * std::log(nu - 0.5);
}

Matrix2d thermal_covariance(double nbar) {
    if (nbar < 0.0) throw std::invalid_argument("thermal_covariance: nbar must be >= 0");
    return (nbar + 0.5) * Matrix2d::Identity();
}

Matrix2d squeezed_thermal_covariance(double nbar, double r, double phi) {
    if (nbar < 0.0) throw std::invalid_argument("squeezed_thermal_covariance: nbar must be >= 0");
    Matrix2d m;
    const double c = std::cosh(2.0 * r), s = std::sinh(2.0 * r);
    m << c - s * std::cos(phi), -s * std::sin(phi), -s * std::sin(phi), c + s * std::cos(phi);
    return (nbar + 0.5) * m;
}

Matrix2d target_covariance(const ModelParams& params) {
    params.validate();
    const double occ = planck_occupation(params.omegaf, params.temperature) + 0.5;
    Matrix2d m = Matrix2d::Zero();
    m(0, 0) = params.omega0 / params.omegaf * occ;
    m(1, 1) = params.omegaf / params.omega0 * occ;
    return m;
}

Matrix2d covariance_from_moments(double n_occ, std::complex<double> mu, std::complex<double> nu) {
    const double nt = std::norm(mu) * n_occ + std::norm(nu) * (n_occ + 1.0);
    const std::complex<double> a2 = mu * nu * (2.0 * n_occ + 1.0);
    Matrix2d m;
    m << 0.5 + nt + a2.real(), a2.imag(), a2.imag(), 0.5 + nt - a2.real();
    return m;
}

}  // namespace ste::gauss
