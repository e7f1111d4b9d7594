#include "ste/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

#include <Eigen/Dense>

namespace ste {

namespace {

// Positivity of b is checked on a dense sample; crossing zero means the
// invariant is no longer defined.
constexpr double kPositivityFloor = 1e-12;
constexpr int kScanPoints = 4001;

}  // namespace

PolynomialScaling::PolynomialScaling(const std::array<double, 7>& coefficients, double t_f,
                                     double omega0)
    : coeffs_(coefficients), t_f_(t_f), omega0_(omega0) {
    if (!(t_f > 0.0)) throw std::invalid_argument("PolynomialScaling: t_f must be > 0");
    if (!(omega0 > 0.0)) throw std::invalid_argument("PolynomialScaling: omega0 must be > 0");
}

void PolynomialScaling::eval(double t, double& b, double& bdot, double& bddot) const {
    const double s = t / t_f_;
    // Horner for b, b' and b'' in the scaled variable s.
    double p = 0.0, dp = 0.0, ddp = 0.0;
    for (int n = 6; n >= 0; --n) {
        ddp = ddp * s + dp * 2.0;
        dp = dp * s + p;
        p = p * s + coeffs_[static_cast<std::size_t>(n)];
    }
    b = p;
    bdot = dp / t_f_;
    bddot = ddp / (t_f_ * t_f_);
}

double PolynomialScaling::boundary_residual(double b_final) const {
    double b0, bd0, bdd0, bf, bdf, bddf;
    eval(0.0, b0, bd0, bdd0);
    eval(t_f_, bf, bdf, bddf);
    double r = std::abs(b0 - 1.0);
    r = std::max(r, std::abs(bd0));
    r = std::max(r, std::abs(bdd0));
    r = std::max(r, std::abs(bf - b_final));
    r = std::max(r, std::abs(bdf));
    r = std::max(r, std::abs(bddf));
    return r;
}

TabulatedScaling::TabulatedScaling(std::vector<double> b, std::vector<double> bdot,
                                   std::function<double(double)> omega_sq, double t_f,
                                   double omega0)
    : b_(std::move(b)), bdot_(std::move(bdot)), omega_sq_(std::move(omega_sq)), t_f_(t_f),
      omega0_(omega0) {
    if (b_.size() < 2 || b_.size() != bdot_.size())
        throw std::invalid_argument("TabulatedScaling: need matching grids with >= 2 nodes");
    h_ = t_f_ / static_cast<double>(b_.size() - 1);
}

void TabulatedScaling::eval(double t, double& b, double& bdot, double& bddot) const {
    const double tc = std::clamp(t, 0.0, t_f_);
    const auto n = b_.size() - 1;
    auto i = static_cast<std::size_t>(tc / h_);
    if (i >= n) i = n - 1;
    const double s = (tc - static_cast<double>(i) * h_) / h_;

    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);

    // Node accelerations from the Ermakov identity give the Hermite slopes
    // for bdot.
    const double t0 = static_cast<double>(i) * h_;
    const double t1 = t0 + h_;
    const double bdd0 = omega0_ * omega0_ / (b_[i] * b_[i] * b_[i]) - omega_sq_(t0) * b_[i];
    const double bdd1 =
        omega0_ * omega0_ / (b_[i + 1] * b_[i + 1] * b_[i + 1]) - omega_sq_(t1) * b_[i + 1];

    b = h00 * b_[i] + h10 * h_ * bdot_[i] + h01 * b_[i + 1] + h11 * h_ * bdot_[i + 1];
    bdot = h00 * bdot_[i] + h10 * h_ * bdd0 + h01 * bdot_[i + 1] + h11 * h_ * bdd1;
    bddot = omega0_ * omega0_ / (b * b * b) - omega_sq_(tc) * b;
}

const char* to_string(ProfileKind kind) {
    switch (kind) {
        case ProfileKind::ste: return "ste";
        case ProfileKind::quench: return "quench";
        case ProfileKind::ramp: return "ramp";
        case ProfileKind::custom: return "custom";
        case ProfileKind::constant: return "constant";
    }
    return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
    if (name == "ste") return ProfileKind::ste;
    if (name == "quench") return ProfileKind::quench;
    if (name == "ramp") return ProfileKind::ramp;
    if (name == "custom") return ProfileKind::custom;
    if (name == "constant") return ProfileKind::constant;
    throw std::invalid_argument("unknown protocol kind: " + name);
}

double FrequencyProfile::omega_at(double t) const {
    const double w2 = omega_sq(t);
    return w2 >= 0.0 ? std::sqrt(w2) : std::numeric_limits<double>::quiet_NaN();
}

PolynomialScaling solve_boundary_coefficients(const ModelParams& params, double t_f, double a6) {
    params.validate();
    if (!(t_f > 0.0)) throw std::invalid_argument("solve_boundary_coefficients: t_f must be > 0");

    const double b_final = std::sqrt(params.omega0 / params.omegaf);

    // Conditions at t = 0 fix a0 = 1, a1 = a2 = 0; the remaining three
    // endpoint conditions are linear in (a3, a4, a5).
    Eigen::Matrix3d m;
    m << 1, 1, 1,
         3, 4, 5,
         6, 12, 20;
    Eigen::Vector3d rhs(b_final - 1.0 - a6, -6.0 * a6, -30.0 * a6);
    const Eigen::Vector3d sol = m.fullPivLu().solve(rhs);

    PolynomialScaling scaling({1.0, 0.0, 0.0, sol[0], sol[1], sol[2], a6}, t_f, params.omega0);

    for (int i = 0; i < kScanPoints; ++i) {
        const double t = t_f * static_cast<double>(i) / (kScanPoints - 1);
        if (scaling.b(t) <= kPositivityFloor)
            throw std::runtime_error("solve_boundary_coefficients: b(t) <= 0 inside [0, t_f]");
    }
    return scaling;
}

namespace {

FrequencyProfile reverse_frequency_impl(std::shared_ptr<const Scaling> scaling) {
    const double t_f = scaling->duration();
    const double w0 = scaling->omega0();

    FrequencyProfile profile;
    profile.kind = ProfileKind::ste;
    profile.duration = t_f;
    profile.omega_sq = [scaling, w0](double t) {
        double b, bd, bdd;
        scaling->eval(t, b, bd, bdd);
        return w0 * w0 / (b * b * b * b) - bdd / b;
    };

    for (int i = 0; i < kScanPoints; ++i) {
        const double t = t_f * static_cast<double>(i) / (kScanPoints - 1);
        if (scaling->b(t) <= kPositivityFloor)
            throw std::runtime_error("reverse_frequency: b(t) <= 0 inside [0, t_f]");
        if (profile.omega_sq(t) < 0.0) profile.has_negative_omega_sq = true;
    }
    return profile;
}

}  // namespace

FrequencyProfile reverse_frequency(std::shared_ptr<const Scaling> scaling) {
    return reverse_frequency_impl(std::move(scaling));
}

FrequencyProfile reverse_frequency(const PolynomialScaling& scaling) {
    return reverse_frequency_impl(std::make_shared<PolynomialScaling>(scaling));
}

TabulatedScaling forward_ermakov(const FrequencyProfile& profile, double b0, double bdot0,
                                 double omega0, const ErmakovOptions& opts) {
    if (!(b0 > 0.0)) throw std::invalid_argument("forward_ermakov: b0 must be > 0");
    const double t_f = profile.duration;
    if (!(t_f > 0.0)) throw std::invalid_argument("forward_ermakov: profile duration must be > 0");

    int n_grid = opts.grid_points;
    if (n_grid <= 0) {
        double w_scale = 1.0;
        for (int i = 0; i <= 1000; ++i)
            w_scale = std::max(w_scale, std::sqrt(std::abs(profile.omega_sq(t_f * i / 1000.0))));
        n_grid = static_cast<int>(std::clamp(64.0 * t_f * w_scale, 4096.0, 65536.0));
    }

    using state_type = std::array<double, 2>;
    namespace odeint = boost::numeric::odeint;

    const double w0sq = omega0 * omega0;
    auto rhs = [&profile, w0sq](const state_type& x, state_type& dxdt, double t) {
        dxdt[0] = x[1];
        dxdt[1] = w0sq / (x[0] * x[0] * x[0]) - profile.omega_sq(t) * x[0];
    };

    auto stepper = odeint::make_dense_output(opts.abs_tol, opts.rel_tol,
                                             odeint::runge_kutta_dopri5<state_type>());
    state_type x{b0, bdot0};
    stepper.initialize(x, 0.0, std::min(1e-4, t_f / 16.0));

    std::vector<double> b(static_cast<std::size_t>(n_grid) + 1);
    std::vector<double> bdot(static_cast<std::size_t>(n_grid) + 1);
    b[0] = b0;
    bdot[0] = bdot0;

    const double h = t_f / n_grid;
    std::size_t next = 1;
    while (next <= static_cast<std::size_t>(n_grid)) {
        if (stepper.current_state()[0] <= kPositivityFloor)
            throw std::runtime_error("forward_ermakov: b(t) reached 0, trap inversion beyond the "
                                     "representable regime");
        stepper.do_step(rhs);
        while (next <= static_cast<std::size_t>(n_grid) &&
               stepper.current_time() >= static_cast<double>(next) * h) {
            state_type xi;
            stepper.calc_state(static_cast<double>(next) * h, xi);
            if (xi[0] <= kPositivityFloor)
                throw std::runtime_error("forward_ermakov: b(t) reached 0, trap inversion beyond "
                                         "the representable regime");
            b[next] = xi[0];
            bdot[next] = xi[1];
            ++next;
        }
    }

    return TabulatedScaling(std::move(b), std::move(bdot), profile.omega_sq, t_f, omega0);
}

FrequencyProfile custom_profile(const std::vector<double>& times,
                                const std::vector<double>& omega_sq_values) {
    const std::size_t n = times.size();
    if (n < 2 || omega_sq_values.size() != n)
        throw std::invalid_argument("custom_profile: need >= 2 samples with matching sizes");
    for (std::size_t i = 1; i < n; ++i)
        if (!(times[i] > times[i - 1]))
            throw std::invalid_argument("custom_profile: times must be strictly increasing");
    if (times.front() != 0.0)
        throw std::invalid_argument("custom_profile: first sample must be at t = 0");

    // Natural cubic spline: tridiagonal solve for the second derivatives.
    auto t = std::make_shared<std::vector<double>>(times);
    auto y = std::make_shared<std::vector<double>>(omega_sq_values);
    auto m = std::make_shared<std::vector<double>>(n, 0.0);
    if (n > 2) {
        std::vector<double> diag(n - 2), rhs(n - 2), upper(n - 2, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = times[i] - times[i - 1];
            const double h1 = times[i + 1] - times[i];
            diag[i - 1] = 2.0 * (h0 + h1);
            upper[i - 1] = h1;
            rhs[i - 1] = 6.0 * ((omega_sq_values[i + 1] - omega_sq_values[i]) / h1 -
                                (omega_sq_values[i] - omega_sq_values[i - 1]) / h0);
        }
        // Thomas algorithm; sub-diagonal equals h0 which is upper[i-1] of the
        // previous row.
        for (std::size_t i = 1; i < n - 2; ++i) {
            const double h0 = times[i + 1] - times[i];
            const double w = h0 / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for (std::size_t i = n - 2; i-- > 0;) {
            const double next_m = (i + 1 < n - 2) ? (*m)[i + 2] : 0.0;
            (*m)[i + 1] = (rhs[i] - upper[i] * next_m) / diag[i];
        }
    }

    FrequencyProfile profile;
    profile.kind = ProfileKind::custom;
    profile.duration = times.back();
    profile.omega_sq = [t, y, m](double tq) {
        const auto& ts = *t;
        const double tc = std::clamp(tq, ts.front(), ts.back());
        auto it = std::upper_bound(ts.begin(), ts.end(), tc);
        std::size_t i = static_cast<std::size_t>(std::distance(ts.begin(), it));
        i = std::clamp<std::size_t>(i, 1, ts.size() - 1) - 1;
        const double h = ts[i + 1] - ts[i];
        const double a = (ts[i + 1] - tc) / h;
        const double bb = (tc - ts[i]) / h;
        return a * (*y)[i] + bb * (*y)[i + 1] +
               ((a * a * a - a) * (*m)[i] + (bb * bb * bb - bb) * (*m)[i + 1]) * h * h / 6.0;
    };
    for (double v : omega_sq_values)
        if (v < 0.0) profile.has_negative_omega_sq = true;
    return profile;
}

}  // namespace ste
