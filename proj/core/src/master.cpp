#include "ste/master.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace ste {

namespace {

constexpr double kPi = std::numbers::pi;

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

double bohr_frequency(const Scaling& scaling, double t) {
    const double b = scaling.b(t);
    if (!(b > 0.0)) throw std::domain_error("bohr_frequency: b(t) must be > 0");
    return scaling.omega0() / (b * b);
}

std::pair<cdouble, cdouble> d_coefficients(double b, double bdot, double omega0) {
    if (!(b > 0.0)) throw std::domain_error("d_coefficients: b must be > 0");
    const cdouble d1(b + 1.0 / b, bdot / omega0);
    const cdouble d2(b - 1.0 / b, -bdot / omega0);
    return {d1, d2};
}

double dynamical_phase(const Scaling& scaling, double t, double abs_tol) {
    if (t < 0.0 || t > scaling.duration() * (1.0 + 1e-12))
        throw std::domain_error("dynamical_phase: t outside [0, t_f]");
    const double w0 = scaling.omega0();
    auto integrand = [&scaling, w0](double tau) {
        const double b = scaling.b(tau);
        return w0 / (b * b);
    };
    return integrate(integrand, 0.0, t, abs_tol);
}

std::pair<double, double> decay_rates(double omega_tilde, const BathSpec& bath,
                                      double temperature) {
    if (!(omega_tilde > 0.0)) throw std::domain_error("decay_rates: omega_tilde must be > 0");
    const double j = spectral_density(omega_tilde, bath);
    if (j == 0.0) return {0.0, 0.0};
    const double gp = kPi * j * (1.0 + planck_occupation(omega_tilde, temperature));
    return {gp, gp * std::exp(-omega_tilde / temperature)};
}

std::pair<double, double> lamb_shift(double omega_tilde, const BathSpec& bath) {
    if (!(omega_tilde > 0.0)) throw std::domain_error("lamb_shift: omega_tilde must be > 0");
    const double L = bath.cutoff;
    if (omega_tilde == L)
        throw std::domain_error("lamb_shift: pole sits on the cutoff boundary");
    // Antiderivatives of gamma*w/(w~ -+ w) on [0, L]; the log singularity of the
    // first integral cancels in the principal value.
    const double plus =
        bath.gamma * (-L - omega_tilde * std::log(std::abs(omega_tilde - L) / omega_tilde));
    const double minus = bath.gamma * (L - omega_tilde * std::log((omega_tilde + L) / omega_tilde));
    return {plus, minus};
}

RateSnapshot rate_snapshot(const Scaling& scaling, const BathSpec& bath, double temperature,
                           double t, bool with_lamb_shift) {
    double b, bd, bdd;
    scaling.eval(t, b, bd, bdd);
    RateSnapshot snap;
    snap.time = t;
    snap.bohr_frequency = scaling.omega0() / (b * b);
    std::tie(snap.d1, snap.d2) = d_coefficients(b, bd, scaling.omega0());
    std::tie(snap.gamma_plus, snap.gamma_minus) = decay_rates(snap.bohr_frequency, bath, temperature);
    if (with_lamb_shift)
        std::tie(snap.lamb_shift_plus, snap.lamb_shift_minus) = lamb_shift(snap.bohr_frequency, bath);
    return snap;
}

MomentTrajectory propagate_moments(const Scaling& scaling, const BathSpec& bath,
                                   const ModelParams& params, const MomentState& initial,
                                   const MomentOptions& opts) {
    params.validate();
    bath.validate();
    if (initial.n_occ < 0.0)
        throw std::invalid_argument("propagate_moments: initial occupation must be >= 0");

    const double t_f = scaling.duration();
    const double w0 = scaling.omega0();
    const double temperature = params.temperature;

    using state_type = std::array<double, 3>;  // <n>, Re<a^2>, Im<a^2>
    namespace odeint = boost::numeric::odeint;

    auto rhs = [&](const state_type& x, state_type& dxdt, double t) {
        double b, bd, bdd;
        scaling.eval(t, b, bd, bdd);
        const double wt = w0 / (b * b);
        const double j = spectral_density(wt, bath);
        const double bp = b + 1.0 / b;
        const double dsq = bp * bp + (bd / w0) * (bd / w0);  // |D|^2
        const double rate = 0.5 * kPi * dsq * j;
        const double n_eq = j > 0.0 ? planck_occupation(wt, temperature) : 0.0;
        dxdt[0] = rate * (n_eq - x[0]);
        dxdt[1] = -rate * x[1];
        dxdt[2] = -rate * x[2];
    };

    auto stepper = odeint::make_dense_output(opts.abs_tol, opts.rel_tol,
                                             odeint::runge_kutta_dopri5<state_type>());
    state_type x{initial.n_occ, initial.squeeze_moment.real(), initial.squeeze_moment.imag()};
    stepper.initialize(x, 0.0, std::min(1e-3, t_f / 16.0));

    MomentTrajectory traj;
    traj.samples.reserve(static_cast<std::size_t>(opts.n_samples) + 1);

    auto emit = [&](double t, const state_type& xi) {
        double b, bd, bdd;
        scaling.eval(t, b, bd, bdd);
        MomentSample s;
        s.time = t;
        s.n_occ = xi[0];
        s.squeeze_moment = cdouble(xi[1], xi[2]);
        s.omega_tilde = w0 / (b * b);
        s.b = b;
        s.bdot = bd;
        std::tie(s.gamma_plus, s.gamma_minus) = decay_rates(s.omega_tilde, bath, temperature);
        traj.samples.push_back(s);
    };

    emit(0.0, x);
    const double h = t_f / opts.n_samples;
    int next = 1;
    while (next <= opts.n_samples) {
        stepper.do_step(rhs);
        while (next <= opts.n_samples &&
               stepper.current_time() >= std::min(next * h, t_f)) {
            const double ts = std::min(next * h, t_f);
            state_type xi;
            stepper.calc_state(ts, xi);
            emit(ts, xi);
            ++next;
        }
    }
    // Land the endpoint exactly on t_f regardless of grid rounding.
    if (traj.samples.back().time != t_f) {
        state_type xi;
        stepper.calc_state(t_f, xi);
        emit(t_f, xi);
    }
    return traj;
}

TimescaleReport validate_timescales(const Scaling& scaling, const FrequencyProfile& profile,
                                    const BathSpec& bath, const TimescaleOptions& opts) {
    bath.validate();
    TimescaleReport rep;
    rep.threshold = opts.threshold;
    rep.tau_bath = 1.0 / bath.cutoff;

    const double t_f = scaling.duration();
    const double w0 = scaling.omega0();
    const int n = std::max(opts.grid_points, 3);

    double omega_max = 0.0;
    double tau_drive = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double t = t_f * static_cast<double>(i) / (n - 1);
        omega_max = std::max(omega_max, std::sqrt(std::abs(profile.omega_sq(t))));

        double b, bd, bdd;
        scaling.eval(t, b, bd, bdd);
        // |dD1/dt| and |dD2/dt|; |D1| >= 2 always, which makes the ratio a
        // well-defined drive timescale even where D2 vanishes.
        const double dd_re1 = bd * (1.0 - 1.0 / (b * b));
        const double dd_re2 = bd * (1.0 + 1.0 / (b * b));
        const double dd_im = bdd / w0;
        const double ddot = std::max(std::hypot(dd_re1, dd_im), std::hypot(dd_re2, dd_im));
        const double d1 = std::hypot(b + 1.0 / b, bd / w0);
        if (ddot > 0.0) tau_drive = std::min(tau_drive, d1 / ddot);
    }
    rep.omega_max = omega_max;
    rep.tau_drive = tau_drive;

    // phi(0) = 0 makes the secular ratio vanish trivially, so the margin is
    // evaluated after one initial Bohr period (capped at half the protocol).
    const double t0 = std::min(2.0 * kPi / bohr_frequency(scaling, 0.0), 0.5 * t_f);
    double margin = std::numeric_limits<double>::infinity();
    double phi = dynamical_phase(scaling, t0);
    double t_prev = t0;
    for (int i = 0; i < n; ++i) {
        const double t = t0 + (t_f - t0) * static_cast<double>(i) / (n - 1);
        if (t > t_prev) {
            phi += integrate([&](double tau) {
                const double b = scaling.b(tau);
                return w0 / (b * b);
            }, t_prev, t, 1e-12);
            t_prev = t;
        }
        const double wt = bohr_frequency(scaling, t);
        margin = std::min(margin, phi / (wt * rep.tau_bath));
    }
    rep.secular_margin = margin;

    rep.bath_vs_system_ok = rep.tau_bath * omega_max <= 1.0 / opts.threshold;
    rep.drive_ok = rep.tau_bath <= tau_drive / opts.threshold;
    rep.secular_ok = margin >= opts.threshold;
    return rep;
}

}  // namespace ste
