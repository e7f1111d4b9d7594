#ifndef STE_SCALING_HPP
#define STE_SCALING_HPP

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ste/model.hpp"

namespace ste {

// Scaling function b(t) of the dynamical invariant. Implementations must be
// strictly positive on [0, duration].
class Scaling {
public:
    virtual ~Scaling() = default;
    virtual void eval(double t, double& b, double& bdot, double& bddot) const = 0;
    virtual double duration() const = 0;
    virtual double omega0() const = 0;

    double b(double t) const {
        double bb, bd, bdd;
        eval(t, bb, bd, bdd);
        return bb;
    }
};

// 6th-order polynomial ansatz b(t) = sum_n a_n (t/t_f)^n, evaluated by Horner
// in s = t/t_f; derivatives come from analytically differentiated coefficients.
class PolynomialScaling final : public Scaling {
public:
    PolynomialScaling(const std::array<double, 7>& coefficients, double t_f, double omega0);

    void eval(double t, double& b, double& bdot, double& bddot) const override;
    double duration() const override { return t_f_; }
    double omega0() const override { return omega0_; }
    const std::array<double, 7>& coefficients() const { return coeffs_; }

    // Largest |b - boundary value| over the six endpoint conditions, given the
    // target value b(t_f) should reach. Used by tests and the design sanity check.
    double boundary_residual(double b_final) const;

private:
    std::array<double, 7> coeffs_;
    double t_f_;
    double omega0_;
};

// Dense tabulation of b, bdot on a uniform grid with cubic Hermite
// interpolation; bddot is reconstructed through the Ermakov identity
// bddot = omega0^2/b^3 - omega^2(t) b from the generating frequency profile.
class TabulatedScaling final : public Scaling {
public:
    TabulatedScaling(std::vector<double> b, std::vector<double> bdot,
                     std::function<double(double)> omega_sq, double t_f, double omega0);

    void eval(double t, double& b, double& bdot, double& bddot) const override;
    double duration() const override { return t_f_; }
    double omega0() const override { return omega0_; }
    std::size_t grid_size() const { return b_.size(); }

private:
    std::vector<double> b_;
    std::vector<double> bdot_;
    std::function<double(double)> omega_sq_;
    double t_f_;
    double omega0_;
    double h_;
};

enum class ProfileKind { ste, quench, ramp, custom, constant };

const char* to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

// Trap frequency profile as omega^2(t); omega^2 < 0 (expulsive trap) is
// representable and flagged, never rejected.
struct FrequencyProfile {
    ProfileKind kind = ProfileKind::constant;
    double duration = 0.0;
    std::function<double(double)> omega_sq;
    bool has_negative_omega_sq = false;

    double omega_at(double t) const;  // sqrt(omega_sq), NaN where omega_sq < 0
};

// Solves a0 = 1, a1 = a2 = 0 and the 3x3 linear system fixing a3, a4, a5 so
// that b(t_f) = sqrt(omega0/omegaf), bdot(t_f) = bddot(t_f) = 0 for the given a6.
PolynomialScaling solve_boundary_coefficients(const ModelParams& params, double t_f, double a6);

// Ermakov equation rearranged: omega^2(t) = omega0^2/b^4 - bddot/b.
// The scaling is captured by value (shared) so the profile owns its data.
FrequencyProfile reverse_frequency(std::shared_ptr<const Scaling> scaling);
FrequencyProfile reverse_frequency(const PolynomialScaling& scaling);

struct ErmakovOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int grid_points = 0;  // 0 = automatic from duration and frequency scale
};

// Integrates bddot + omega^2(t) b = omega0^2/b^3 from (b0, bdot0) with dense
// output. Throws if b crosses <= 0.
TabulatedScaling forward_ermakov(const FrequencyProfile& profile, double b0, double bdot0,
                                 double omega0, const ErmakovOptions& opts = {});

// Sampled (t, omega^2) profile with natural cubic spline interpolation.
FrequencyProfile custom_profile(const std::vector<double>& times,
                                const std::vector<double>& omega_sq_values);

}  // namespace ste

#endif
