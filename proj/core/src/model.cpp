#include "ste/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ste {

void ModelParams::validate() const {
    if (!(omega0 > 0.0)) throw std::invalid_argument("ModelParams: omega0 must be > 0");
    if (!(omegaf > 0.0)) throw std::invalid_argument("ModelParams: omegaf must be > 0");
    if (!(temperature > 0.0)) throw std::invalid_argument("ModelParams: temperature must be > 0");
    if (hbar != 1.0 || mass != 1.0 || kb != 1.0)
        throw std::invalid_argument("ModelParams: natural units require hbar = mass = kB = 1");
}

void BathSpec::validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("BathSpec: gamma must be > 0");
    if (!(cutoff > 0.0)) throw std::invalid_argument("BathSpec: cutoff must be > 0");
    if (n_modes < 1) throw std::invalid_argument("BathSpec: n_modes must be >= 1");
}

double BathModes::recurrence_time() const {
    return 2.0 * std::numbers::pi / delta_omega;
}

double BathModes::max_duration() const {
    return kRecurrenceSafety * recurrence_time();
}

double spectral_density(double omega, const BathSpec& bath) {
    if (omega < 0.0) throw std::domain_error("spectral_density: omega must be >= 0");
    return omega < bath.cutoff ? bath.gamma * omega : 0.0;
}

double planck_occupation(double omega, double temperature) {
    if (!(omega > 0.0)) throw std::domain_error("planck_occupation: omega must be > 0");
    if (!(temperature > 0.0)) throw std::domain_error("planck_occupation: temperature must be > 0");
    return 1.0 / std::expm1(omega / temperature);
}

BathModes discretize_bath(const BathSpec& bath) {
    bath.validate();
    BathModes modes;
    const int n = bath.n_modes;
    modes.delta_omega = bath.cutoff / n;
    modes.frequencies.resize(n);
    modes.couplings.resize(n);
    for (int i = 0; i < n; ++i) {
        const double w = (i + 0.5) * modes.delta_omega;
        modes.frequencies[i] = w;
        modes.couplings[i] = std::sqrt(spectral_density(w, bath) * modes.delta_omega);
    }
    return modes;
}

void check_recurrence_guard(const BathModes& modes, double duration) {
    const double limit = modes.max_duration();
    if (duration > limit) {
        throw std::invalid_argument(
            "bath discretization too coarse: duration " + std::to_string(duration) +
            " exceeds the recurrence guard " + std::to_string(limit) +
            " (= " + std::to_string(kRecurrenceSafety) + " * 2*pi/delta_omega); increase n_modes");
    }
}

}  // namespace ste
