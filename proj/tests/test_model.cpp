#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ste/model.hpp"

using namespace ste;

namespace {
const BathSpec paper_bath{0.002, 100.0, 600};
}

TEST_CASE("spectral density: Ohmic with abrupt cutoff") {
    CHECK(spectral_density(1.0, paper_bath) == doctest::Approx(0.002).epsilon(1e-14));
    CHECK(spectral_density(100.0, paper_bath) == 0.0);
    CHECK(spectral_density(250.0, paper_bath) == 0.0);
    CHECK(spectral_density(0.0, paper_bath) == 0.0);
    CHECK_THROWS_AS(spectral_density(-0.1, paper_bath), std::domain_error);

    // linear below the cutoff
    for (double w : {0.3, 1.7, 42.0, 99.0})
        CHECK(spectral_density(2.0 * w / 2.0, paper_bath) ==
              doctest::Approx(paper_bath.gamma * w).epsilon(1e-14));
}

TEST_CASE("planck occupation") {
    CHECK(planck_occupation(1.0, 1.0) == doctest::Approx(0.58197670686932642).epsilon(1e-14));
    CHECK(planck_occupation(3.0, 1.0) == doctest::Approx(0.052395696491255952).epsilon(1e-14));
    CHECK(planck_occupation(1.0, 1e-3) == 0.0);  // zero-temperature limit
    CHECK_THROWS_AS(planck_occupation(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(planck_occupation(-1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(planck_occupation(1.0, 0.0), std::domain_error);

    // strictly decreasing in omega, increasing in T
    double prev = planck_occupation(0.1, 1.0);
    for (double w = 0.2; w <= 5.0; w += 0.1) {
        const double n = planck_occupation(w, 1.0);
        CHECK(n < prev);
        prev = n;
    }
    CHECK(planck_occupation(1.0, 2.0) > planck_occupation(1.0, 1.0));

    // detailed balance identity n/(1+n) = exp(-w/T)
    for (double x = 0.1; x <= 10.0; x += 0.1) {
        const double n = planck_occupation(x, 1.0);
        CHECK(std::abs(n / (1.0 + n) - std::exp(-x)) <= 1e-12);
    }
}

TEST_CASE("bath discretization: midpoint rule") {
    const BathModes modes = discretize_bath(paper_bath);
    CHECK(modes.delta_omega == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(modes.frequencies.front() == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(static_cast<int>(modes.frequencies.size()) == 600);

    // strictly increasing, inside (0, cutoff]
    for (std::size_t i = 0; i < modes.frequencies.size(); ++i) {
        CHECK(modes.frequencies[i] > 0.0);
        CHECK(modes.frequencies[i] <= paper_bath.cutoff);
        if (i) CHECK(modes.frequencies[i] > modes.frequencies[i - 1]);
    }

    // sum g_n^2 vs gamma L^2 / 2 = 10; midpoint is exact for a linear density
    double sum = 0.0;
    for (double g : modes.couplings) sum += g * g;
    CHECK(sum == doctest::Approx(10.0).epsilon(1e-12));

    // refining N keeps the integral nailed
    BathSpec fine = paper_bath;
    fine.n_modes = 1200;
    double sum2 = 0.0;
    for (double g : discretize_bath(fine).couplings) sum2 += g * g;
    CHECK(sum2 == doctest::Approx(10.0).epsilon(1e-12));

    // single-mode case
    const BathModes one = discretize_bath(BathSpec{1.0, 1.0, 1});
    CHECK(one.frequencies[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(one.couplings[0] * one.couplings[0] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("recurrence guard") {
    const BathModes modes = discretize_bath(paper_bath);
    const double limit = kRecurrenceSafety * 2.0 * std::numbers::pi / modes.delta_omega;
    CHECK(modes.max_duration() == doctest::Approx(limit).epsilon(1e-15));
    CHECK_NOTHROW(check_recurrence_guard(modes, 30.0));
    CHECK_THROWS_AS(check_recurrence_guard(modes, limit * 1.01), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    ModelParams p;
    CHECK_NOTHROW(p.validate());
    p.hbar = 2.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ModelParams{};
    p.temperature = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = ModelParams{};
    p.omegaf = -3.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    const BathSpec negative_gamma{-1.0, 100.0, 600};
    CHECK_THROWS_AS(negative_gamma.validate(), std::invalid_argument);
    const BathSpec no_modes{0.002, 100.0, 0};
    CHECK_THROWS_AS(no_modes.validate(), std::invalid_argument);
}
