#include <doctest.h>

#include <cmath>
#include <random>

#include "bmeter/kernels.hpp"
#include "bmeter/onedim.hpp"
#include "bmeter/verification.hpp"

using namespace bmeter;

namespace {

onedim::OneDimModel fig_model() {
    onedim::OneDimModel m;
    m.g = 2.5;
    m.probe_positions = {0.0, 2.0};
    return m;
}

} // namespace

TEST_CASE("Gaussian autocorrelation") {
    const auto m = fig_model();
    const auto ac = onedim::autocorrelation(m);
    CHECK(ac.H0 == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-12));
    // even, maximal at zero
    CHECK(ac.H(1.3) == ac.H(-1.3));
    CHECK(ac.H(0.0) > ac.H(0.5));
    // H(0) = int h^2 dx
    quad::Settings qs;
    const double h2 = quad::integrate(
                          quad::RealFn([](double x) { return std::exp(-2.0 * x * x); }),
                          -10.0, 10.0, qs)
                          .value.real();
    CHECK(ac.H0 == doctest::Approx(h2).epsilon(1e-10));
}

TEST_CASE("numeric autocorrelation agrees with the analytic Gaussian one") {
    onedim::OneDimModel m = fig_model();
    onedim::OneDimModel mc = m;
    mc.gaussian_h = false;
    mc.h_custom = [](double x) { return std::exp(-x * x); };
    mc.h_support = 8.0;
    const auto ga = onedim::autocorrelation(m);
    const auto nu = onedim::autocorrelation(mc);
    for (double x : {0.0, 0.7, 2.1})
        CHECK(nu.H(x) == doctest::Approx(ga.H(x)).epsilon(1e-9));
    CHECK(onedim::pi_variance(mc) == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("closed A") {
    const auto m = fig_model();
    CHECK(onedim::closed_A(m, 0.0, 0.0) == 0.0);
    CHECK(onedim::closed_A(m, 2.0, 0.0) == 0.0);

    // x = 0, t -> inf: -(g/2) H(0)
    const double limit = -0.5 * m.g * std::sqrt(M_PI / 2.0);
    CHECK(onedim::closed_A(m, 0.0, 50.0) == doctest::Approx(limit).epsilon(1e-12));

    // light-cone arrival: |A| at x = 2a peaks near t = 2 a/c
    double best_t = 0.0, best = 0.0;
    for (double t = 0.05; t < 6.0; t += 0.05) {
        const double v = std::abs(onedim::closed_A(m, 2.0, t));
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    CHECK(best_t > 1.5);
    CHECK(best_t < 2.5);
}

TEST_CASE("no response before the light cone, up to Gaussian tails") {
    const auto m = fig_model();
    double early = 0.0, global = 0.0;
    for (double t = 0.05; t <= 1.2; t += 0.05)
        early = std::max(early, std::abs(onedim::closed_A(m, 4.0, t)));
    for (double t = 0.05; t <= 12.0; t += 0.05)
        global = std::max(global, std::abs(onedim::closed_A(m, 4.0, t)));
    CHECK(early < 0.02 * global);
}

TEST_CASE("closed B") {
    const auto m = fig_model();
    CHECK(onedim::closed_B(m, 0.0, 0.0) == 0.0);

    // decays as 1/t: t * B approaches a constant
    const double b40 = 40.0 * onedim::closed_B(m, 0.0, 40.0);
    const double b80 = 80.0 * onedim::closed_B(m, 0.0, 80.0);
    CHECK(b40 == doctest::Approx(b80).epsilon(0.05));
}

TEST_CASE("closed F12") {
    const auto m = fig_model();
    CHECK(onedim::closed_F12(m, 0.0) == 1.0);
    for (double t : {0.4, 1.5, 5.0}) {
        const double F = onedim::closed_F12(m, t);
        CHECK(F > 0.0);
        CHECK(F <= 1.0);
    }
    // even in t through |...|
    CHECK(onedim::ln_F12_closed(m, 2.0) == doctest::Approx(onedim::ln_F12_closed(m, -2.0)));
}

TEST_CASE("route equivalence, quick lattice") {
    const auto checks = verification::route_equivalence_suite(true);
    for (const auto& c : checks) {
        INFO(c.name, " measured ", c.measured);
        CHECK(c.pass);
    }
}

TEST_CASE("exported spectral data") {
    const auto m = fig_model();
    const auto sd = onedim::export_spectral(m);

    SUBCASE("ohmic-like low-frequency exponent") {
        CHECK(sd.s_exponent(0, 1) == 1.0);
        // fitted slope of ln J vs ln w near zero
        const double w1 = 1e-4, w2 = 1e-2;
        const double slope = (std::log(sd.J(0, 1, w2)) - std::log(sd.J(0, 1, w1))) /
                             (std::log(w2) - std::log(w1));
        CHECK(slope == doctest::Approx(1.0).epsilon(1e-3));
    }

    SUBCASE("kernel_A through the export equals closed_A at random points") {
        std::mt19937 rng(17);
        std::uniform_real_distribution<double> ut(0.1, 6.0);
        for (std::size_t a : {std::size_t(0), std::size_t(1)}) {
            const double t = ut(rng);
            CHECK(kernels::kernel_A(sd, a, 0, t) ==
                  doctest::Approx(onedim::closed_A(m, m.probe_positions[a], t))
                      .epsilon(1e-8));
        }
    }

    SUBCASE("phase moments present and identically zero") {
        CHECK(sd.has_phase_moments());
        for (double t : {0.5, 2.0, 7.0})
            CHECK(kernels::kernel_phase(sd, 0, 1, t) == 0.0);
    }
}

TEST_CASE("displacement-observable Gaussian data") {
    const auto m = fig_model();
    CHECK(onedim::xi_gaussian_data(m, 0.0).variance == 0.0);

    const double t0 = 3.0;
    const auto xi = onedim::xi_gaussian_data(m, t0);
    CHECK(xi.x0 == t0); // c = 1
    // variance = -2 ln F12(t0), and the same number through the frequency route
    CHECK(xi.variance == doctest::Approx(-2.0 * onedim::ln_F12_closed(m, t0)).epsilon(1e-12));
    const auto sd = onedim::export_spectral(m);
    auto f = [&sd, t0](double w) {
        const double s = std::sin(0.5 * w * t0);
        return quad::Complex(4.0 * sd.J(0, 1, w) * s * s, 0.0);
    };
    const double freq_route =
        quad::integrate_semi_infinite(f, quad::Weight::inv_omega_sq_coth, t0, 0.0,
                                      sd.omega_cutoff(), {})
            .value.real();
    CHECK(xi.variance == doctest::Approx(freq_route).epsilon(1e-6));

    // the field part is a smeared box of half-width x0
    CHECK(std::abs(xi.pi_profile(0.0)) > 0.0);
    CHECK(std::abs(xi.pi_profile(xi.x0 + 6.0)) < 1e-6 * std::abs(xi.pi_profile(0.0)));
}

TEST_CASE("finite-range probe asymptotics") {
    const auto m = fig_model();

    SUBCASE("t = 0 is exact zero") {
        const auto fr = onedim::finite_range_lnFtilde(m, 20.0, 0.0);
        CHECK(fr.term1 == 0.0);
        CHECK(fr.term2 == 0.0);
        CHECK(fr.exact == 0.0);
    }

    SUBCASE("memory term stays below the decoherence term at its own peak") {
        for (double D : {10.0, 100.0}) {
            double best = -1.0, t1_at_best = 0.0;
            for (int i = 1; i <= 40; ++i) {
                const double t = D * (0.2 + 2.8 * (i - 1) / 39.0);
                const auto fr = onedim::finite_range_lnFtilde(m, D, t);
                if (fr.term2 > best) {
                    best = fr.term2;
                    t1_at_best = std::abs(fr.term1);
                }
            }
            CHECK(best < t1_at_best);
        }
    }

    SUBCASE("asymptotic formula tracks the exact route for D >> a") {
        for (double D : {20.0, 40.0}) {
            const double t = 0.8 * D;
            const auto fr = onedim::finite_range_lnFtilde(m, D, t);
            CHECK(fr.asymptotic_reliable);
            CHECK(fr.asymptotic == doctest::Approx(fr.exact).epsilon(0.02));
        }
    }

    SUBCASE("narrow probes are flagged") {
        CHECK_FALSE(onedim::finite_range_lnFtilde(m, 3.0, 1.0).asymptotic_reliable);
    }

    SUBCASE("gbar convention") {
        CHECK(onedim::finite_range_lnFtilde(m, 20.0, 1.0).gbar ==
              doctest::Approx(2.5).epsilon(1e-12));
    }
}

TEST_CASE("model validation guards") {
    onedim::OneDimModel bad;
    bad.g = -1.0;
    CHECK_THROWS_AS((void)onedim::closed_A(bad, 0.0, 1.0), std::invalid_argument);
    onedim::OneDimModel custom;
    custom.gaussian_h = false; // missing callable
    CHECK_THROWS_AS((void)onedim::autocorrelation(custom), std::invalid_argument);
}
