#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "bmeter/bell.hpp"
#include "bmeter/onedim.hpp"

using namespace bmeter;
using Complex = std::complex<double>;

namespace {

onedim::OneDimModel fig_model(double g = 2.5) {
    onedim::OneDimModel m;
    m.g = g;
    m.probe_positions = {0.0};
    return m;
}

model::SystemSpec spec_with_rho12(Complex rho12, double rho11 = 0.5) {
    model::SystemSpec spec;
    spec.energies = {0.0, 0.0};
    spec.rho0 = Eigen::MatrixXcd(2, 2);
    spec.rho0 << rho11, rho12, std::conj(rho12), 1.0 - rho11;
    return spec;
}

} // namespace

TEST_CASE("config invariant alpha^2 + beta^2 = 1") {
    bell::BellConfig bad;
    bad.alpha = 0.5;
    bad.beta = 0.5;
    CHECK_THROWS_AS(bad.check(), std::invalid_argument);
}

TEST_CASE("no coherence, no violation: |f(t)| < 2 everywhere") {
    const auto m = fig_model();
    const auto spec = spec_with_rho12(0.0, 0.35);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    for (int k = 0; k < 5; ++k) {
        bell::BellConfig cfg;
        cfg.t0 = 2.0;
        const double phase = ur(rng);
        cfg.alpha = std::cos(phase);
        cfg.beta = std::sin(phase);
        cfg.gamma = ur(rng);
        cfg.theta = ur(rng);
        for (int i = 0; i < 50; ++i) {
            const double t = 6.0 * i / 49.0;
            CHECK(std::abs(bell::bell_f(m, spec, cfg, t)) < 2.0);
        }
    }
}

TEST_CASE("closed form at t = t0") {
    const auto m = fig_model();
    const double t0 = 2.0;
    for (double theta : {0.0, 0.8}) {
        const Complex rho12 = 0.4 * std::polar(1.0, 0.5 * theta);
        const auto spec = spec_with_rho12(rho12);
        bell::BellConfig cfg;
        cfg.t0 = t0;
        cfg.theta = theta;
        cfg.alpha = 0.6;
        cfg.beta = 0.8;
        cfg.gamma = 0.7;

        const double F = onedim::closed_F12(m, t0);
        const double A0 = onedim::closed_A(m, 0.0, t0);
        const double var = onedim::pi_variance(m);
        const double expected =
            2.0 * cfg.beta * std::abs(rho12) * (1.0 + std::pow(F, 4) * std::cos(theta)) +
            2.0 * cfg.alpha * std::exp(-0.5 * cfg.gamma * cfg.gamma * var) *
                std::sin(2.0 * cfg.gamma * A0);
        CHECK(bell::bell_f(m, spec, cfg, t0) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("gamma = 0 removes the sigma_z channel") {
    const auto m = fig_model();
    const auto spec = spec_with_rho12(0.5);
    bell::BellConfig cfg;
    cfg.t0 = 2.0;
    cfg.alpha = 0.6;
    cfg.beta = 0.8;
    cfg.gamma = 0.0;
    const double F = onedim::closed_F12(m, 2.0);
    const double expected = 2.0 * cfg.beta * 0.5 * (1.0 + std::pow(F, 4));
    CHECK(bell::bell_f(m, spec, cfg, 2.0) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(bell::bell_f_effective(m, spec, cfg, 2.0) == 0.0);
}

TEST_CASE("optimal configuration") {
    const auto m = fig_model(10.0);
    const auto spec = spec_with_rho12(0.5);
    const double t0 = 3.0;
    const auto opt = bell::optimal_config(m, spec, t0);

    SUBCASE("f at the optimum equals 2|z|") {
        CHECK(bell::bell_f(m, spec, opt.config, t0) ==
              doctest::Approx(opt.two_abs_z).epsilon(1e-9));
    }
    SUBCASE("gamma solves 2 gamma A0 = pi/2") {
        CHECK(2.0 * opt.config.gamma * onedim::closed_A(m, 0.0, t0) ==
              doctest::Approx(M_PI / 2.0).epsilon(1e-12));
    }
    SUBCASE("strong coupling violates the classical bound") {
        CHECK(opt.two_abs_z > 2.0);
    }
    SUBCASE("local maximum in the (alpha, beta) angle") {
        const double base = bell::bell_f(m, spec, opt.config, t0);
        for (double d : {-0.05, 0.05}) {
            bell::BellConfig rot = opt.config;
            const double ang = std::atan2(rot.beta, rot.alpha) + d;
            rot.alpha = std::cos(ang);
            rot.beta = std::sin(ang);
            CHECK(bell::bell_f(m, spec, rot, t0) < base);
        }
    }
    SUBCASE("weak coupling stays within the classical bound") {
        const auto weak = bell::optimal_config(fig_model(0.05), spec, t0);
        CHECK(weak.two_abs_z <= 2.0 + 1e-12);
    }
}

TEST_CASE("f is independent of the population split") {
    const auto m = fig_model(4.0);
    bell::BellConfig cfg;
    cfg.t0 = 1.5;
    cfg.alpha = 0.6;
    cfg.beta = 0.8;
    cfg.gamma = 0.4;
    const auto a = spec_with_rho12(0.3, 0.2);
    const auto b = spec_with_rho12(0.3, 0.8);
    for (double t : {0.5, 1.5, 3.0})
        CHECK(bell::bell_f(m, a, cfg, t) ==
              doctest::Approx(bell::bell_f(m, b, cfg, t)).epsilon(1e-12));
}

TEST_CASE("effective prediction satisfies the classical bound everywhere") {
    const auto m = fig_model(10.0);
    const auto spec = spec_with_rho12(0.5);
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> ur(-3.0, 3.0);
    for (int k = 0; k < 5; ++k) {
        bell::BellConfig cfg;
        cfg.t0 = 2.0;
        const double phase = ur(rng);
        cfg.alpha = std::cos(phase);
        cfg.beta = std::sin(phase);
        cfg.gamma = ur(rng);
        for (int i = 0; i < 30; ++i)
            CHECK(std::abs(bell::bell_f_effective(m, spec, cfg, 0.2 * i)) <= 2.0);
    }
}

TEST_CASE("violation scan") {
    const auto m = fig_model();
    const auto spec = spec_with_rho12(0.5);
    const auto rows = bell::violation_scan(m, spec, {1.0, 3.0}, {0.5, 2.5, 10.0});
    CHECK(rows.size() == 6);
    bool any_violated = false, g10_violated = true;
    for (const auto& r : rows) {
        if (r.violated) any_violated = true;
        if (r.g == 10.0 && !r.violated) g10_violated = false;
        CHECK(r.two_abs_z > 0.0);
    }
    CHECK(any_violated);
    CHECK(g10_violated);

    const auto none = bell::violation_scan(m, spec_with_rho12(0.0), {3.0}, {0.5, 10.0});
    for (const auto& r : none) CHECK_FALSE(r.violated);

    std::ostringstream os;
    bell::write_violation_csv(os, rows);
    const std::string csv = os.str();
    CHECK(csv.find("g,t0,gamma,alpha,beta,two_abs_z,violated") == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}

TEST_CASE("guards") {
    const auto m = fig_model();
    model::SystemSpec three;
    three.energies = {0.0, 0.0, 0.0};
    three.rho0 = Eigen::MatrixXcd::Identity(3, 3) / 3.0;
    bell::BellConfig cfg;
    CHECK_THROWS_AS((void)bell::bell_f(m, three, cfg, 1.0), std::invalid_argument);
    // A_0(0) = 0: gamma undefined
    CHECK_THROWS_AS((void)bell::optimal_config(m, spec_with_rho12(0.5), 0.0),
                    std::runtime_error);
    CHECK_THROWS_AS(
        (void)bell::violation_scan(m, spec_with_rho12(0.5), {}, {1.0}),
        std::invalid_argument);
}
