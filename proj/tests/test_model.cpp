#include <doctest.h>

#include <cmath>
#include <random>

#include "bmeter/model.hpp"
#include "bmeter/onedim.hpp"

using namespace bmeter;
using Complex = std::complex<double>;

namespace {

model::SystemSpec two_level_plus() {
    model::SystemSpec spec;
    spec.energies = {0.0, 0.0};
    Eigen::VectorXcd u(2);
    u << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    spec.rho0 = u * u.adjoint();
    return spec;
}

} // namespace

TEST_CASE("validate_model accepts the ohmic family") {
    const auto sd = model::make_ohmic(1.0, 1.0);
    const auto rep = model::validate_model(two_level_plus(), sd, {});
    CHECK(rep.ok());
}

TEST_CASE("validate_model rejects a constant spectral density") {
    model::SpectralData sd(2, 0, 10.0);
    sd.set_J(0, 1, [](double) { return 1.0; }, 1.0);
    const auto rep = model::validate_model(two_level_plus(), sd, {});
    REQUIRE_FALSE(rep.ok());
    bool found = false;
    for (const auto& i : rep.issues)
        if (i.what.find("vanish") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("validate_model accepts the exported one-dimensional model") {
    onedim::OneDimModel m;
    m.g = 2.5;
    m.probe_positions = {0.0, 2.0};
    const auto sd = onedim::export_spectral(m);
    const auto rep = model::validate_model(two_level_plus(), sd, onedim::export_probes(m));
    CHECK(rep.ok());

    // Re G must behave like omega near zero (ohmic-like coupling density)
    const double g1 = sd.G(0, 0, 1e-6).real();
    const double g2 = sd.G(0, 0, 2e-6).real();
    CHECK(g2 / g1 == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("hermiticity gate on rho0") {
    auto spec = two_level_plus();
    const auto sd = model::make_ohmic(1.0, 1.0);
    CHECK(model::validate_model(spec, sd, {}).ok());

    spec.rho0(0, 1) += Complex(0.0, 1e-6);
    const auto rep = model::validate_model(spec, sd, {});
    REQUIRE_FALSE(rep.ok());
    bool found = false;
    for (const auto& i : rep.issues)
        if (i.what.find("Hermitian") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("trace and positivity gates on rho0") {
    auto spec = two_level_plus();
    const auto sd = model::make_ohmic(1.0, 1.0);

    SUBCASE("trace") {
        spec.rho0 *= 1.0 + 1e-6;
        CHECK_FALSE(model::validate_model(spec, sd, {}).ok());
    }
    SUBCASE("positivity") {
        spec.rho0(0, 0) = -0.1;
        spec.rho0(1, 1) = 1.1;
        spec.rho0(0, 1) = spec.rho0(1, 0) = 0.0;
        CHECK_FALSE(model::validate_model(spec, sd, {}).ok());
    }
    SUBCASE("negative temperature") {
        spec.temperature = -1.0;
        CHECK_FALSE(model::validate_model(spec, sd, {}).ok());
    }
}

TEST_CASE("J is symmetric at random frequencies and zero on the diagonal") {
    const auto sd = model::make_power_law(0.7, 1.5, 2.0);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> uw(1e-6, 20.0);
    for (int i = 0; i < 64; ++i) {
        const double w = uw(rng);
        CHECK(sd.J(0, 1, w) == sd.J(1, 0, w));
    }
    CHECK(sd.J(0, 0, 1.0) == 0.0);
    CHECK(sd.J(1, 1, 1.0) == 0.0);
}

TEST_CASE("non-finite samples are rejected with a location") {
    model::SpectralData sd(2, 0, 10.0);
    sd.set_J(0, 1, [](double w) { return w < 0.5 ? w : std::nan(""); }, 1.0);
    const auto rep = model::validate_model(two_level_plus(), sd, {});
    REQUIRE_FALSE(rep.ok());
    bool located = false;
    for (const auto& i : rep.issues)
        if (i.what.find("non-finite") != std::string::npos && std::isfinite(i.omega))
            located = true;
    CHECK(located);
}

TEST_CASE("family constructors reject bad parameters") {
    CHECK_THROWS_AS((void)model::make_power_law(1.0, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)model::make_power_law(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("probe overlap matrix must be Hermitian when supplied") {
    const auto sd = model::make_ohmic(1.0, 1.0);
    model::ProbeSet probes;
    probes.labels = {"p0", "p1"};
    Eigen::MatrixXcd m(2, 2);
    m << 1.0, Complex(0.2, 0.1), Complex(0.2, 0.3), 1.0;
    probes.mu_overlap = m;
    CHECK_FALSE(model::validate_model(two_level_plus(), sd, probes).ok());
}
