#include <doctest.h>

#include <cmath>

#include "bmeter/generating.hpp"
#include "bmeter/oracle.hpp"

using namespace bmeter;
using Complex = std::complex<double>;

namespace {

oracle::DiscreteModel two_mode_complex() {
    oracle::DiscreteModel dm;
    dm.omegas = {1.0, 2.0};
    dm.lambdas = {{Complex(0.3, 0.1), Complex(0.1, -0.2)},
                  {Complex(-0.2, 0.25), Complex(0.3, 0.05)}};
    dm.mus = {{Complex(0.25, -0.1), Complex(0.15, 0.2)}};
    return dm;
}

} // namespace

TEST_CASE("single-mode kernel sum by hand") {
    // omega = 1, lambda = mu = real: A(t) = mu lambda (cos t - 1); at t = pi
    // with lambda = 0.5, mu = 0.3 the one-term sum gives -0.3
    oracle::DiscreteModel dm;
    dm.omegas = {1.0};
    dm.lambdas = {{Complex(0.5, 0.0)}, {Complex(-0.5, 0.0)}};
    dm.mus = {{Complex(0.3, 0.0)}};
    const auto s = oracle::discrete_slice(dm, M_PI, 0.0);
    CHECK(s.A(0, 0) == doctest::Approx(-0.3).epsilon(1e-14));
    CHECK(s.A(0, 1) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("discrete phase formula against exact propagation") {
    // complex couplings exercise both phase moments; the Fock trace is the
    // authority for arg F_{ll'}
    const auto dm = two_mode_complex();
    const oracle::FockTruncation trunc{18};
    for (double t : {0.7, 2.3}) {
        const auto s = oracle::discrete_slice(dm, t, 0.0);
        const Complex K =
            oracle::fock_generating(dm, trunc, 0, 1, t, {0.0}, 0.0);
        CHECK(std::abs(K) == doctest::Approx(s.F_abs(0, 1)).epsilon(1e-10));
        CHECK(std::arg(K) == doctest::Approx(s.phi(0, 1)).epsilon(1e-9));
    }
}

TEST_CASE("unitarity of the Fock propagators") {
    const auto dm = two_mode_complex();
    const oracle::FockTruncation trunc{12};
    const Eigen::MatrixXcd U = oracle::fock_propagator(dm, trunc, 0, 1.7);
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(U.rows(), U.cols());
    CHECK((U.adjoint() * U - I).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("generating function at X = 0") {
    const auto dm = two_mode_complex();
    const oracle::FockTruncation trunc{16};
    SUBCASE("diagonal is exactly 1 (unitarity)") {
        const Complex v = oracle::fock_generating(dm, trunc, 0, 0, 2.1, {0.0}, 0.0);
        CHECK(std::abs(v - Complex(1.0, 0.0)) < 1e-12);
    }
    SUBCASE("off-diagonal equals the decoherence factor") {
        const auto s = oracle::discrete_slice(dm, 2.1, 0.0);
        const Complex v = oracle::fock_generating(dm, trunc, 0, 1, 2.1, {0.0}, 0.0);
        CHECK(std::abs(v - std::polar(s.F_abs(0, 1), s.phi(0, 1))) < 1e-10);
    }
}

TEST_CASE("displaced-frame first moment equals 2A") {
    const auto dm = two_mode_complex();
    const oracle::FockTruncation trunc{18};
    for (double t : {0.9, 3.3}) {
        const auto s = oracle::discrete_slice(dm, t, 0.0);
        CHECK(oracle::fock_mean_probe(dm, trunc, 0, t, 0, 0.0) ==
              doctest::Approx(2.0 * s.A(0, 0)).epsilon(1e-8));
    }
}

TEST_CASE("thermal-state route at T > 0") {
    oracle::DiscreteModel dm;
    dm.omegas = {0.9, 1.7};
    dm.lambdas = {{Complex(0.3, 0.0), Complex(-0.15, 0.1)},
                  {Complex(-0.1, 0.2), Complex(0.25, 0.0)}};
    dm.mus = {{Complex(0.2, 0.1), Complex(-0.25, 0.05)}};
    const oracle::FockTruncation trunc{16};
    const double T = 0.4;
    for (double t : {0.8, 2.6}) {
        const auto s = oracle::discrete_slice(dm, t, T);
        const std::vector<double> X{0.45};
        const Complex kd = generating::K_diag(s, 0, X);
        const Complex ko = generating::K_offdiag(s, 0, 1, X);
        CHECK(std::abs(kd - oracle::fock_generating(dm, trunc, 0, 0, t, X, T)) < 1e-8);
        CHECK(std::abs(ko - oracle::fock_generating(dm, trunc, 0, 1, t, X, T)) < 1e-8);
    }
}

TEST_CASE("truncation tail control") {
    oracle::DiscreteModel dm;
    dm.omegas = {0.5};
    dm.lambdas = {{Complex(0.4, 0.0)}, {Complex(-0.4, 0.0)}};
    dm.mus = {{Complex(0.3, 0.0)}};
    SUBCASE("thermal tail above 1e-10 is refused") {
        CHECK_THROWS_WITH_AS(
            (void)oracle::fock_generating(dm, oracle::FockTruncation{10}, 0, 0, 1.0,
                                          {0.1}, 1.0),
            doctest::Contains("increase n_max"), std::runtime_error);
    }
    SUBCASE("generous truncation is accepted") {
        const Complex v = oracle::fock_generating(dm, oracle::FockTruncation{60}, 0, 0,
                                                  1.0, {0.1}, 1.0);
        CHECK(std::isfinite(v.real()));
    }
}

TEST_CASE("three-mode tensor space") {
    oracle::DiscreteModel dm;
    dm.omegas = {0.8, 1.3, 2.2};
    dm.lambdas = {{Complex(0.2, 0.0), Complex(0.1, 0.1), Complex(-0.15, 0.0)},
                  {Complex(-0.2, 0.0), Complex(0.05, -0.1), Complex(0.1, 0.1)}};
    dm.mus = {{Complex(0.15, 0.0), Complex(0.1, -0.05), Complex(0.2, 0.0)}};
    const auto s = oracle::discrete_slice(dm, 1.1, 0.0);
    const std::vector<double> X{0.3};
    const Complex ko = generating::K_offdiag(s, 0, 1, X);
    const Complex fo =
        oracle::fock_generating(dm, oracle::FockTruncation{9}, 0, 1, 1.1, X, 0.0);
    CHECK(std::abs(ko - fo) < 1e-6);
    // four modes are out of scope for the dense oracle
    dm.omegas.push_back(3.0);
    for (auto& l : dm.lambdas) l.emplace_back(0.1, 0.0);
    dm.mus[0].emplace_back(0.1, 0.0);
    CHECK_THROWS_AS((void)oracle::fock_generating(dm, oracle::FockTruncation{4}, 0, 1,
                                                  1.0, X, 0.0),
                    std::invalid_argument);
}

TEST_CASE("discrete-to-continuum convergence in L") {
    onedim::OneDimModel m;
    m.g = 2.5;
    m.probe_positions = {0.0};
    const double t = 4.0;

    // A converges superexponentially (even integrand, Poisson summation):
    // already at machine precision for L = 25 a
    {
        const auto dm = oracle::discretize_onedim(m, 25.0, 325);
        CHECK(std::abs(oracle::discrete_slice(dm, t, 0.0).A(0, 0) -
                       onedim::closed_A(m, 0.0, t)) < 1e-12);
    }

    // B converges at second order in 1/L; measure the order and monotonicity
    const double closedB = onedim::closed_B(m, 0.0, t);
    std::vector<double> errs;
    for (double L : {25.0, 50.0, 100.0}) {
        const auto dm = oracle::discretize_onedim(m, L, static_cast<std::size_t>(13 * L));
        errs.push_back(std::abs(oracle::discrete_slice(dm, t, 0.0).B(0, 0) - closedB));
    }
    CHECK(errs[1] < errs[0]);
    CHECK(errs[2] < errs[1]);
    CHECK(errs[2] < 1e-3);
    const double order = std::log2(errs[0] / errs[2]) / 2.0;
    CHECK(order == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("finite-size recurrence shows up near t = 2L/c") {
    onedim::OneDimModel m;
    m.g = 2.5;
    m.probe_positions = {0.0};
    const double L = 6.0;
    const auto dm = oracle::discretize_onedim(m, L, 160);
    CHECK(dm.recurrence_time == doctest::Approx(2.0 * L));
    const double early =
        std::abs(oracle::discrete_slice(dm, 1.0, 0.0).F_abs(0, 1) -
                 onedim::closed_F12(m, 1.0));
    const double echo =
        std::abs(oracle::discrete_slice(dm, 2.0 * L, 0.0).F_abs(0, 1) -
                 onedim::closed_F12(m, 2.0 * L));
    CHECK(echo > 100.0 * std::max(early, 1e-12));
}

TEST_CASE("discrete model validation") {
    oracle::DiscreteModel dm;
    dm.omegas = {2.0, 1.0}; // not increasing
    dm.lambdas = {{Complex(0.1, 0.0), Complex(0.1, 0.0)},
                  {Complex(0.1, 0.0), Complex(0.1, 0.0)}};
    dm.mus = {{Complex(0.1, 0.0), Complex(0.1, 0.0)}};
    CHECK_THROWS_AS((void)oracle::discrete_slice(dm, 1.0, 0.0), std::invalid_argument);
}
