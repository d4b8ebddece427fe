#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "bmeter/model.hpp"
#include "bmeter/onedim.hpp"

namespace bmeter::bell {

using Complex = std::complex<double>;
using model::SystemSpec;
using onedim::OneDimModel;

/// CHSH settings: A_{1/2} = alpha sigma_z +- beta sigma_x on the system,
/// B1 = sin(gamma Pi_0) and B2 = cos(Xi(t0) + theta/2) on the field, with
/// theta/2 the phase of rho_12.
struct BellConfig {
    double t0 = 1.0;
    double theta = 0.0;
    double alpha = 0.0;
    double beta = 1.0;
    double gamma = 1.0;

    void check() const; // alpha^2 + beta^2 = 1 to 1e-12
};

/// f(t) = <A1 (B1 + B2) + A2 (B1 - B2)>(t), evaluated through the Gaussian
/// identities of the one-dimensional model. Requires a 2-level system.
double bell_f(const OneDimModel& m, const SystemSpec& spec, const BellConfig& cfg,
              double t, const quad::Settings& qs = {});

/// Same combination for the effective separable state: the level-diagonal
/// term only. Bounded by 2 in magnitude for every configuration.
double bell_f_effective(const OneDimModel& m, const SystemSpec& spec,
                        const BellConfig& cfg, double t, const quad::Settings& qs = {});

struct OptimalResult {
    BellConfig config;
    Complex z;
    double two_abs_z;
};

/// The maximizing settings at time t0: gamma = pi / 4 A_0^{(1)}(t0),
/// theta twice the phase of rho_12, and (alpha, beta) aligned with
/// z = e^{-gamma^2 <Pi_0^2>/2} sin(2 gamma A_0^{(1)}) + i |rho_12| (1 + F12^4 cos theta).
/// f at this configuration equals 2|z|.
OptimalResult optimal_config(const OneDimModel& m, const SystemSpec& spec, double t0,
                             const quad::Settings& qs = {});

struct ViolationRow {
    double g, t0, gamma, alpha, beta, two_abs_z;
    bool violated;
};

/// Sweep of 2|z| over coupling strengths and evaluation times; rows are
/// independent and evaluated in parallel.
std::vector<ViolationRow> violation_scan(const OneDimModel& base, const SystemSpec& spec,
                                         const std::vector<double>& t0_grid,
                                         const std::vector<double>& g_grid,
                                         const quad::Settings& qs = {});

void write_violation_csv(std::ostream& os, const std::vector<ViolationRow>& rows);

} // namespace bmeter::bell
