#include "bmeter/bell.hpp"

#include <cmath>
#include <ostream>

#include "bmeter/csv.hpp"

namespace bmeter::bell {

void BellConfig::check() const {
    if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12)
        throw std::invalid_argument("BellConfig: alpha^2 + beta^2 must equal 1");
    if (t0 < 0.0) throw std::invalid_argument("BellConfig: t0 must be nonnegative");
}

namespace {

void check_two_level(const SystemSpec& spec) {
    if (spec.levels() != 2)
        throw std::invalid_argument("bell: requires a 2-level system");
}

/// <B1>(t) under H_l, from Im K_ll(t; gamma).
double b1_mean(double gamma, double variance, double A_l) {
    return std::exp(-0.5 * gamma * gamma * variance) * std::sin(2.0 * gamma * A_l);
}

/// <W(t)> = <e^{itH_1} e^{-it0 H_2} e^{it0 H_1} e^{-itH_2}>: displacement
/// algebra collapses the four propagators into one displacement of strength
/// |1 + e^{iws} - 2 e^{iwt}| per mode with s = t - t0 (the accumulated
/// commutator phase vanishes for lambda_2 = -lambda_1 real).
double xi_cross_term(const OneDimModel& m, double t, double t0, double temperature,
                     const quad::Settings& qs) {
    const model::SpectralData sd = onedim::export_spectral(m);
    const double s = t - t0;
    auto f = [&sd, t, s](double w) {
        const Complex gamma_w =
            1.0 + std::polar(1.0, w * s) - 2.0 * std::polar(1.0, w * t);
        return quad::Complex(sd.J(0, 1, w) * std::norm(gamma_w), 0.0);
    };
    const double t_split = std::max({std::abs(t), std::abs(s), std::abs(t0)});
    const double I = quad::integrate_semi_infinite(f, quad::Weight::inv_omega_sq_coth,
                                                   t_split, temperature,
                                                   sd.omega_cutoff(), qs)
                         .value.real();
    return std::exp(-0.5 * I);
}

} // namespace

double bell_f_effective(const OneDimModel& m, const SystemSpec& spec,
                        const BellConfig& cfg, double t, const quad::Settings& qs) {
    check_two_level(spec);
    cfg.check();
    const double var = onedim::pi_variance(m, qs);
    const double A1 = onedim::closed_A(m, 0.0, t, qs);
    const double b1_1 = b1_mean(cfg.gamma, var, A1);
    const double b1_2 = b1_mean(cfg.gamma, var, -A1);
    return 2.0 * cfg.alpha *
           (spec.rho0(0, 0).real() * b1_1 - spec.rho0(1, 1).real() * b1_2);
}

double bell_f(const OneDimModel& m, const SystemSpec& spec, const BellConfig& cfg,
              double t, const quad::Settings& qs) {
    check_two_level(spec);
    cfg.check();
    const double diag = bell_f_effective(m, spec, cfg, t, qs);

    const Complex rho21 = spec.rho0(1, 0);
    if (rho21 == Complex(0.0, 0.0)) return diag;

    const double T = spec.temperature;
    const double P1 = onedim::closed_F12(m, std::abs(t - cfg.t0), qs);
    const double P2 = xi_cross_term(m, t, cfg.t0, T, qs);
    const Complex osc = std::polar(1.0, t * (spec.energies[0] - spec.energies[1]));
    const Complex half_theta = std::polar(1.0, 0.5 * cfg.theta);
    const double cross =
        2.0 * cfg.beta *
        (rho21 * osc * (half_theta * P1 + std::conj(half_theta) * P2)).real();
    return diag + cross;
}

OptimalResult optimal_config(const OneDimModel& m, const SystemSpec& spec, double t0,
                             const quad::Settings& qs) {
    check_two_level(spec);
    const double A0 = onedim::closed_A(m, 0.0, t0, qs);
    if (A0 == 0.0)
        throw std::runtime_error("optimal_config: gamma undefined (A_0^{(1)}(t0) = 0)");

    OptimalResult r;
    r.config.t0 = t0;
    r.config.gamma = M_PI / (4.0 * A0);
    const Complex rho12 = spec.rho0(0, 1);
    r.config.theta = 2.0 * std::arg(rho12);

    const double var = onedim::pi_variance(m, qs);
    const double F = onedim::closed_F12(m, t0, qs);
    const double F4 = F * F * F * F;
    r.z = Complex(std::exp(-0.5 * r.config.gamma * r.config.gamma * var) *
                      std::sin(2.0 * r.config.gamma * A0),
                  std::abs(rho12) * (1.0 + F4 * std::cos(r.config.theta)));
    const double az = std::abs(r.z);
    if (az == 0.0) {
        r.config.alpha = 1.0;
        r.config.beta = 0.0;
    } else {
        r.config.alpha = r.z.real() / az;
        r.config.beta = r.z.imag() / az;
    }
    r.two_abs_z = 2.0 * az;
    return r;
}

std::vector<ViolationRow> violation_scan(const OneDimModel& base, const SystemSpec& spec,
                                         const std::vector<double>& t0_grid,
                                         const std::vector<double>& g_grid,
                                         const quad::Settings& qs) {
    check_two_level(spec);
    if (t0_grid.empty() || g_grid.empty())
        throw std::invalid_argument("violation_scan: grids must be nonempty");
    const std::size_t n = t0_grid.size() * g_grid.size();
    std::vector<ViolationRow> rows(n);
    const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < nn; ++i) {
        const std::size_t ig = static_cast<std::size_t>(i) / t0_grid.size();
        const std::size_t it = static_cast<std::size_t>(i) % t0_grid.size();
        OneDimModel m = base;
        m.g = g_grid[ig];
        const OptimalResult opt = optimal_config(m, spec, t0_grid[it], qs);
        rows[i] = {m.g,
                   t0_grid[it],
                   opt.config.gamma,
                   opt.config.alpha,
                   opt.config.beta,
                   opt.two_abs_z,
                   opt.two_abs_z > 2.0};
    }
    return rows;
}

void write_violation_csv(std::ostream& os, const std::vector<ViolationRow>& rows) {
    csv::Row header;
    for (const char* c : {"g", "t0", "gamma", "alpha", "beta", "two_abs_z", "violated"})
        header.add(std::string(c));
    header.write(os);
    for (const auto& r : rows) {
        csv::Row row;
        row.add(r.g);
        row.add(r.t0);
        row.add(r.gamma);
        row.add(r.alpha);
        row.add(r.beta);
        row.add(r.two_abs_z);
        row.add(std::string(r.violated ? "yes" : "no"));
        row.write(os);
    }
}

} // namespace bmeter::bell
