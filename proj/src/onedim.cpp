#include "bmeter/onedim.hpp"

#include <algorithm>
#include <cmath>

namespace bmeter::onedim {

namespace {

void check_model(const OneDimModel& m) {
    if (!(m.g > 0.0) || !(m.a > 0.0) || !(m.c > 0.0))
        throw std::invalid_argument("OneDimModel: g, a, c must be positive");
    if (!m.gaussian_h && (!m.h_custom || !(m.h_support > 0.0)))
        throw std::invalid_argument("OneDimModel: custom h needs a callable and support");
}

double h_eval(const OneDimModel& m, double x) {
    if (m.gaussian_h) return std::exp(-x * x / (m.a * m.a));
    return m.h_custom(x);
}

double h_halfwidth(const OneDimModel& m) {
    return m.gaussian_h ? 8.0 * m.a : m.h_support;
}

} // namespace

AutoCorr autocorrelation(const OneDimModel& m, const quad::Settings& qs) {
    check_model(m);
    if (m.gaussian_h) {
        const double a = m.a;
        const double amp = a * std::sqrt(M_PI / 2.0);
        return {[a, amp](double x) { return amp * std::exp(-x * x / (2.0 * a * a)); },
                amp, 12.0 * a};
    }
    const double w = h_halfwidth(m);
    const OneDimModel* mp = &m;
    auto H = [mp, w, qs](double x) {
        auto f = [mp, x](double y) { return h_eval(*mp, y) * h_eval(*mp, x - y); };
        return quad::integrate(quad::RealFn(f), -w, w, qs).value.real();
    };
    return {H, H(0.0), 2.0 * w};
}

double hhat_cos(const OneDimModel& m, double k, const quad::Settings& qs) {
    check_model(m);
    if (m.gaussian_h) return m.a * std::sqrt(M_PI) * std::exp(-0.25 * k * k * m.a * m.a);
    const double w = h_halfwidth(m);
    auto f = [&m, k](double x) { return h_eval(m, x) * std::cos(k * x); };
    return quad::integrate(quad::RealFn(f), -w, w, qs).value.real();
}

double pi_variance(const OneDimModel& m, const quad::Settings& qs) {
    check_model(m);
    if (m.gaussian_h) return 0.5 * m.c;
    // <Pi^2> = (c/2pi) int_0^inf q hhat(q)^2 dq, both mode sectors included
    const double qmax = 40.0 / m.a;
    auto f = [&m, &qs](double q) { return q * std::pow(hhat_cos(m, q, qs), 2); };
    return m.c / (2.0 * M_PI) *
           quad::integrate(quad::RealFn(f), 0.0, qmax, qs).value.real();
}

double closed_A(const OneDimModel& m, double x_alpha, double t, const quad::Settings& qs) {
    check_model(m);
    const AutoCorr ac = autocorrelation(m, qs);
    const double ct = m.c * t;
    return 0.25 * m.g * (ac.H(x_alpha - ct) + ac.H(x_alpha + ct) - 2.0 * ac.H(x_alpha));
}

double closed_B(const OneDimModel& m, double x_alpha, double t, const quad::Settings& qs) {
    check_model(m);
    if (t == 0.0) return 0.0;
    const AutoCorr ac = autocorrelation(m, qs);
    const double ct = m.c * t;
    // 1/((ct)^2 - x^2) split into simple poles at x = +-ct:
    //   B = (g/4pi) [ PV int H(x_a + x)/(x + ct) dx - PV int H(x_a + x)/(x - ct) dx ]
    const double W = ac.support;
    auto pv_term = [&](double pole) {
        const double lo = std::min(-x_alpha - W, pole - W);
        const double hi = std::max(-x_alpha + W, pole + W);
        auto f = [&ac, x_alpha, pole](double x) { return ac.H(x_alpha + x) / (x - pole); };
        return quad::principal_value(f, lo, hi, pole, qs);
    };
    return m.g / (4.0 * M_PI) * (pv_term(-ct) - pv_term(ct));
}

double ln_F12_closed(const OneDimModel& m, double t, const quad::Settings& qs) {
    check_model(m);
    if (t == 0.0) return 0.0;
    const AutoCorr ac = autocorrelation(m, qs);
    const double ct = m.c * std::abs(t);
    const double W = ac.support;
    // integrable log singularities at x = 0 and x = -ct sit on panel edges
    std::vector<double> breaks{-W - ct, -ct, 0.0, W};
    std::sort(breaks.begin(), breaks.end());
    auto f = [&ac, ct](double x) {
        return quad::Complex(std::log(std::abs(1.0 + ct / x)) * ac.H(x), 0.0);
    };
    const double I = quad::integrate_segments(f, breaks, qs).value.real();
    return -2.0 * m.g * m.g / (M_PI * m.c) * I;
}

double closed_F12(const OneDimModel& m, double t, const quad::Settings& qs) {
    return std::exp(ln_F12_closed(m, t, qs));
}

model::SpectralData export_spectral(const OneDimModel& m) {
    check_model(m);
    const double g = m.g, c = m.c;
    const double cutoff = m.gaussian_h ? 9.0 * c / m.a : 40.0 * c / m.a;
    const std::size_t P = m.probe_positions.size();
    model::SpectralData sd(2, P, cutoff);

    OneDimModel base = m;
    auto hh2 = [base](double w) {
        const double h = hhat_cos(base, w / base.c);
        return h * h;
    };

    sd.set_J(0, 1, [g, c, hh2](double w) { return 2.0 * g * g / (M_PI * c) * w * hh2(w); },
             1.0);

    for (std::size_t a = 0; a < P; ++a) {
        const double xa = m.probe_positions[a];
        // even-sector modes only couple to the system
        auto G1 = [g, c, xa, hh2](double w) {
            return quad::Complex(g * w / (2.0 * M_PI * c) * hh2(w) * std::cos(w * xa / c),
                                 0.0);
        };
        sd.set_G(a, 0, G1);
        sd.set_G(a, 1, [G1](double w) { return -G1(w); });
        for (std::size_t ap = a; ap < P; ++ap) {
            const double xap = m.probe_positions[ap];
            sd.set_overlap_density(a, ap, [c, xa, xap, hh2](double w) {
                return quad::Complex(
                    w / (2.0 * M_PI * c) * hh2(w) * std::cos(w * (xa - xap) / c), 0.0);
            });
        }
    }
    // lambda_2 = -lambda_1 real: both auxiliary moments vanish identically
    sd.set_phase_moments(0, 1, [](double) { return 0.0; }, [](double) { return 0.0; });
    return sd;
}

model::ProbeSet export_probes(const OneDimModel& m) {
    model::ProbeSet ps;
    for (double x : m.probe_positions) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "x%g", x);
        ps.labels.emplace_back(buf);
    }
    return ps;
}

XiData xi_gaussian_data(const OneDimModel& m, double t0, const quad::Settings& qs) {
    check_model(m);
    if (t0 < 0.0) throw std::invalid_argument("xi_gaussian_data: t0 must be >= 0");
    XiData xi;
    xi.x0 = m.c * t0;
    xi.variance = t0 == 0.0 ? 0.0 : -2.0 * ln_F12_closed(m, t0, qs);
    const OneDimModel base = m;
    const double x0 = xi.x0;
    xi.pi_profile = [base, x0, qs](double x) {
        auto f = [&base, x](double xp) { return h_eval(base, x - xp); };
        return -base.g / base.c *
               quad::integrate(quad::RealFn(f), -x0, x0, qs).value.real();
    };
    return xi;
}

FiniteRangeResult finite_range_lnFtilde(const OneDimModel& m, double D, double t,
                                        const quad::Settings& qs) {
    check_model(m);
    if (!m.gaussian_h)
        throw std::invalid_argument("finite_range_lnFtilde: Gaussian asymptotic only");
    if (!(D > 0.0)) throw std::invalid_argument("finite_range_lnFtilde: D must be positive");

    FiniteRangeResult r{};
    r.gbar = m.g * m.a / std::sqrt(m.c);
    r.asymptotic_reliable = D >= 5.0 * m.a;
    const double tau = m.c * t / m.a;

    // term 1: -sqrt(2/pi) int ln|1 + tau/x| e^{-x^2/2} dx
    if (t == 0.0) {
        r.term1 = 0.0;
    } else {
        std::vector<double> breaks{-12.0 - std::abs(tau), -std::abs(tau), 0.0, 12.0};
        std::sort(breaks.begin(), breaks.end());
        auto f1 = [tau](double x) {
            return quad::Complex(std::log(std::abs(1.0 + tau / x)) * std::exp(-0.5 * x * x),
                                 0.0);
        };
        r.term1 = -std::sqrt(2.0 / M_PI) *
                  quad::integrate_segments(f1, breaks, qs).value.real();
    }

    // term 2: (1/pi) [ PV int e^{-(ct/D)^2 x^2} / (1 - x^2) dx ]^2
    const double k = m.c * t / D;
    double pv = 0.0;
    if (t > 0.0) {
        const double win = std::max(12.0 / std::max(k, 1e-3), 3.0);
        auto f2m = [k](double x) {
            return std::exp(-k * k * x * x) / ((1.0 - x) * (1.0 + x));
        };
        // poles at +-1; split the domain between them
        const double lo = -win, hi = win;
        const double pv_left = quad::principal_value(f2m, lo, 0.0, -1.0, qs);
        const double pv_right = quad::principal_value(f2m, 0.0, hi, 1.0, qs);
        pv = pv_left + pv_right;
    }
    r.term2 = pv * pv / M_PI;
    r.asymptotic = r.gbar * r.gbar * (r.term1 + r.term2);

    // exact route: ln F12 + 2 B_D^2 / <Pi_D^2> with H replaced by the
    // h x h_D cross-correlation; Gaussian closed forms throughout.
    const double a2 = m.a * m.a, D2 = D * D;
    const double amp = std::sqrt(M_PI) * m.a * D / std::sqrt(a2 + D2);
    auto Ccorr = [amp, a2, D2](double x) { return amp * std::exp(-x * x / (a2 + D2)); };
    const double ct = m.c * t;
    double BD = 0.0;
    if (t > 0.0) {
        const double W = 10.0 * std::sqrt(a2 + D2);
        auto pv_term = [&](double pole) {
            auto f = [&Ccorr, pole](double x) { return Ccorr(x) / (x - pole); };
            return quad::principal_value(f, std::min(-W, pole - W),
                                         std::max(W, pole + W), pole, qs);
        };
        BD = m.g / (4.0 * M_PI) * (pv_term(-ct) - pv_term(ct));
    }
    const double varD = 0.5 * m.c; // scale invariant for Gaussian probes
    r.exact = ln_F12_closed(m, t, qs) + 2.0 * BD * BD / varD;
    return r;
}

} // namespace bmeter::onedim
