#include "bmeter/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace bmeter::quad {

void Settings::check() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
        throw std::invalid_argument("quadrature: tolerances must be positive");
    if (max_subdivisions < 1)
        throw std::invalid_argument("quadrature: max_subdivisions must be >= 1");
}

double x_minus_sin(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x3 = x * x * x;
        return x3 / 6.0 - x3 * x * x / 120.0;
    }
    return x - std::sin(x);
}

double coth_half(double omega, double temperature) {
    if (temperature == 0.0) return 1.0;
    const double x = omega / (2.0 * temperature);
    if (x > 30.0) return 1.0;
    return 1.0 / std::tanh(x);
}

namespace {

// 15-point Kronrod / 7-point Gauss pair (positive abscissae).
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {
    0.1294849661688697, 0.2797053914892767,
    0.3818300505051189, 0.4179591836734694};

struct Segment {
    double a, b;
    Complex value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const ComplexFn& f, double a, double b) {
    const double centr = 0.5 * (a + b);
    const double hlgth = 0.5 * (b - a);

    Complex fv[15];
    const Complex fc = f(centr);
    fv[7] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = hlgth * kXgk[j];
        fv[j] = f(centr - dx);
        fv[14 - j] = f(centr + dx);
    }

    Complex resg = kWg[3] * fc;
    Complex resk = kWgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const Complex sum = fv[j] + fv[14 - j];
        resk += kWgk[j] * sum;
        if (j % 2 == 1) resg += kWg[j / 2] * sum;
    }

    // QUADPACK-style scaled error with the mean-deviation norm.
    const Complex reskh = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fc - reskh);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[j] - reskh) + std::abs(fv[14 - j] - reskh));
    resasc *= std::abs(hlgth);

    double err = std::abs(resk - resg) * std::abs(hlgth) * 200.0;
    if (resasc != 0.0)
        err = resasc * std::min(1.0, std::pow(err / resasc, 1.5));

    return {a, b, resk * hlgth, err};
}

Result adapt(const ComplexFn& f, const std::vector<double>& breaks, const Settings& s) {
    s.check();
    std::priority_queue<Segment> heap;
    Complex total{0.0, 0.0};
    double total_err = 0.0;
    int subdivisions = 0;

    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i] == breaks[i + 1]) continue;
        Segment seg = gk15(f, breaks[i], breaks[i + 1]);
        total += seg.value;
        total_err += seg.error;
        heap.push(seg);
    }

    while (total_err > std::max(s.rel_tol * std::abs(total), s.abs_tol) &&
           subdivisions < s.max_subdivisions && !heap.empty()) {
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) continue; // interval exhausted
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }

    Result r;
    r.value = total;
    r.error = total_err;
    r.subdivisions = subdivisions;
    r.converged = total_err <= std::max(s.rel_tol * std::abs(total), s.abs_tol);
    return r;
}

} // namespace

Result integrate(const ComplexFn& f, double a, double b, const Settings& s) {
    return adapt(f, {a, b}, s);
}

Result integrate(const RealFn& f, double a, double b, const Settings& s) {
    return adapt([&f](double x) { return Complex(f(x), 0.0); }, {a, b}, s);
}

Result integrate_segments(const ComplexFn& f, const std::vector<double>& breakpoints,
                          const Settings& s) {
    return adapt(f, breakpoints, s);
}

Result integrate_semi_infinite(const ComplexFn& f, Weight weight, double t,
                               double temperature, double cutoff,
                               const Settings& s) {
    s.check();
    if (!(cutoff > 0.0))
        throw std::invalid_argument("integrate_semi_infinite: cutoff must be positive");
    if (temperature < 0.0)
        throw std::invalid_argument("integrate_semi_infinite: negative temperature");

    const double T = temperature;
    auto weighted = [&f, weight, T](double w) -> Complex {
        switch (weight) {
            case Weight::none:
                return f(w);
            case Weight::inv_omega:
                return f(w) / w;
            case Weight::inv_omega_coth:
                return f(w) * (coth_half(w, T) / w);
            case Weight::inv_omega_sq_coth:
                return f(w) * (coth_half(w, T) / (w * w));
        }
        return {0.0, 0.0};
    };

    // Finite part [0, cutoff], zero-aligned for oscillatory integrands.
    std::vector<double> breaks;
    breaks.push_back(0.0);
    const double at = std::abs(t);
    if (s.oscillation_splitting && at * cutoff > 20.0) {
        const double step = M_PI / at;
        const std::size_t max_segments = 1 << 14;
        if (cutoff / step <= static_cast<double>(max_segments)) {
            for (double w = step; w < cutoff; w += step) breaks.push_back(w);
        } else {
            // too many zeros to enumerate; fall back to a coarse partition
            for (int i = 1; i < 64; ++i)
                breaks.push_back(cutoff * i / 64.0);
        }
    }
    breaks.push_back(cutoff);

    Result finite = adapt(weighted, breaks, s);

    // Tail [cutoff, inf) through w = cutoff + u/(1-u).
    auto tail = [&weighted, cutoff](double u) -> Complex {
        const double den = 1.0 - u;
        const double w = cutoff + u / den;
        return weighted(w) / (den * den);
    };
    Settings ts = s;
    ts.abs_tol = std::max(s.abs_tol, 1e-3 * s.rel_tol * std::abs(finite.value));
    Result tail_r = adapt(tail, {0.0, 1.0 - 1e-12}, ts);

    Result r;
    r.value = finite.value + tail_r.value;
    r.error = finite.error + tail_r.error;
    r.subdivisions = finite.subdivisions + tail_r.subdivisions;
    r.converged = finite.converged && tail_r.converged;
    if (!r.converged)
        throw QuadratureError("integrate_semi_infinite: no convergence after max_subdivisions",
                              r.value, r.error);
    return r;
}

double integrate_semi_infinite_real(const RealFn& f, Weight weight, double t,
                                    double temperature, double cutoff,
                                    const Settings& s) {
    auto cf = [&f](double w) { return Complex(f(w), 0.0); };
    return integrate_semi_infinite(cf, weight, t, temperature, cutoff, s).value.real();
}

double principal_value(const RealFn& f, double a, double b, double pole,
                       const Settings& s) {
    s.check();
    if (!(a < b)) throw std::invalid_argument("principal_value: empty interval");
    if (pole == a || pole == b)
        throw std::invalid_argument("principal_value: pole at domain boundary");

    auto cf = [&f](double x) { return Complex(f(x), 0.0); };

    if (pole < a || pole > b) return adapt(cf, {a, b}, s).value.real();

    const double r = std::min(pole - a, b - pole);
    // Symmetrized combination: the 1/u singularities cancel analytically.
    // The offset is snapped to the floating-point grid around the pole so the
    // two evaluation points are exactly symmetric; otherwise rounding noise
    // of size eps/u^2 masquerades as structure and defeats the refinement.
    auto sym = [&f, pole](double u) {
        const double snapped = (pole + u) - pole;
        if (snapped <= 0.0) return Complex(0.0, 0.0); // below resolution: measure ~ eps
        return Complex(f(pole + snapped) + f(pole - snapped), 0.0);
    };

    // Keep the innermost stretch a single panel so evaluation points stay
    // away from the cancellation-dominated region u -> 0.
    const double delta = 1e-3 * r;
    Result inner = adapt(sym, {0.0, delta, r}, s);

    double outer = 0.0;
    double outer_err = 0.0;
    if (pole - r > a) {
        Result lr = adapt(cf, {a, pole - r}, s);
        outer += lr.value.real();
        outer_err += lr.error;
    }
    if (pole + r < b) {
        Result rr = adapt(cf, {pole + r, b}, s);
        outer += rr.value.real();
        outer_err += rr.error;
    }

    if (!inner.converged)
        throw QuadratureError("principal_value: no convergence after max_subdivisions",
                              inner.value + outer, inner.error + outer_err);
    return inner.value.real() + outer;
}

} // namespace bmeter::quad
