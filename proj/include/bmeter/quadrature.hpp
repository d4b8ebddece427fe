#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmeter::quad {

using Complex = std::complex<double>;
using RealFn = std::function<double(double)>;
using ComplexFn = std::function<Complex(double)>;

struct Settings {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 5000;
    bool oscillation_splitting = true;

    void check() const;
};

struct Result {
    Complex value{0.0, 0.0};
    double error = 0.0;
    int subdivisions = 0;
    bool converged = true;
};

/// Thrown when the adaptive scheme stalls; carries the best estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, Complex best, double bound)
        : std::runtime_error(what), best_estimate(best), error_bound(bound) {}
    Complex best_estimate;
    double error_bound;
};

/// Semi-infinite weight factors, folded in analytically so callers never
/// regularize the omega -> 0 endpoint themselves. At T = 0 the coth
/// weights reduce exactly to 1/omega and 1/omega^2.
enum class Weight {
    none,              // 1
    inv_omega,         // 1/omega
    inv_omega_coth,    // 1/(tanh(omega/2T) * omega)
    inv_omega_sq_coth  // 1/(tanh(omega/2T) * omega^2)
};

// Adaptive Gauss-Kronrod (7-15) on a finite interval.
Result integrate(const ComplexFn& f, double a, double b, const Settings& s = {});
Result integrate(const RealFn& f, double a, double b, const Settings& s = {});

// Same, starting from a caller-supplied partition of [a, b].
Result integrate_segments(const ComplexFn& f, const std::vector<double>& breakpoints,
                          const Settings& s = {});

/// Integral of f(w) * weight(w) over w in (0, inf). The spectral function f
/// must be negligible beyond `cutoff`; the tail is folded through
/// w = cutoff + u/(1-u). `t` is metadata only: with oscillation_splitting
/// the finite part is pre-partitioned on zero-aligned intervals of length
/// pi/t. Throws QuadratureError on non-convergence.
Result integrate_semi_infinite(const ComplexFn& f, Weight weight, double t,
                               double temperature, double cutoff,
                               const Settings& s = {});

double integrate_semi_infinite_real(const RealFn& f, Weight weight, double t,
                                    double temperature, double cutoff,
                                    const Settings& s = {});

/// Cauchy principal value of the full integrand f over [a, b] with a simple
/// pole inside. The symmetric excision is performed analytically: on the
/// largest pole-centred window the combination f(pole+u) + f(pole-u) is
/// integrated over u > 0, the remainder normally. A pole at the boundary is
/// an error; a pole outside [a, b] degrades to a plain integral.
double principal_value(const RealFn& f, double a, double b, double pole,
                       const Settings& s = {});

/// e^{ix} - 1 without cancellation at small x.
inline Complex expi_m1(double x) {
    const double sh = std::sin(0.5 * x);
    return {-2.0 * sh * sh, std::sin(x)};
}

/// x - sin(x) without cancellation at small x.
double x_minus_sin(double x);

/// 1/tanh(w/2T); exactly 1 at T = 0.
double coth_half(double omega, double temperature);

} // namespace bmeter::quad
