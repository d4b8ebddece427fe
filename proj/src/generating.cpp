#include "bmeter/generating.hpp"

#include <cmath>
#include <map>

namespace bmeter::generating {

namespace {

void require(const KernelSlice& s, std::size_t probes_needed) {
    if (!s.has_C || !s.has_AB)
        throw std::runtime_error("generating: kernel slice lacks A/B/C entries");
    if (s.probes() < probes_needed)
        throw std::runtime_error("generating: missing kernel entry for requested probe");
}

/// -sum_{a<=a'} X_a X_a' C_aa'
Complex quadratic_exponent(const KernelSlice& s, const std::vector<double>& X) {
    Complex q = 0.0;
    for (std::size_t a = 0; a < X.size(); ++a)
        for (std::size_t ap = a; ap < X.size(); ++ap)
            q -= X[a] * X[ap] * s.C(a, ap);
    return q;
}

Complex F_complex(const KernelSlice& s, std::size_t l, std::size_t lp) {
    return std::polar(s.F_abs(l, lp), s.has_phase ? s.phi(l, lp) : 0.0);
}

struct GaussianForm {
    Complex prefactor;
    std::vector<Complex> linear;   // coefficient of X_a in the exponent
    Eigen::MatrixXcd quadratic;    // symmetric M with exponent -1/2 X^T M X
};

GaussianForm form_for(const KernelSlice& s, std::size_t l, std::size_t lp,
                      std::size_t probes) {
    GaussianForm g;
    g.linear.resize(probes);
    g.quadratic.resize(probes, probes);
    for (std::size_t a = 0; a < probes; ++a) {
        g.quadratic(a, a) = 2.0 * s.C(a, a); // C_aa stores <Pi_a^2>/2
        for (std::size_t ap = a + 1; ap < probes; ++ap) {
            g.quadratic(a, ap) = s.C(a, ap);
            g.quadratic(ap, a) = s.C(a, ap); // symmetric, not Hermitian
        }
    }
    if (l == lp) {
        g.prefactor = 1.0;
        for (std::size_t a = 0; a < probes; ++a)
            g.linear[a] = Complex(0.0, 2.0 * s.A(a, l));
    } else {
        g.prefactor = F_complex(s, l, lp);
        for (std::size_t a = 0; a < probes; ++a)
            g.linear[a] = Complex(-s.B(a, l) + s.B(a, lp), s.A(a, l) + s.A(a, lp));
    }
    return g;
}

} // namespace

Complex K_diag(const KernelSlice& s, std::size_t l, const std::vector<double>& X) {
    require(s, X.size());
    Complex expo = quadratic_exponent(s, X);
    for (std::size_t a = 0; a < X.size(); ++a)
        expo += Complex(0.0, 2.0 * X[a] * s.A(a, l));
    return std::exp(expo);
}

Complex K_offdiag(const KernelSlice& s, std::size_t l, std::size_t lp,
                  const std::vector<double>& X, bool* phase_assumed_zero) {
    if (l == lp) throw std::invalid_argument("K_offdiag: need l != l'");
    require(s, X.size());
    if (phase_assumed_zero) *phase_assumed_zero = !s.has_phase;
    Complex expo = quadratic_exponent(s, X);
    for (std::size_t a = 0; a < X.size(); ++a)
        expo += X[a] * Complex(-s.B(a, l) + s.B(a, lp), s.A(a, l) + s.A(a, lp));
    return F_complex(s, l, lp) * std::exp(expo);
}

Complex moment(const KernelSlice& s, std::size_t l, std::size_t lp,
               const std::vector<unsigned>& powers) {
    unsigned total = 0;
    for (unsigned n : powers) total += n;
    if (total > 8)
        throw std::invalid_argument("moment: total differentiation order capped at 8");
    if (total == 0) return l == lp ? Complex(1.0) : F_complex(s, l, lp);
    require(s, powers.size());

    const GaussianForm g = form_for(s, l, lp, powers.size());

    // m(n) = d^n exp(L.X - X^T M X / 2) at X = 0, by the recursion
    // m(n) = L_b m(n - e_b) - sum_c M_bc (n - e_b)_c m(n - e_b - e_c).
    std::map<std::vector<unsigned>, Complex> memo;
    std::function<Complex(std::vector<unsigned>&)> eval =
        [&](std::vector<unsigned>& n) -> Complex {
        std::size_t b = n.size();
        for (std::size_t i = 0; i < n.size(); ++i)
            if (n[i] > 0) { b = i; break; }
        if (b == n.size()) return 1.0;
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
        const std::vector<unsigned> key = n;

        n[b] -= 1;
        Complex v = g.linear[b] * eval(n);
        for (std::size_t c = 0; c < n.size(); ++c) {
            if (n[c] == 0) continue;
            const double mult = static_cast<double>(n[c]);
            n[c] -= 1;
            v -= g.quadratic(b, c) * mult * eval(n);
            n[c] += 1;
        }
        n[b] += 1;
        memo.emplace(key, v);
        return v;
    };

    std::vector<unsigned> n = powers;
    const Complex deriv = eval(n);
    // each X-derivative of the generating function pulls down i Pi_a
    const Complex minus_i(0.0, -1.0);
    Complex phase = 1.0;
    for (unsigned k = 0; k < total; ++k) phase *= minus_i;
    return phase * g.prefactor * deriv;
}

} // namespace bmeter::generating
