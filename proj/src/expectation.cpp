#include "bmeter/expectation.hpp"

#include <cmath>

namespace bmeter::expectation {

using generating::K_diag;
using generating::K_offdiag;
using generating::moment;

ObservableSpec ObservableSpec::scalar(const Eigen::MatrixXcd& O) {
    ObservableSpec obs;
    obs.levels = static_cast<std::size_t>(O.rows());
    const double herm = (O - O.adjoint()).cwiseAbs().maxCoeff();
    obs.hermitian = herm <= 1e-12;
    for (std::size_t l = 0; l < obs.levels; ++l)
        for (std::size_t lp = 0; lp < obs.levels; ++lp) {
            if (obs.hermitian && lp < l) continue;
            obs.blocks[{l, lp}] = ScalarBlock{O(l, lp)};
        }
    return obs;
}

ObservableSpec ObservableSpec::projector(const Eigen::VectorXcd& u) {
    return scalar(Eigen::MatrixXcd(u * u.adjoint()));
}

ObservableSpec ObservableSpec::probe_moment(std::size_t levels,
                                            std::vector<unsigned> powers) {
    ObservableSpec obs;
    obs.levels = levels;
    obs.hermitian = true;
    for (std::size_t l = 0; l < levels; ++l)
        for (std::size_t lp = l; lp < levels; ++lp)
            obs.blocks[{l, lp}] = MomentBlock{powers};
    return obs;
}

namespace {

double delta_of(const KernelSlice& s, std::size_t alpha) {
    if (!s.has_C) throw std::runtime_error("probability: kernel slice lacks correlations");
    const double var = 2.0 * s.C(alpha, alpha).real(); // C_aa = <Pi^2>/2
    if (!(var > 0.0)) throw std::runtime_error("probability: <Pi_a^2> must be positive");
    return std::sqrt(2.0 * var);
}

/// <e^{itH_l} O_{ll'} e^{-itH_l'}> for one block.
Complex block_sandwich(const KernelSlice& s, std::size_t l, std::size_t lp,
                       const Block& block) {
    if (const auto* sc = std::get_if<ScalarBlock>(&block)) {
        if (l == lp) return sc->value;
        std::vector<double> X0(s.probes(), 0.0);
        return sc->value * K_offdiag(s, l, lp, X0);
    }
    if (const auto* mb = std::get_if<MomentBlock>(&block))
        return mb->coeff * moment(s, l, lp, mb->powers);
    const auto& db = std::get<DeltaProbeBlock>(block);

    // Fourier transform of the Gaussian generating function in closed form:
    // (1/2pi) int dx e^{-ipx} K_{ll'}(t; x) = exp((L - ip)^2 / Delta^2) / (sqrt(pi) Delta)
    const std::size_t a = db.probe;
    const double delta = delta_of(s, a);
    Complex L;
    Complex pref;
    if (l == lp) {
        L = Complex(0.0, 2.0 * s.A(a, l));
        pref = 1.0;
    } else {
        L = Complex(-s.B(a, l) + s.B(a, lp), s.A(a, l) + s.A(a, lp));
        pref = std::polar(s.F_abs(l, lp), s.has_phase ? s.phi(l, lp) : 0.0);
    }
    const Complex arg = (L - Complex(0.0, db.p)) / delta;
    return db.coeff * pref * std::exp(arg * arg) / (std::sqrt(M_PI) * delta);
}

} // namespace

Complex expectation_value(const SystemSpec& spec, const KernelSlice& s,
                          const ObservableSpec& obs) {
    if (spec.levels() != obs.levels)
        throw std::invalid_argument("expectation_value: level count mismatch");
    const double t = s.t;
    Complex diag = 0.0;
    for (std::size_t l = 0; l < obs.levels; ++l) {
        auto it = obs.blocks.find({l, l});
        if (it == obs.blocks.end()) continue;
        diag += spec.rho0(l, l) * block_sandwich(s, l, l, it->second);
    }

    Complex coh = 0.0;
    for (std::size_t l = 0; l < obs.levels; ++l)
        for (std::size_t lp = l + 1; lp < obs.levels; ++lp) {
            const Complex osc =
                std::polar(1.0, t * (spec.energies[l] - spec.energies[lp]));
            auto upper = obs.blocks.find({l, lp});
            if (upper != obs.blocks.end()) {
                const Complex v =
                    spec.rho0(lp, l) * osc * block_sandwich(s, l, lp, upper->second);
                if (obs.hermitian)
                    coh += 2.0 * v.real();
                else
                    coh += v;
            }
            if (!obs.hermitian) {
                auto lower = obs.blocks.find({lp, l});
                if (lower != obs.blocks.end())
                    coh += spec.rho0(l, lp) * std::conj(osc) *
                           block_sandwich(s, lp, l, lower->second);
            } else if (upper == obs.blocks.end()) {
                auto lower = obs.blocks.find({lp, l});
                // O_{ll'} = O_{l'l}^dag: the sandwich is the conjugate of the
                // reversed one, <e^{itH_l} B^dag e^{-itH_l'}> = conj(<e^{itH_l'} B e^{-itH_l}>)
                if (lower != obs.blocks.end())
                    coh += 2.0 * (spec.rho0(lp, l) * osc *
                                  std::conj(block_sandwich(s, lp, l, lower->second)))
                                     .real();
            }
        }

    const Complex value = diag + coh;
    if (obs.hermitian && std::abs(value.imag()) > 1e-10 * std::max(1.0, std::abs(value)))
        throw std::runtime_error("expectation_value: hermitian observable with imaginary part");
    return value;
}

Complex effective_expectation(const SystemSpec& spec, const KernelSlice& s,
                              const ObservableSpec& obs) {
    if (spec.levels() != obs.levels)
        throw std::invalid_argument("effective_expectation: level count mismatch");
    Complex diag = 0.0;
    for (std::size_t l = 0; l < obs.levels; ++l) {
        auto it = obs.blocks.find({l, l});
        if (it == obs.blocks.end()) continue;
        diag += spec.rho0(l, l) * block_sandwich(s, l, l, it->second);
    }
    return diag;
}

Complex quantum_residual(const SystemSpec& spec, const KernelSlice& s,
                         const ObservableSpec& obs) {
    return expectation_value(spec, s, obs) - effective_expectation(spec, s, obs);
}

std::vector<double> default_p_grid(const KernelSlice& s, std::size_t alpha,
                                   std::size_t points) {
    const double delta = delta_of(s, alpha);
    double qmax = 0.0;
    for (std::size_t l = 0; l < s.levels(); ++l)
        qmax = std::max(qmax, std::abs(2.0 * s.A(alpha, l) / delta));
    // cover every branch centre to +-8 in pbar so the grid carries all but
    // ~1e-11 of each Gaussian
    const double lim = qmax + 8.0;
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = delta * (-lim + 2.0 * lim * static_cast<double>(i) /
                                      static_cast<double>(points - 1));
    return grid;
}

ProbabilityResult joint_probability(const SystemSpec& spec, const KernelSlice& s,
                                    const Eigen::VectorXcd& u, std::size_t alpha,
                                    std::vector<double> p_grid) {
    const std::size_t L = spec.levels();
    if (static_cast<std::size_t>(u.size()) != L)
        throw std::invalid_argument("joint_probability: u dimension mismatch");
    if (std::abs(u.norm() - 1.0) > 1e-10)
        throw std::invalid_argument("joint_probability: u must be normalized");
    if (p_grid.empty()) p_grid = default_p_grid(s, alpha, 513);

    ProbabilityResult r;
    r.delta = delta_of(s, alpha);
    r.p_grid = std::move(p_grid);
    const std::size_t N = r.p_grid.size();
    r.total.assign(N, 0.0);
    r.separable.assign(N, 0.0);
    r.interference.assign(N, 0.0);

    const double delta = r.delta;
    const double norm = 1.0 / (std::sqrt(M_PI) * delta);
    const double t = s.t;

    for (std::size_t i = 0; i < N; ++i) {
        const double pbar = r.p_grid[i] / delta;
        double sep = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            const double Q = 2.0 * s.A(alpha, l) / delta;
            sep += spec.rho0(l, l).real() * std::norm(u(l)) *
                   std::exp(-(pbar - Q) * (pbar - Q));
        }
        sep *= norm;

        double inter = 0.0;
        for (std::size_t l = 0; l < L; ++l)
            for (std::size_t lp = l + 1; lp < L; ++lp) {
                const double Q = (s.A(alpha, l) + s.A(alpha, lp)) / delta;
                const double dB = s.B(alpha, l) - s.B(alpha, lp);
                const double Ftilde =
                    s.F_abs(l, lp) * std::exp(dB * dB / (delta * delta));
                const Complex phase =
                    std::polar(1.0, (s.has_phase ? s.phi(l, lp) : 0.0) +
                                        t * (spec.energies[l] - spec.energies[lp]) +
                                        2.0 * dB * (pbar - Q) / delta);
                const Complex coeff = u(l) * std::conj(u(lp)) * spec.rho0(lp, l) * phase;
                inter += 2.0 * Ftilde * norm * std::exp(-(pbar - Q) * (pbar - Q)) *
                         coeff.real();
            }

        r.separable[i] = sep;
        r.interference[i] = inter;
        r.total[i] = sep + inter;
    }

    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < N; ++i)
        integral += 0.5 * (r.total[i] + r.total[i + 1]) * (r.p_grid[i + 1] - r.p_grid[i]);
    r.norm_check = integral;
    return r;
}

std::vector<double> conditional_probability(const SystemSpec& spec, const KernelSlice& s,
                                            const Eigen::VectorXcd& u, std::size_t alpha,
                                            std::vector<double> p_grid) {
    const Complex den = expectation_value(spec, s, ObservableSpec::projector(u));
    if (den.real() < 1e-12)
        throw std::runtime_error("conditional_probability: conditioning on null event");
    ProbabilityResult joint = joint_probability(spec, s, u, alpha, std::move(p_grid));
    std::vector<double> out(joint.total.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = joint.total[i] / den.real();
    return out;
}

} // namespace bmeter::expectation
