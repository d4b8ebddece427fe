#include "bmeter/model.hpp"

#include <cmath>
#include <sstream>

namespace bmeter::model {

SpectralData::SpectralData(std::size_t levels, std::size_t probes, double omega_cutoff)
    : levels_(levels), probes_(probes), cutoff_(omega_cutoff) {
    if (levels < 2) throw std::invalid_argument("SpectralData: need at least 2 levels");
    if (!(omega_cutoff > 0.0))
        throw std::invalid_argument("SpectralData: cutoff must be positive");
    const std::size_t np = levels * (levels - 1) / 2;
    J_.resize(np);
    s_.assign(np, 1.0);
    D_.resize(np);
    I_.resize(np);
    G_.resize(probes * levels);
    M_.resize(probes * (probes + 1) / 2);
}

std::size_t SpectralData::pair_index(std::size_t l, std::size_t lp) const {
    if (l > lp) std::swap(l, lp);
    // offset of pair (l, lp) with l < lp in row-major upper triangle
    return l * levels_ - l * (l + 1) / 2 + (lp - l - 1);
}

void SpectralData::set_J(std::size_t l, std::size_t lp, RealFn J, double s_exponent) {
    if (l == lp) throw std::invalid_argument("set_J: diagonal J is identically zero");
    const std::size_t p = pair_index(l, lp);
    J_[p] = std::move(J);
    s_[p] = s_exponent;
}

void SpectralData::set_G(std::size_t alpha, std::size_t l, ComplexFn G) {
    G_[alpha * levels_ + l] = std::move(G);
    has_G_ = true;
}

void SpectralData::set_overlap_density(std::size_t alpha, std::size_t alphap, ComplexFn M) {
    if (alpha > alphap) std::swap(alpha, alphap);
    M_[alpha * probes_ - alpha * (alpha + 1) / 2 + alphap] = std::move(M);
    has_M_ = true;
}

void SpectralData::set_phase_moments(std::size_t l, std::size_t lp, RealFn D, RealFn I) {
    const std::size_t p = pair_index(l, lp);
    D_[p] = std::move(D);
    I_[p] = std::move(I);
    has_phase_ = true;
}

double SpectralData::J(std::size_t l, std::size_t lp, double w) const {
    if (l == lp) return 0.0;
    const auto& f = J_[pair_index(l, lp)];
    return f ? f(w) : 0.0;
}

Complex SpectralData::G(std::size_t alpha, std::size_t l, double w) const {
    const auto& f = G_[alpha * levels_ + l];
    if (!f) throw std::runtime_error("SpectralData: G not set for requested (probe, level)");
    return f(w);
}

Complex SpectralData::overlap_density(std::size_t alpha, std::size_t alphap, double w) const {
    const bool swapped = alpha > alphap;
    if (swapped) std::swap(alpha, alphap);
    const auto& f = M_[alpha * probes_ - alpha * (alpha + 1) / 2 + alphap];
    if (!f) throw std::runtime_error("SpectralData: overlap density not set");
    const Complex v = f(w);
    return swapped ? std::conj(v) : v;
}

double SpectralData::phase_D(std::size_t l, std::size_t lp, double w) const {
    const auto& f = D_[pair_index(l, lp)];
    if (!f) throw std::runtime_error("SpectralData: phase unavailable");
    const double v = f(w);
    return l < lp ? v : -v;
}

double SpectralData::phase_I(std::size_t l, std::size_t lp, double w) const {
    const auto& f = I_[pair_index(l, lp)];
    if (!f) throw std::runtime_error("SpectralData: phase unavailable");
    const double v = f(w);
    return l < lp ? v : -v;
}

double SpectralData::s_exponent(std::size_t l, std::size_t lp) const {
    return s_[pair_index(l, lp)];
}

std::string ValidationReport::str() const {
    std::ostringstream os;
    for (const auto& i : issues) {
        os << i.where << ": " << i.what;
        if (std::isfinite(i.omega)) os << " (omega = " << i.omega << ")";
        os << "\n";
    }
    return os.str();
}

namespace {

void check_low_frequency(const ValidationReport&, std::vector<ValidationIssue>& issues,
                         const std::function<double(double)>& f, double cutoff,
                         const std::string& where) {
    // The function must visibly decay toward omega -> 0: compare the value
    // ten decades in with the value two decades in.
    const double ref = std::abs(f(1e-2 * cutoff));
    const double near = std::abs(f(1e-12 * cutoff));
    for (double w : {1e-2 * cutoff, 1e-7 * cutoff, 1e-12 * cutoff}) {
        if (!std::isfinite(f(w))) {
            issues.push_back({"non-finite sample", where, w});
            return;
        }
    }
    const double floor = 1e-14 * std::max(1.0, ref);
    if (near > 0.5 * ref + floor)
        issues.push_back({"does not vanish at omega -> 0", where, 1e-12 * cutoff});
}

} // namespace

ValidationReport validate_model(const SystemSpec& spec, const SpectralData& sd,
                                const ProbeSet& probes) {
    ValidationReport rep;
    auto& issues = rep.issues;

    const std::size_t L = spec.levels();
    if (L < 2) issues.push_back({"need at least 2 levels", "system.energies"});
    if (static_cast<std::size_t>(spec.rho0.rows()) != L ||
        static_cast<std::size_t>(spec.rho0.cols()) != L)
        issues.push_back({"rho0 dimension does not match energies", "system.rho0"});
    if (spec.temperature < 0.0)
        issues.push_back({"temperature must be nonnegative", "system.temperature"});

    if (static_cast<std::size_t>(spec.rho0.rows()) == L && L >= 2) {
        const double herm = (spec.rho0 - spec.rho0.adjoint()).cwiseAbs().maxCoeff();
        if (herm > 1e-12)
            issues.push_back({"rho0 is not Hermitian to 1e-12", "system.rho0"});
        const double tr = std::abs(spec.rho0.trace() - Complex(1.0, 0.0));
        if (tr > 1e-12)
            issues.push_back({"rho0 trace differs from 1 by more than 1e-12", "system.rho0"});
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            0.5 * (spec.rho0 + spec.rho0.adjoint()));
        if (es.info() == Eigen::Success && es.eigenvalues().minCoeff() < -1e-12)
            issues.push_back({"rho0 is not positive semidefinite", "system.rho0"});
    }

    if (sd.levels() != L)
        issues.push_back({"spectral data level count does not match system", "spectral"});
    if (sd.has_G() && sd.probes() != probes.size())
        issues.push_back({"spectral probe count does not match probe set", "probes"});

    const double wc = sd.omega_cutoff();
    const std::size_t SL = sd.levels();
    for (std::size_t l = 0; l < SL; ++l) {
        for (std::size_t lp = l + 1; lp < SL; ++lp) {
            const std::string where =
                "J[" + std::to_string(l) + "," + std::to_string(lp) + "]";
            bool finite = true;
            for (int k = 0; k < 24 && finite; ++k) {
                const double w = wc * std::pow(10.0, -6.0 + 6.0 * k / 23.0);
                const double v = sd.J(l, lp, w);
                if (!std::isfinite(v)) {
                    issues.push_back({"non-finite sample", where, w});
                    finite = false;
                } else if (v < -1e-14) {
                    issues.push_back({"negative spectral density", where, w});
                    finite = false;
                }
            }
            if (finite)
                check_low_frequency(rep, issues,
                                    [&](double w) { return sd.J(l, lp, w); }, wc, where);
        }
    }

    if (sd.has_G()) {
        for (std::size_t a = 0; a < sd.probes(); ++a) {
            for (std::size_t l = 0; l < SL; ++l) {
                const std::string where =
                    "G[" + std::to_string(a) + "," + std::to_string(l) + "]";
                bool finite = true;
                for (int k = 0; k < 12 && finite; ++k) {
                    const double w = wc * std::pow(10.0, -6.0 + 6.0 * k / 11.0);
                    const Complex v = sd.G(a, l, w);
                    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                        issues.push_back({"non-finite sample", where, w});
                        finite = false;
                    }
                }
                if (!finite) continue;
                check_low_frequency(rep, issues,
                                    [&](double w) { return sd.G(a, l, w).real(); }, wc,
                                    where + ".re");
                check_low_frequency(rep, issues,
                                    [&](double w) { return w * sd.G(a, l, w).imag(); }, wc,
                                    where + ".w_im");
            }
        }
    }

    if (probes.mu_overlap) {
        const auto& m = *probes.mu_overlap;
        if (m.rows() != m.cols() ||
            static_cast<std::size_t>(m.rows()) != probes.size())
            issues.push_back({"mu_overlap dimension mismatch", "probes.mu_overlap"});
        else if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
            issues.push_back({"mu_overlap is not Hermitian", "probes.mu_overlap"});
    }

    return rep;
}

SpectralData make_ohmic(double lambda, double omega_c) {
    return make_power_law(lambda, 1.0, omega_c);
}

SpectralData make_power_law(double lambda, double s, double omega_c) {
    if (!(s > 0.0)) throw std::invalid_argument("power-law family: s must be positive");
    if (!(omega_c > 0.0)) throw std::invalid_argument("power-law family: omega_c must be positive");
    // cutoff where w^s e^{-w/wc} has dropped below ~1e-16 of its peak
    SpectralData sd(2, 0, omega_c * (40.0 + 8.0 * s));
    sd.set_J(0, 1,
             [lambda, s, omega_c](double w) {
                 return lambda * std::pow(w, s) * std::exp(-w / omega_c);
             },
             s);
    return sd;
}

} // namespace bmeter::model
