#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bmeter/quadrature.hpp"

namespace bmeter::model {

using Complex = std::complex<double>;
using RealFn = std::function<double(double)>;
using ComplexFn = std::function<Complex(double)>;

/// Measured-system data: level energies E_l, initial density matrix and
/// apparatus temperature. Units hbar = k_B = 1 throughout.
struct SystemSpec {
    std::vector<double> energies;
    Eigen::MatrixXcd rho0;
    double temperature = 0.0;

    std::size_t levels() const { return energies.size(); }
};

/// Probe bookkeeping. The optional static overlap matrix short-circuits the
/// correlation quadrature when <Pi_a Pi_a'> is known analytically.
struct ProbeSet {
    std::vector<std::string> labels;
    std::optional<Eigen::MatrixXcd> mu_overlap;

    std::size_t size() const { return labels.size(); }
};

/// Continuum content of the coupling after the large-apparatus limit.
/// All functions live on omega > 0 and must be negligible beyond
/// omega_cutoff. Index conventions: levels l = 0..L-1, probes a = 0..P-1.
///
/// Families carried:
///   J_{ll'}(w)   density of |lambda_l - lambda_l'|^2   (decoherence factor)
///   G_a^{(l)}(w) density of mu_a lambda_l^*            (response kernels A, B)
///   M_{aa'}(w)   density of mu_a' mu_a^*               (static correlations)
///   D_{ll'}(w)   density of |lambda_l'|^2 - |lambda_l|^2   (phase, optional)
///   I_{ll'}(w)   density of Im(lambda_l' lambda_l^*)       (phase, optional)
class SpectralData {
public:
    SpectralData(std::size_t levels, std::size_t probes, double omega_cutoff);
    SpectralData() = default;

    std::size_t levels() const { return levels_; }
    std::size_t probes() const { return probes_; }
    double omega_cutoff() const { return cutoff_; }

    void set_J(std::size_t l, std::size_t lp, RealFn J, double s_exponent);
    void set_G(std::size_t alpha, std::size_t l, ComplexFn G);
    void set_overlap_density(std::size_t alpha, std::size_t alphap, ComplexFn M);
    void set_phase_moments(std::size_t l, std::size_t lp, RealFn D, RealFn I);

    // J is symmetric with vanishing diagonal by construction.
    double J(std::size_t l, std::size_t lp, double w) const;
    Complex G(std::size_t alpha, std::size_t l, double w) const;
    Complex overlap_density(std::size_t alpha, std::size_t alphap, double w) const;
    double phase_D(std::size_t l, std::size_t lp, double w) const;
    double phase_I(std::size_t l, std::size_t lp, double w) const;

    double s_exponent(std::size_t l, std::size_t lp) const;

    bool has_G() const { return has_G_; }
    bool has_overlaps() const { return has_M_; }
    bool has_phase_moments() const { return has_phase_; }

private:
    std::size_t pair_index(std::size_t l, std::size_t lp) const;

    std::size_t levels_ = 0, probes_ = 0;
    double cutoff_ = 0.0;
    std::vector<RealFn> J_;         // upper-triangle pairs l < l'
    std::vector<double> s_;
    std::vector<ComplexFn> G_;      // alpha * levels + l
    std::vector<ComplexFn> M_;      // upper-triangle incl. diagonal, probes
    std::vector<RealFn> D_, I_;     // pairs l < l'
    bool has_G_ = false, has_M_ = false, has_phase_ = false;
};

struct ValidationIssue {
    std::string what;
    std::string where;
    double omega = std::numeric_limits<double>::quiet_NaN();
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string str() const;
};

/// Checks the admissibility conditions for kernel evaluation: rho0 Hermitian,
/// positive semidefinite and normalized (1e-12), dimensions consistent,
/// J >= 0 and symmetric, and the low-frequency finiteness conditions
/// (J -> 0, Re G -> 0, w Im G -> 0 sampled over ten decades near 0).
ValidationReport validate_model(const SystemSpec& spec, const SpectralData& sd,
                                const ProbeSet& probes);

// Built-in two-level spectral families (J only; no probe content).
SpectralData make_ohmic(double lambda, double omega_c);
SpectralData make_power_law(double lambda, double s, double omega_c);

} // namespace bmeter::model
