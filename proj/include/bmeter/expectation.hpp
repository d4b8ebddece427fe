#pragma once

#include <Eigen/Dense>
#include <map>
#include <variant>
#include <vector>

#include "bmeter/generating.hpp"
#include "bmeter/kernels.hpp"
#include "bmeter/model.hpp"

namespace bmeter::expectation {

using Complex = std::complex<double>;
using kernels::KernelSlice;
using model::SystemSpec;

/// One apparatus-side block O_{ll'}: a plain number, a canonically ordered
/// probe-moment product, or the delta-probe density delta(Pi_a - p).
struct ScalarBlock {
    Complex value;
};
struct MomentBlock {
    std::vector<unsigned> powers; // per probe
    Complex coeff{1.0, 0.0};
};
struct DeltaProbeBlock {
    std::size_t probe;
    double p;
    Complex coeff{1.0, 0.0};
};
using Block = std::variant<ScalarBlock, MomentBlock, DeltaProbeBlock>;

/// Observable of the complete system, O = sum |l><l'| x O_{ll'}. With the
/// hermitian flag only blocks with l <= l' are consulted; the mirror blocks
/// are their adjoints by construction.
struct ObservableSpec {
    std::size_t levels = 2;
    bool hermitian = true;
    std::map<std::pair<std::size_t, std::size_t>, Block> blocks;

    static ObservableSpec scalar(const Eigen::MatrixXcd& O);
    static ObservableSpec projector(const Eigen::VectorXcd& u);
    static ObservableSpec probe_moment(std::size_t levels, std::vector<unsigned> powers);
};

/// Eq.-of-motion expectation value at the slice's time: diagonal term plus
/// twice the real part of the level-coherence term.
Complex expectation_value(const SystemSpec& spec, const KernelSlice& s,
                          const ObservableSpec& obs);

/// Prediction of the time-dependent separable state: the diagonal term only.
Complex effective_expectation(const SystemSpec& spec, const KernelSlice& s,
                              const ObservableSpec& obs);

/// expectation_value - effective_expectation: the quantum-interference
/// residual, identically zero for level-diagonal observables.
Complex quantum_residual(const SystemSpec& spec, const KernelSlice& s,
                         const ObservableSpec& obs);

struct ProbabilityResult {
    std::vector<double> p_grid;
    std::vector<double> total;
    std::vector<double> separable;
    std::vector<double> interference;
    double delta = 0.0;      // sqrt(2 <Pi_a^2>)
    double norm_check = 0.0; // trapezoid integral of total over the grid
};

/// Joint density of finding the system in |u> and probe alpha at value p,
/// evaluated in closed Gaussian form on p_grid. An empty grid selects the
/// default 513-point grid covering every Gaussian branch (|pbar| <= 8 around
/// the branch centres).
ProbabilityResult joint_probability(const SystemSpec& spec, const KernelSlice& s,
                                    const Eigen::VectorXcd& u, std::size_t alpha,
                                    std::vector<double> p_grid = {});

/// joint_probability.total divided by <|u><u|>(t); errors out when
/// conditioning on a null event.
std::vector<double> conditional_probability(const SystemSpec& spec, const KernelSlice& s,
                                            const Eigen::VectorXcd& u, std::size_t alpha,
                                            std::vector<double> p_grid = {});

/// Default p grid for the probe's branch structure at this slice.
std::vector<double> default_p_grid(const KernelSlice& s, std::size_t alpha,
                                   std::size_t points = 513);

} // namespace bmeter::expectation
