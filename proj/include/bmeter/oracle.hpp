#pragma once

#include <Eigen/Dense>
#include <complex>
#include <limits>
#include <vector>

#include "bmeter/kernels.hpp"
#include "bmeter/onedim.hpp"

namespace bmeter::oracle {

using Complex = std::complex<double>;

/// Finite collection of modes with explicit couplings; the pre-continuum
/// form every continuum formula is checked against.
struct DiscreteModel {
    std::vector<double> omegas;
    std::vector<std::vector<Complex>> lambdas; // [level][mode]
    std::vector<std::vector<Complex>> mus;     // [probe][mode]
    double recurrence_time = std::numeric_limits<double>::infinity();

    std::size_t modes() const { return omegas.size(); }
    std::size_t levels() const { return lambdas.size(); }
    std::size_t probes() const { return mus.size(); }
    void check() const;
};

/// Appendix-style mode expansion of the one-dimensional model on [-L, L]:
/// q = n pi / 2L, even-sector modes carry the coupling, both sectors carry
/// the probes. Valid for t well below the recurrence time 2L/c.
DiscreteModel discretize_onedim(const onedim::OneDimModel& m, double half_length,
                                std::size_t n_modes);

/// Exact finite sums for all kernels at one instant.
kernels::KernelSlice discrete_slice(const DiscreteModel& dm, double t, double temperature);
kernels::TimeKernels discrete_time_kernels(const DiscreteModel& dm,
                                           const std::vector<double>& times,
                                           double temperature);

struct FockTruncation {
    int n_max = 20; // occupation cutoff per mode
};

/// Dense truncated-Fock evaluation of the generating function
/// <e^{itH_l} prod_a e^{iX_a Pi_a} e^{-itH_l'}> by exact propagation.
/// Throws if the truncation tail (thermal weights or evolved occupation at
/// the top Fock layer) exceeds 1e-10.
Complex fock_generating(const DiscreteModel& dm, const FockTruncation& trunc,
                        std::size_t l, std::size_t lp, double t,
                        const std::vector<double>& X, double temperature);

/// <e^{itH_l} Pi_a e^{-itH_l}> by exact propagation (displaced-frame check).
double fock_mean_probe(const DiscreteModel& dm, const FockTruncation& trunc,
                       std::size_t l, double t, std::size_t alpha, double temperature);

/// e^{-itH_l} on the truncated space (exposed for unitarity checks).
Eigen::MatrixXcd fock_propagator(const DiscreteModel& dm, const FockTruncation& trunc,
                                 std::size_t l, double t);

} // namespace bmeter::oracle
