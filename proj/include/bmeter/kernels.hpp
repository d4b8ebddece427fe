#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "bmeter/model.hpp"
#include "bmeter/quadrature.hpp"

namespace bmeter::kernels {

using Complex = std::complex<double>;
using model::ProbeSet;
using model::SpectralData;

/// All time-kernel values at one instant, in the layout the generating
/// functions consume. A and B are (probe x level); C is the full Hermitian
/// probe correlation matrix with C_aa = <Pi_a^2>/2; F_abs and phi are
/// (level x level) with unit diagonal / zero diagonal.
struct KernelSlice {
    double t = 0.0;
    Eigen::MatrixXd A, B;
    Eigen::MatrixXcd C;
    Eigen::MatrixXd F_abs, phi;
    bool has_AB = false;
    bool has_C = false;
    bool has_phase = false;

    std::size_t probes() const { return static_cast<std::size_t>(C.rows()); }
    std::size_t levels() const { return static_cast<std::size_t>(F_abs.rows()); }
};

/// Kernels sampled on a time grid; the cache consumed by the probability
/// and Bell machinery.
struct TimeKernels {
    std::vector<double> times;
    std::vector<KernelSlice> slices;
};

// Scalar kernel evaluations (continuum quadrature).
double kernel_A(const SpectralData& sd, std::size_t alpha, std::size_t l, double t,
                const quad::Settings& qs = {});
double kernel_B(const SpectralData& sd, std::size_t alpha, std::size_t l, double t,
                double temperature, const quad::Settings& qs = {});
double kernel_ln_F_abs(const SpectralData& sd, std::size_t l, std::size_t lp, double t,
                       double temperature, const quad::Settings& qs = {});
double kernel_F_abs(const SpectralData& sd, std::size_t l, std::size_t lp, double t,
                    double temperature, const quad::Settings& qs = {});
/// Phase of F_{ll'}; requires the auxiliary spectral moments.
double kernel_phase(const SpectralData& sd, std::size_t l, std::size_t lp, double t,
                    const quad::Settings& qs = {});
/// Static correlation C_{aa'}; diagonal entries are <Pi_a^2>/2.
Complex thermal_correlation(const SpectralData& sd, const ProbeSet& probes,
                            std::size_t alpha, std::size_t alphap, double temperature,
                            const quad::Settings& qs = {});
/// <Pi_l Pi_a(t)> at thermal equilibrium; the integrand of the identity
/// B - iA = int_0^t <Pi_l Pi_a(t')> dt'.
Complex correlation_function(const SpectralData& sd, std::size_t alpha, std::size_t l,
                             double t, double temperature,
                             const quad::Settings& qs = {});

KernelSlice kernel_slice(const SpectralData& sd, const ProbeSet& probes, double t,
                         double temperature, const quad::Settings& qs = {});

/// Grid evaluation; data-parallel over time points.
TimeKernels compute_time_kernels(const SpectralData& sd, const ProbeSet& probes,
                                 const std::vector<double>& times, double temperature,
                                 const quad::Settings& qs = {});
/// Plain sequential implementation kept as the reference for the parallel
/// path; produces bit-identical slices.
TimeKernels compute_time_kernels_serial(const SpectralData& sd, const ProbeSet& probes,
                                        const std::vector<double>& times,
                                        double temperature,
                                        const quad::Settings& qs = {});

enum class DecoherenceClass { diverging_log_F, marginal, plateau };

struct DecoherenceInfo {
    DecoherenceClass cls;
    double growth_exponent; // 2 - s when diverging, else 0
};

/// Long-time behaviour of ln|F| from the low-frequency exponent s.
DecoherenceInfo classify_decoherence(double s_exponent);

void write_kernels_csv(std::ostream& os, const TimeKernels& tk,
                       const std::vector<std::string>& probe_labels);

} // namespace bmeter::kernels
