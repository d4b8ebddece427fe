#pragma once

#include <functional>
#include <vector>

#include "bmeter/model.hpp"
#include "bmeter/quadrature.hpp"

namespace bmeter::onedim {

using RealFn = std::function<double(double)>;

/// Two-level system coupled to a one-dimensional free field through an even
/// test function h of width a. The default h(x) = exp(-x^2/a^2). Internally
/// everything is evaluated with the field at T = 0.
struct OneDimModel {
    double g = 1.0; // coupling, units sqrt(c)/a
    double a = 1.0; // test-function width
    double c = 1.0; // propagation speed
    std::vector<double> probe_positions{0.0};

    bool gaussian_h = true;
    RealFn h_custom;          // used when gaussian_h is false
    double h_support = 0.0;   // half-width beyond which h_custom < 1e-12
};

/// H(x) = int h(x') h(x - x') dx'; analytic for the Gaussian default,
/// numerical self-convolution otherwise.
struct AutoCorr {
    RealFn H;
    double H0;       // H(0) = int h^2
    double support;  // effective half-width of H
};

AutoCorr autocorrelation(const OneDimModel& m, const quad::Settings& qs = {});

/// Cosine transform int h(x) cos(kx) dx.
double hhat_cos(const OneDimModel& m, double k, const quad::Settings& qs = {});

/// <Pi_alpha^2> in the field ground state (position independent; c/2 for the
/// Gaussian default).
double pi_variance(const OneDimModel& m, const quad::Settings& qs = {});

// Closed forms for level l = 1 (negate for l = 2).
double closed_A(const OneDimModel& m, double x_alpha, double t,
                const quad::Settings& qs = {});
double closed_B(const OneDimModel& m, double x_alpha, double t,
                const quad::Settings& qs = {});
double ln_F12_closed(const OneDimModel& m, double t, const quad::Settings& qs = {});
double closed_F12(const OneDimModel& m, double t, const quad::Settings& qs = {});

/// Continuum spectral content equivalent to the model: J = (2g^2/pi c) w hhat^2,
/// G, probe overlaps, and identically vanishing phase moments.
model::SpectralData export_spectral(const OneDimModel& m);
model::ProbeSet export_probes(const OneDimModel& m);

/// Gaussian data of the finite-time displacement observable: its thermal
/// variance (equal to -2 ln F12(t0)) and the smeared-box weight its field
/// part carries, supported on |x| <~ c t0.
struct XiData {
    double variance;
    double x0; // c * t0
    RealFn pi_profile;
};

XiData xi_gaussian_data(const OneDimModel& m, double t0, const quad::Settings& qs = {});

/// Finite-range probe of width D: exact ln F~12 through the general kernel
/// route, and the two-term large-D asymptotic (Gaussian h and h_D).
struct FiniteRangeResult {
    double term1;       // asymptotic decoherence term, in units gbar^2
    double term2;       // asymptotic probe-memory term, in units gbar^2
    double asymptotic;  // gbar^2 * (term1 + term2)
    double exact;       // ln F~12 via the general route
    double gbar;
    bool asymptotic_reliable; // false when D < 5a
};

FiniteRangeResult finite_range_lnFtilde(const OneDimModel& m, double D, double t,
                                        const quad::Settings& qs = {});

} // namespace bmeter::onedim
