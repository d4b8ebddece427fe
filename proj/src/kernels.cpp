#include "bmeter/kernels.hpp"

#include <cmath>
#include <ostream>

#include "bmeter/csv.hpp"

namespace bmeter::kernels {

using quad::Weight;

double kernel_A(const SpectralData& sd, std::size_t alpha, std::size_t l, double t,
                const quad::Settings& qs) {
    if (t == 0.0) return 0.0;
    auto f = [&sd, alpha, l, t](double w) { return sd.G(alpha, l, w) * quad::expi_m1(w * t); };
    return quad::integrate_semi_infinite(f, Weight::inv_omega, t, 0.0,
                                         sd.omega_cutoff(), qs)
        .value.real();
}

double kernel_B(const SpectralData& sd, std::size_t alpha, std::size_t l, double t,
                double temperature, const quad::Settings& qs) {
    if (t == 0.0) return 0.0;
    auto f = [&sd, alpha, l, t](double w) { return sd.G(alpha, l, w) * quad::expi_m1(w * t); };
    return quad::integrate_semi_infinite(f, Weight::inv_omega_coth, t, temperature,
                                         sd.omega_cutoff(), qs)
        .value.imag();
}

double kernel_ln_F_abs(const SpectralData& sd, std::size_t l, std::size_t lp, double t,
                       double temperature, const quad::Settings& qs) {
    if (l == lp) throw std::invalid_argument("kernel_F_abs: need l != l'");
    if (t == 0.0) return 0.0;
    auto f = [&sd, l, lp, t](double w) {
        const double sh = std::sin(0.5 * w * t);
        return sd.J(l, lp, w) * sh * sh;
    };
    auto cf = [&f](double w) { return Complex(f(w), 0.0); };
    const double v = quad::integrate_semi_infinite(cf, Weight::inv_omega_sq_coth, t,
                                                   temperature, sd.omega_cutoff(), qs)
                         .value.real();
    return -2.0 * v;
}

double kernel_F_abs(const SpectralData& sd, std::size_t l, std::size_t lp, double t,
                    double temperature, const quad::Settings& qs) {
    return std::exp(kernel_ln_F_abs(sd, l, lp, t, temperature, qs));
}

double kernel_phase(const SpectralData& sd, std::size_t l, std::size_t lp, double t,
                    const quad::Settings& qs) {
    if (!sd.has_phase_moments())
        throw std::runtime_error("kernel_phase: phase unavailable (no spectral moments)");
    if (t == 0.0) return 0.0;
    auto f = [&sd, l, lp, t](double w) {
        const double sh = std::sin(0.5 * w * t);
        return Complex(sd.phase_D(l, lp, w) * quad::x_minus_sin(w * t) +
                           4.0 * sd.phase_I(l, lp, w) * sh * sh,
                       0.0);
    };
    // weight 1/w^2 without the thermal factor: reuse the coth weight at T = 0
    return quad::integrate_semi_infinite(f, Weight::inv_omega_sq_coth, t, 0.0,
                                         sd.omega_cutoff(), qs)
        .value.real();
}

Complex thermal_correlation(const SpectralData& sd, const ProbeSet& probes,
                            std::size_t alpha, std::size_t alphap, double temperature,
                            const quad::Settings& qs) {
    if (probes.mu_overlap) {
        const auto& m = *probes.mu_overlap;
        Complex v = m(static_cast<Eigen::Index>(alpha), static_cast<Eigen::Index>(alphap));
        // stored as the full <Pi_a Pi_a'>; halve the diagonal below
        if (alpha == alphap) return 0.5 * v;
        return v;
    }
    if (!sd.has_overlaps())
        throw std::runtime_error("thermal_correlation: missing overlap density");
    const double T = temperature;
    // Re M picks up the thermal factor coth(w/2T) = [w Re M] * coth/w;
    // Im M is temperature independent.
    auto re_w = [&sd, alpha, alphap](double w) {
        return Complex(w * sd.overlap_density(alpha, alphap, w).real(), 0.0);
    };
    const double re_v =
        quad::integrate_semi_infinite(re_w, Weight::inv_omega_coth, 0.0, T,
                                      sd.omega_cutoff(), qs)
            .value.real();
    auto im = [&sd, alpha, alphap](double w) {
        return Complex(sd.overlap_density(alpha, alphap, w).imag(), 0.0);
    };
    const double im_v =
        quad::integrate_semi_infinite(im, Weight::none, 0.0, T, sd.omega_cutoff(), qs)
            .value.real();
    Complex full(re_v, im_v);
    if (alpha == alphap) return 0.5 * full;
    return full;
}

Complex correlation_function(const SpectralData& sd, std::size_t alpha, std::size_t l,
                             double t, double temperature, const quad::Settings& qs) {
    const double T = temperature;
    auto f = [&sd, alpha, l, t, T](double w) {
        const Complex ge = sd.G(alpha, l, w) * std::polar(1.0, w * t);
        return Complex(ge.real() * quad::coth_half(w, T), ge.imag());
    };
    return quad::integrate_semi_infinite(f, Weight::none, t, T, sd.omega_cutoff(), qs)
        .value;
}

KernelSlice kernel_slice(const SpectralData& sd, const ProbeSet& probes, double t,
                         double temperature, const quad::Settings& qs) {
    const std::size_t L = sd.levels();
    const std::size_t P = sd.probes();
    KernelSlice s;
    s.t = t;
    s.F_abs = Eigen::MatrixXd::Identity(L, L);
    s.phi = Eigen::MatrixXd::Zero(L, L);
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t lp = l + 1; lp < L; ++lp) {
            const double F = kernel_F_abs(sd, l, lp, t, temperature, qs);
            s.F_abs(l, lp) = s.F_abs(lp, l) = F;
        }
    s.has_phase = sd.has_phase_moments();
    if (s.has_phase)
        for (std::size_t l = 0; l < L; ++l)
            for (std::size_t lp = l + 1; lp < L; ++lp) {
                const double p = kernel_phase(sd, l, lp, t, qs);
                s.phi(l, lp) = p;
                s.phi(lp, l) = -p;
            }

    if (sd.has_G()) {
        s.A.resize(P, L);
        s.B.resize(P, L);
        for (std::size_t a = 0; a < P; ++a)
            for (std::size_t l = 0; l < L; ++l) {
                s.A(a, l) = kernel_A(sd, a, l, t, qs);
                s.B(a, l) = kernel_B(sd, a, l, t, temperature, qs);
            }
        s.has_AB = true;
    }
    if (sd.has_overlaps() || probes.mu_overlap) {
        s.C.resize(P, P);
        for (std::size_t a = 0; a < P; ++a)
            for (std::size_t ap = a; ap < P; ++ap) {
                const Complex c = thermal_correlation(sd, probes, a, ap, temperature, qs);
                s.C(a, ap) = c;
                if (ap != a) s.C(ap, a) = std::conj(c);
            }
        s.has_C = true;
    } else {
        s.C.resize(0, 0);
    }
    return s;
}

TimeKernels compute_time_kernels(const SpectralData& sd, const ProbeSet& probes,
                                 const std::vector<double>& times, double temperature,
                                 const quad::Settings& qs) {
    TimeKernels tk;
    tk.times = times;
    tk.slices.resize(times.size());
    const std::int64_t n = static_cast<std::int64_t>(times.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < n; ++i)
        tk.slices[i] = kernel_slice(sd, probes, times[i], temperature, qs);
    return tk;
}

TimeKernels compute_time_kernels_serial(const SpectralData& sd, const ProbeSet& probes,
                                        const std::vector<double>& times,
                                        double temperature, const quad::Settings& qs) {
    TimeKernels tk;
    tk.times = times;
    tk.slices.reserve(times.size());
    for (double t : times)
        tk.slices.push_back(kernel_slice(sd, probes, t, temperature, qs));
    return tk;
}

DecoherenceInfo classify_decoherence(double s_exponent) {
    if (!(s_exponent > 0.0))
        throw std::invalid_argument("classify_decoherence: s must be positive");
    if (std::abs(s_exponent - 2.0) < 1e-12) return {DecoherenceClass::marginal, 0.0};
    if (s_exponent < 2.0)
        return {DecoherenceClass::diverging_log_F, 2.0 - s_exponent};
    return {DecoherenceClass::plateau, 0.0};
}

void write_kernels_csv(std::ostream& os, const TimeKernels& tk,
                       const std::vector<std::string>& probe_labels) {
    if (tk.slices.empty()) return;
    const auto& first = tk.slices.front();
    const std::size_t L = first.levels();
    const std::size_t P = first.has_AB ? static_cast<std::size_t>(first.A.rows()) : 0;

    csv::Row header;
    header.add("t");
    auto plabel = [&probe_labels](std::size_t a) {
        return a < probe_labels.size() ? probe_labels[a] : std::to_string(a);
    };
    for (std::size_t a = 0; a < P; ++a)
        for (std::size_t l = 0; l < L; ++l) {
            header.add("A[" + plabel(a) + "," + std::to_string(l + 1) + "]");
            header.add("B[" + plabel(a) + "," + std::to_string(l + 1) + "]");
        }
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t lp = l + 1; lp < L; ++lp) {
            header.add("F_abs[" + std::to_string(l + 1) + "," + std::to_string(lp + 1) + "]");
            if (first.has_phase)
                header.add("phi[" + std::to_string(l + 1) + "," + std::to_string(lp + 1) + "]");
        }
    header.write(os);

    for (std::size_t i = 0; i < tk.slices.size(); ++i) {
        const auto& s = tk.slices[i];
        csv::Row row;
        row.add(tk.times[i]);
        for (std::size_t a = 0; a < P; ++a)
            for (std::size_t l = 0; l < L; ++l) {
                row.add(s.A(a, l));
                row.add(s.B(a, l));
            }
        for (std::size_t l = 0; l < L; ++l)
            for (std::size_t lp = l + 1; lp < L; ++lp) {
                row.add(s.F_abs(l, lp));
                if (s.has_phase) row.add(s.phi(l, lp));
            }
        row.write(os);
    }
}

} // namespace bmeter::kernels
