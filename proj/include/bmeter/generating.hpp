#pragma once

#include <complex>
#include <vector>

#include "bmeter/kernels.hpp"

namespace bmeter::generating {

using Complex = std::complex<double>;
using kernels::KernelSlice;

/// K_{ll}(t; {X_a}) = exp(2i sum_a X_a A_a^{(l)} - sum_{a<=a'} X_a X_a' C_aa').
Complex K_diag(const KernelSlice& s, std::size_t l, const std::vector<double>& X);

/// K_{ll'}(t; {X_a}) = F_{ll'} exp(-sum XX'C + sum_a X_a [i(A^{(l)}+A^{(l')})
/// - B^{(l)} + B^{(l')}]). When the phase moments are unavailable F enters
/// with phase zero; *phase_assumed_zero reports that.
Complex K_offdiag(const KernelSlice& s, std::size_t l, std::size_t lp,
                  const std::vector<double>& X, bool* phase_assumed_zero = nullptr);

/// <e^{itH_l} prod_a Pi_a^{n_a} e^{-itH_l'}> by exact differentiation of the
/// Gaussian form (multivariate Hermite-style recursion, no numerical
/// differencing). Product ordering follows the probe index. Total order
/// capped at 8.
Complex moment(const KernelSlice& s, std::size_t l, std::size_t lp,
               const std::vector<unsigned>& powers);

} // namespace bmeter::generating
