#pragma once

#include <string>
#include <vector>

#include "bmeter/oracle.hpp"
#include "bmeter/quadrature.hpp"

namespace bmeter::verification {

struct CheckResult {
    std::string name;
    bool pass;
    double measured;  // worst deviation observed
    double tolerance;
};

/// Randomized <= 2-mode discrete models, fixed seed: the Gaussian generating
/// functions evaluated from exact mode sums against truncated-Fock exact
/// propagation, within 1e-6.
std::vector<CheckResult> gaussian_algebra_suite(std::size_t cases,
                                                unsigned seed = 20260810);

/// One-dimensional route equivalence on a (x_alpha, t) lattice: closed forms
/// vs continuum quadrature on the exported spectral data (1e-6) vs
/// discrete-mode sums at L = 100 a (1e-3).
std::vector<CheckResult> route_equivalence_suite(bool quick,
                                                 const quad::Settings& qs = {});

bool all_pass(const std::vector<CheckResult>& checks);

} // namespace bmeter::verification
