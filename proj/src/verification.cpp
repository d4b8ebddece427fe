#include "bmeter/verification.hpp"

#include <cmath>
#include <random>

#include "bmeter/generating.hpp"
#include "bmeter/kernels.hpp"

namespace bmeter::verification {

using Complex = std::complex<double>;

namespace {

struct RandomCase {
    oracle::DiscreteModel dm;
    double t;
    std::vector<double> X;
};

std::vector<RandomCase> make_cases(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uw(0.5, 3.0);
    std::uniform_real_distribution<double> uc(-0.35, 0.35);
    std::uniform_real_distribution<double> ux(-0.6, 0.6);
    std::uniform_real_distribution<double> ut(0.0, 5.0);
    std::uniform_int_distribution<int> umodes(1, 2);
    std::uniform_int_distribution<int> uprobes(1, 2);

    std::vector<RandomCase> cases;
    for (std::size_t i = 0; i < n; ++i) {
        RandomCase rc;
        const int Q = umodes(rng);
        const int P = uprobes(rng);
        std::vector<double> ws;
        for (int q = 0; q < Q; ++q) ws.push_back(uw(rng));
        std::sort(ws.begin(), ws.end());
        for (int q = 1; q < Q; ++q)
            if (ws[q] - ws[q - 1] < 1e-3) ws[q] += 0.05;
        rc.dm.omegas = ws;
        rc.dm.lambdas.assign(2, std::vector<Complex>(Q));
        rc.dm.mus.assign(P, std::vector<Complex>(Q));
        for (int l = 0; l < 2; ++l)
            for (int q = 0; q < Q; ++q) rc.dm.lambdas[l][q] = Complex(uc(rng), uc(rng));
        for (int p = 0; p < P; ++p)
            for (int q = 0; q < Q; ++q) rc.dm.mus[p][q] = Complex(uc(rng), uc(rng));
        rc.t = ut(rng);
        for (int p = 0; p < P; ++p) rc.X.push_back(ux(rng));
        cases.push_back(std::move(rc));
    }
    return cases;
}

} // namespace

std::vector<CheckResult> gaussian_algebra_suite(std::size_t n, unsigned seed) {
    const auto cases = make_cases(n, seed);
    const oracle::FockTruncation trunc{20};

    double worst_diag = 0.0, worst_off = 0.0;
    const std::int64_t nn = static_cast<std::int64_t>(cases.size());
#pragma omp parallel for schedule(dynamic) reduction(max : worst_diag, worst_off)
    for (std::int64_t i = 0; i < nn; ++i) {
        const auto& rc = cases[i];
        const kernels::KernelSlice slice = oracle::discrete_slice(rc.dm, rc.t, 0.0);
        const Complex kd = generating::K_diag(slice, 0, rc.X);
        const Complex ko = generating::K_offdiag(slice, 0, 1, rc.X);
        const Complex fd = oracle::fock_generating(rc.dm, trunc, 0, 0, rc.t, rc.X, 0.0);
        const Complex fo = oracle::fock_generating(rc.dm, trunc, 0, 1, rc.t, rc.X, 0.0);
        worst_diag = std::max(worst_diag, std::abs(kd - fd));
        worst_off = std::max(worst_off, std::abs(ko - fo));
    }

    return {
        {"K_diag vs truncated-Fock (" + std::to_string(n) + " random cases)",
         worst_diag < 1e-6, worst_diag, 1e-6},
        {"K_offdiag vs truncated-Fock (" + std::to_string(n) + " random cases)",
         worst_off < 1e-6, worst_off, 1e-6},
    };
}

std::vector<CheckResult> route_equivalence_suite(bool quick, const quad::Settings& qs) {
    onedim::OneDimModel m;
    m.g = 2.5;
    m.a = 1.0;
    m.c = 1.0;
    m.probe_positions = {0.0, 2.0};

    const model::SpectralData sd = onedim::export_spectral(m);
    const oracle::DiscreteModel dm = oracle::discretize_onedim(m, 100.0, 1300);

    const std::vector<double> ts =
        quick ? std::vector<double>{0.5, 3.0} : std::vector<double>{0.5, 1.0, 2.0, 3.0, 5.0, 8.0};

    double closed_vs_cont_A = 0.0, closed_vs_cont_B = 0.0, closed_vs_cont_F = 0.0;
    double closed_vs_disc_A = 0.0, closed_vs_disc_B = 0.0, closed_vs_disc_F = 0.0;

    std::vector<std::pair<std::size_t, double>> lattice;
    for (std::size_t a = 0; a < m.probe_positions.size(); ++a)
        for (double t : ts) lattice.emplace_back(a, t);

    const std::int64_t n = static_cast<std::int64_t>(lattice.size());
#pragma omp parallel for schedule(dynamic) \
    reduction(max : closed_vs_cont_A, closed_vs_cont_B, closed_vs_cont_F, \
                  closed_vs_disc_A, closed_vs_disc_B, closed_vs_disc_F)
    for (std::int64_t i = 0; i < n; ++i) {
        const std::size_t a = lattice[i].first;
        const double t = lattice[i].second;
        const double xa = m.probe_positions[a];

        const double Ac = onedim::closed_A(m, xa, t, qs);
        const double Bc = onedim::closed_B(m, xa, t, qs);
        const double Fc = onedim::closed_F12(m, t, qs);

        const double Aq = kernels::kernel_A(sd, a, 0, t, qs);
        const double Bq = kernels::kernel_B(sd, a, 0, t, 0.0, qs);
        const double Fq = kernels::kernel_F_abs(sd, 0, 1, t, 0.0, qs);

        const kernels::KernelSlice ds = oracle::discrete_slice(dm, t, 0.0);

        closed_vs_cont_A = std::max(closed_vs_cont_A, std::abs(Ac - Aq));
        closed_vs_cont_B = std::max(closed_vs_cont_B, std::abs(Bc - Bq));
        closed_vs_cont_F = std::max(closed_vs_cont_F, std::abs(Fc - Fq));
        closed_vs_disc_A = std::max(closed_vs_disc_A, std::abs(Ac - ds.A(a, 0)));
        closed_vs_disc_B = std::max(closed_vs_disc_B, std::abs(Bc - ds.B(a, 0)));
        closed_vs_disc_F = std::max(closed_vs_disc_F, std::abs(Fc - ds.F_abs(0, 1)));
    }

    return {
        {"closed A vs continuum quadrature", closed_vs_cont_A < 1e-6, closed_vs_cont_A, 1e-6},
        {"closed B vs continuum quadrature", closed_vs_cont_B < 1e-6, closed_vs_cont_B, 1e-6},
        {"closed F12 vs continuum quadrature", closed_vs_cont_F < 1e-6, closed_vs_cont_F, 1e-6},
        {"closed A vs discrete modes (L=100a)", closed_vs_disc_A < 1e-3, closed_vs_disc_A, 1e-3},
        {"closed B vs discrete modes (L=100a)", closed_vs_disc_B < 1e-3, closed_vs_disc_B, 1e-3},
        {"closed F12 vs discrete modes (L=100a)", closed_vs_disc_F < 1e-3, closed_vs_disc_F, 1e-3},
    };
}

bool all_pass(const std::vector<CheckResult>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

} // namespace bmeter::verification
