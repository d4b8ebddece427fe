#include "bmeter/oracle.hpp"

#include <cmath>

namespace bmeter::oracle {

void DiscreteModel::check() const {
    if (omegas.empty()) throw std::invalid_argument("DiscreteModel: no modes");
    for (std::size_t q = 0; q < omegas.size(); ++q) {
        if (!(omegas[q] > 0.0))
            throw std::invalid_argument("DiscreteModel: frequencies must be positive");
        if (q > 0 && !(omegas[q] > omegas[q - 1]))
            throw std::invalid_argument("DiscreteModel: frequencies must increase");
    }
    for (const auto& lam : lambdas)
        if (lam.size() != omegas.size())
            throw std::invalid_argument("DiscreteModel: lambda size mismatch");
    for (const auto& mu : mus)
        if (mu.size() != omegas.size())
            throw std::invalid_argument("DiscreteModel: mu size mismatch");
}

DiscreteModel discretize_onedim(const onedim::OneDimModel& m, double half_length,
                                std::size_t n_modes) {
    if (!(half_length > 0.0)) throw std::invalid_argument("discretize_onedim: L must be positive");
    DiscreteModel dm;
    dm.recurrence_time = 2.0 * half_length / m.c;
    const std::size_t P = m.probe_positions.size();
    dm.lambdas.assign(2, std::vector<Complex>(n_modes));
    dm.mus.assign(P, std::vector<Complex>(n_modes));
    dm.omegas.resize(n_modes);
    for (std::size_t n = 1; n <= n_modes; ++n) {
        const double q = static_cast<double>(n) * M_PI / (2.0 * half_length);
        const double norm = std::sqrt(m.c * q / (2.0 * half_length));
        const double hq = onedim::hhat_cos(m, q);
        dm.omegas[n - 1] = m.c * q;
        const bool even = (n % 2 == 0); // 2Lq/pi = n
        if (even) {
            dm.lambdas[0][n - 1] = m.g * norm * hq;
            dm.lambdas[1][n - 1] = -m.g * norm * hq;
        } // zero otherwise
        for (std::size_t a = 0; a < P; ++a) {
            const double xa = m.probe_positions[a];
            dm.mus[a][n - 1] =
                even ? norm * hq * std::cos(q * xa) : -norm * hq * std::sin(q * xa);
        }
    }
    return dm;
}

kernels::KernelSlice discrete_slice(const DiscreteModel& dm, double t, double temperature) {
    dm.check();
    const std::size_t L = dm.levels();
    const std::size_t P = dm.probes();
    const std::size_t Q = dm.modes();

    kernels::KernelSlice s;
    s.t = t;
    s.A = Eigen::MatrixXd::Zero(P, L);
    s.B = Eigen::MatrixXd::Zero(P, L);
    s.C = Eigen::MatrixXcd::Zero(P, P);
    s.F_abs = Eigen::MatrixXd::Identity(L, L);
    s.phi = Eigen::MatrixXd::Zero(L, L);
    s.has_AB = s.has_C = s.has_phase = true;

    for (std::size_t q = 0; q < Q; ++q) {
        const double w = dm.omegas[q];
        const double coth = quad::coth_half(w, temperature);
        const Complex em1 = quad::expi_m1(w * t);
        const double sh = std::sin(0.5 * w * t);
        const double s2 = sh * sh;

        for (std::size_t a = 0; a < P; ++a) {
            for (std::size_t l = 0; l < L; ++l) {
                const Complex g = dm.mus[a][q] * std::conj(dm.lambdas[l][q]);
                s.A(a, l) += (g * em1).real() / w;
                s.B(a, l) += (g * em1).imag() * coth / w;
            }
            for (std::size_t ap = a; ap < P; ++ap) {
                const Complex mm = dm.mus[ap][q] * std::conj(dm.mus[a][q]);
                s.C(a, ap) += Complex(mm.real() * coth, mm.imag());
            }
        }
        for (std::size_t l = 0; l < L; ++l)
            for (std::size_t lp = l + 1; lp < L; ++lp) {
                const Complex dl = dm.lambdas[l][q] - dm.lambdas[lp][q];
                s.F_abs(l, lp) += -2.0 * std::norm(dl) * s2 * coth / (w * w); // ln F for now
                s.phi(l, lp) +=
                    ((std::norm(dm.lambdas[lp][q]) - std::norm(dm.lambdas[l][q])) *
                         quad::x_minus_sin(w * t) +
                     4.0 * (dm.lambdas[lp][q] * std::conj(dm.lambdas[l][q])).imag() * s2) /
                    (w * w);
            }
    }

    for (std::size_t a = 0; a < P; ++a) {
        s.C(a, a) *= 0.5;
        for (std::size_t ap = a + 1; ap < P; ++ap) s.C(ap, a) = std::conj(s.C(a, ap));
    }
    for (std::size_t l = 0; l < L; ++l)
        for (std::size_t lp = l + 1; lp < L; ++lp) {
            s.F_abs(l, lp) = std::exp(s.F_abs(l, lp)); // accumulator held ln F
            s.F_abs(lp, l) = s.F_abs(l, lp);
            s.phi(lp, l) = -s.phi(l, lp);
        }
    return s;
}

kernels::TimeKernels discrete_time_kernels(const DiscreteModel& dm,
                                           const std::vector<double>& times,
                                           double temperature) {
    kernels::TimeKernels tk;
    tk.times = times;
    tk.slices.reserve(times.size());
    for (double t : times) tk.slices.push_back(discrete_slice(dm, t, temperature));
    return tk;
}

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
    Eigen::MatrixXcd K(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return K;
}

struct FockSpace {
    std::size_t modes;
    int nmax;
    Eigen::Index dim;
    std::vector<Eigen::MatrixXcd> a; // annihilation per mode

    FockSpace(std::size_t m, int n) : modes(m), nmax(n) {
        if (m == 0 || m > 3)
            throw std::invalid_argument("fock oracle: 1 to 3 modes supported");
        const Eigen::Index d1 = nmax + 1;
        Eigen::MatrixXcd a1 = Eigen::MatrixXcd::Zero(d1, d1);
        for (int n2 = 1; n2 <= nmax; ++n2) a1(n2 - 1, n2) = std::sqrt(double(n2));
        Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d1, d1);
        for (std::size_t q = 0; q < modes; ++q) {
            Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(1, 1);
            for (std::size_t r = 0; r < modes; ++r) op = kron(op, r == q ? a1 : id);
            a.push_back(std::move(op));
        }
        dim = a[0].rows();
    }

    // occupation numbers of a basis index
    std::vector<int> occupations(Eigen::Index idx) const {
        std::vector<int> n(modes);
        const Eigen::Index d1 = nmax + 1;
        for (std::size_t q = modes; q-- > 0;) {
            n[q] = static_cast<int>(idx % d1);
            idx /= d1;
        }
        return n;
    }
};

Eigen::MatrixXcd build_H(const FockSpace& fs, const DiscreteModel& dm, std::size_t l) {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(fs.dim, fs.dim);
    for (std::size_t q = 0; q < fs.modes; ++q) {
        const auto& aq = fs.a[q];
        H += dm.omegas[q] * (aq.adjoint() * aq);
        H += dm.lambdas[l][q] * aq.adjoint() + std::conj(dm.lambdas[l][q]) * aq;
    }
    return H;
}

Eigen::MatrixXcd build_Pi(const FockSpace& fs, const DiscreteModel& dm, std::size_t alpha) {
    Eigen::MatrixXcd Pi = Eigen::MatrixXcd::Zero(fs.dim, fs.dim);
    for (std::size_t q = 0; q < fs.modes; ++q)
        Pi += dm.mus[alpha][q] * fs.a[q].adjoint() + std::conj(dm.mus[alpha][q]) * fs.a[q];
    return Pi;
}

Eigen::MatrixXcd hermitian_exp(const Eigen::MatrixXcd& H, Complex prefactor) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("fock oracle: eigendecomposition failed");
    Eigen::VectorXcd ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i)
        ph(i) = std::exp(prefactor * es.eigenvalues()(i));
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

/// Thermal occupation weights on the truncated space; throws if the
/// truncated-away mass exceeds 1e-10.
Eigen::VectorXd thermal_weights(const FockSpace& fs, const DiscreteModel& dm, double T) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(fs.dim);
    if (T == 0.0) {
        w(0) = 1.0;
        return w;
    }
    double covered = 1.0;
    std::vector<double> x(fs.modes);
    for (std::size_t q = 0; q < fs.modes; ++q) {
        x[q] = std::exp(-dm.omegas[q] / T);
        covered *= 1.0 - std::pow(x[q], fs.nmax + 1);
    }
    if (1.0 - covered > 1e-10)
        throw std::runtime_error("fock oracle: thermal tail above 1e-10, increase n_max");
    for (Eigen::Index i = 0; i < fs.dim; ++i) {
        const auto occ = fs.occupations(i);
        double wi = 1.0;
        for (std::size_t q = 0; q < fs.modes; ++q)
            wi *= (1.0 - x[q]) * std::pow(x[q], occ[q]);
        w(i) = wi;
    }
    return w;
}

/// Weighted occupation mass at the top Fock layer of K rho K^dagger.
double top_layer_mass(const FockSpace& fs, const Eigen::MatrixXcd& K,
                      const Eigen::VectorXd& w) {
    double mass = 0.0;
    for (Eigen::Index i = 0; i < fs.dim; ++i) {
        const auto occ = fs.occupations(i);
        bool top = false;
        for (int o : occ)
            if (o == fs.nmax) top = true;
        if (!top) continue;
        for (Eigen::Index n = 0; n < fs.dim; ++n) {
            if (w(n) == 0.0) continue;
            mass += w(n) * std::norm(K(i, n));
        }
    }
    return mass;
}

} // namespace

Complex fock_generating(const DiscreteModel& dm, const FockTruncation& trunc,
                        std::size_t l, std::size_t lp, double t,
                        const std::vector<double>& X, double temperature) {
    dm.check();
    if (X.size() != dm.probes())
        throw std::invalid_argument("fock_generating: X size must match probe count");
    FockSpace fs(dm.modes(), trunc.n_max);

    const Eigen::MatrixXcd Hl = build_H(fs, dm, l);
    const Eigen::MatrixXcd bra = hermitian_exp(Hl, Complex(0.0, t)); // e^{+itH_l}
    Eigen::MatrixXcd ket;                                            // e^{-itH_l'}
    if (lp == l)
        ket = bra.adjoint();
    else
        ket = hermitian_exp(build_H(fs, dm, lp), Complex(0.0, -t));

    Eigen::MatrixXcd G = Eigen::MatrixXcd::Identity(fs.dim, fs.dim);
    bool haveG = false;
    for (std::size_t a = 0; a < X.size(); ++a) {
        if (X[a] == 0.0) continue;
        const Eigen::MatrixXcd ga = hermitian_exp(build_Pi(fs, dm, a), Complex(0.0, X[a]));
        G = haveG ? Eigen::MatrixXcd(G * ga) : ga;
        haveG = true;
    }

    const Eigen::VectorXd w = thermal_weights(fs, dm, temperature);
    if (top_layer_mass(fs, ket, w) > 1e-10 ||
        (haveG && top_layer_mass(fs, Eigen::MatrixXcd(G * ket), w) > 1e-10))
        throw std::runtime_error("fock oracle: evolved tail above 1e-10, increase n_max");

    const Eigen::MatrixXcd M = haveG ? Eigen::MatrixXcd(bra * G * ket)
                                     : Eigen::MatrixXcd(bra * ket);
    Complex val = 0.0;
    for (Eigen::Index n = 0; n < fs.dim; ++n)
        if (w(n) != 0.0) val += w(n) * M(n, n);
    return val;
}

double fock_mean_probe(const DiscreteModel& dm, const FockTruncation& trunc,
                       std::size_t l, double t, std::size_t alpha, double temperature) {
    dm.check();
    FockSpace fs(dm.modes(), trunc.n_max);
    const Eigen::MatrixXcd U = hermitian_exp(build_H(fs, dm, l), Complex(0.0, -t));
    const Eigen::VectorXd w = thermal_weights(fs, dm, temperature);
    if (top_layer_mass(fs, U, w) > 1e-10)
        throw std::runtime_error("fock oracle: evolved tail above 1e-10, increase n_max");
    const Eigen::MatrixXcd M = U.adjoint() * build_Pi(fs, dm, alpha) * U;
    Complex val = 0.0;
    for (Eigen::Index n = 0; n < fs.dim; ++n)
        if (w(n) != 0.0) val += w(n) * M(n, n);
    return val.real();
}

Eigen::MatrixXcd fock_propagator(const DiscreteModel& dm, const FockTruncation& trunc,
                                 std::size_t l, double t) {
    dm.check();
    FockSpace fs(dm.modes(), trunc.n_max);
    return hermitian_exp(build_H(fs, dm, l), Complex(0.0, -t));
}

} // namespace bmeter::oracle
