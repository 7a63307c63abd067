#pragma once
// Independent reference computations shared by the test suites.

#include "qa/ising.hpp"
#include "qa/rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

namespace qa::test {

inline std::vector<double> normal_vector(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

inline std::vector<std::complex<double>> complex_vector(std::size_t n, std::uint64_t seed) {
    const auto re = normal_vector(n, seed);
    const auto im = normal_vector(n, seed + 1000);
    std::vector<std::complex<double>> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = {re[i], im[i]};
    return v;
}

inline double tvd(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        const double x = i < a.size() ? a[i] : 0.0;
        const double y = i < b.size() ? b[i] : 0.0;
        s += std::abs(x - y);
    }
    return 0.5 * s;
}

// P_n = p^n (1 - p) / (1 - p^D) summed term by term in long double.
inline std::vector<double> geometric_by_summation(double g, std::size_t dim) {
    const long double p = std::exp(-2.0L * 3.14159265358979323846L * g / dim);
    std::vector<double> P(dim);
    if (g == 0.0) {
        std::fill(P.begin(), P.end(), 1.0 / static_cast<double>(dim));
        return P;
    }
    long double pn = 1.0L, total = 0.0L;
    std::vector<long double> raw(dim);
    for (std::size_t n = 0; n < dim; ++n) {
        raw[n] = pn * (1.0L - p);
        total += raw[n];
        pn *= p;
    }
    for (std::size_t n = 0; n < dim; ++n) P[n] = static_cast<double>(raw[n] / total);
    return P;
}

inline double mean_index(const std::vector<double>& P) {
    long double s = 0.0L;
    for (std::size_t n = 0; n < P.size(); ++n) s += static_cast<long double>(n) * P[n];
    return static_cast<double>(s);
}

// Fixed-step exact-exponential propagation of H(t) = diag(d) - c(t) u u^T for
// a real unit vector u, stepping with the midpoint coupling. Returns |psi|^2
// per basis index.
template <class Coupling>
std::vector<double> dense_projector_propagation(const std::vector<double>& d,
                                                const Eigen::VectorXd& u, Coupling coupling,
                                                double t0, double t1, double dt) {
    const Eigen::Index n = static_cast<Eigen::Index>(d.size());
    Eigen::VectorXcd psi = u.cast<std::complex<double>>();
    const Eigen::MatrixXd uu = u * u.transpose();
    Eigen::MatrixXd H(n, n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    double t = t0;
    while (t < t1) {
        const double h = std::min(dt, t1 - t);
        H = -coupling(t + 0.5 * h) * uu;
        for (Eigen::Index i = 0; i < n; ++i) H(i, i) += d[static_cast<std::size_t>(i)];
        es.compute(H);
        const Eigen::MatrixXd& V = es.eigenvectors();
        Eigen::VectorXcd phase(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            phase(i) = std::polar(1.0, -es.eigenvalues()(i) * h);
        }
        const Eigen::VectorXcd a = V.transpose().cast<std::complex<double>>() * psi;
        psi = V.cast<std::complex<double>>() * phase.cwiseProduct(a);
        t += h;
    }
    std::vector<double> P(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) P[static_cast<std::size_t>(i)] = std::norm(psi(i));
    return P;
}

// Probabilities of a basis-index distribution rearranged into ascending-energy order.
inline std::vector<double> by_excitation(const std::vector<double>& per_basis,
                                         const SpectrumStats& st) {
    std::vector<double> out(per_basis.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = per_basis[st.sort_order[n]];
    return out;
}

}  // namespace qa::test
