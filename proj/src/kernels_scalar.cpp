#include "qa/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace qa::kernels {
namespace {

void fwht_scalar(double* data, std::size_t n) {
    for (std::size_t half = 1; half < n; half <<= 1) {
        for (std::size_t base = 0; base < n; base += 2 * half) {
            for (std::size_t j = base; j < base + half; ++j) {
                const double a = data[j];
                const double b = data[j + half];
                data[j] = a + b;
                data[j + half] = a - b;
            }
        }
    }
}

cplx dot_scalar(const cplx* a, const cplx* b, std::size_t n) {
    double re = 0.0;
    double im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        re += a[k].real() * b[k].real() - a[k].imag() * b[k].imag();
        im += a[k].real() * b[k].imag() + a[k].imag() * b[k].real();
    }
    return {re, im};
}

double norm2_scalar(const cplx* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        s += a[k].real() * a[k].real() + a[k].imag() * a[k].imag();
    }
    return s;
}

void phase_weights_scalar(const double* energy, double t, const cplx* u, cplx* w, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double arg = energy[k] * t;
        const double c = std::cos(arg);
        const double s = -std::sin(arg);
        // conj(u) * (c + i s)
        const double ur = u[k].real();
        const double ui = -u[k].imag();
        w[k] = {ur * c - ui * s, ur * s + ui * c};
    }
}

void scale_conj_scalar(const cplx* w, cplx z, cplx* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double wr = w[k].real();
        const double wi = -w[k].imag();
        out[k] = {z.real() * wr - z.imag() * wi, z.real() * wi + z.imag() * wr};
    }
}

void diag_rhs_scalar(const double* diag, const cplx* psi, cplx z, const cplx* u, cplx* out,
                     std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        // -i d (a + ib) = d b - i d a
        const double re = diag[k] * psi[k].imag();
        const double im = -diag[k] * psi[k].real();
        out[k] = {re + z.real() * u[k].real() - z.imag() * u[k].imag(),
                  im + z.real() * u[k].imag() + z.imag() * u[k].real()};
    }
}

void transverse_rhs_scalar(const double* diag, const cplx* psi, double coupling, cplx* out,
                           unsigned n_qubits) {
    const std::size_t n = std::size_t{1} << n_qubits;
    for (std::size_t k = 0; k < n; ++k) {
        double sr = 0.0;
        double si = 0.0;
        for (unsigned q = 0; q < n_qubits; ++q) {
            const cplx& p = psi[k ^ (std::size_t{1} << q)];
            sr += p.real();
            si += p.imag();
        }
        // -i d psi + i c s
        out[k] = {diag[k] * psi[k].imag() - coupling * si, -diag[k] * psi[k].real() + coupling * sr};
    }
}

void lincomb_scalar(cplx* out, const cplx* y, double h, const double* coeff, const cplx* const* ks,
                    std::size_t n_stages, std::size_t n) {
    const auto* yd = reinterpret_cast<const double*>(y);
    auto* od = reinterpret_cast<double*>(out);
    for (std::size_t i = 0; i < 2 * n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n_stages; ++j) {
            acc += coeff[j] * reinterpret_cast<const double*>(ks[j])[i];
        }
        od[i] = yd[i] + h * acc;
    }
}

double weighted_err2_scalar(const cplx* err, const cplx* y0, const cplx* y1, double atol,
                            double rtol, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double scale = atol + rtol * std::max(std::abs(y0[k]), std::abs(y1[k]));
        const double e = std::abs(err[k]) / scale;
        s += e * e;
    }
    return s;
}

}  // namespace

const KernelTable& scalar_table() {
    static const KernelTable table{
        "scalar",
        fwht_scalar,
        dot_scalar,
        norm2_scalar,
        phase_weights_scalar,
        scale_conj_scalar,
        diag_rhs_scalar,
        transverse_rhs_scalar,
        lincomb_scalar,
        weighted_err2_scalar,
    };
    return table;
}

}  // namespace qa::kernels
