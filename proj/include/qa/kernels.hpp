#pragma once

// Data-parallel inner loops used by the simulator.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2+FMA variant compiled in its own translation unit. The variant is
// picked once at runtime from CPUID; QA_SIMD=scalar|avx2|auto overrides it.
// Complex arrays are std::complex<double>, i.e. interleaved (re, im).

#include <complex>
#include <cstddef>
#include <string_view>

namespace qa::kernels {

using cplx = std::complex<double>;

struct KernelTable {
    std::string_view name;

    /// In-place unnormalized Walsh-Hadamard transform of a length-n real array
    /// (n a power of two): out[z] = sum_m in[m] * (-1)^popcount(m & z).
    void (*fwht)(double* data, std::size_t n);

    /// sum_k a[k] * b[k]
    cplx (*dot)(const cplx* a, const cplx* b, std::size_t n);

    /// sum_k |a[k]|^2
    double (*norm2)(const cplx* a, std::size_t n);

    /// w[k] = conj(u[k]) * exp(-i * energy[k] * t)
    void (*phase_weights)(const double* energy, double t, const cplx* u, cplx* w, std::size_t n);

    /// out[k] = z * conj(w[k])
    void (*scale_conj)(const cplx* w, cplx z, cplx* out, std::size_t n);

    /// out[k] = -i * diag[k] * psi[k] + z * u[k]
    void (*diag_rhs)(const double* diag, const cplx* psi, cplx z, const cplx* u, cplx* out,
                     std::size_t n);

    /// out[k] = -i * diag[k] * psi[k] + i * coupling * sum_q psi[k ^ (1 << q)]
    /// for q in [0, n_qubits); n = 2^n_qubits.
    void (*transverse_rhs)(const double* diag, const cplx* psi, double coupling, cplx* out,
                           unsigned n_qubits);

    /// out = y + h * sum_j coeff[j] * ks[j] over n_stages stages (real coefficients).
    void (*lincomb)(cplx* out, const cplx* y, double h, const double* coeff,
                    const cplx* const* ks, std::size_t n_stages, std::size_t n);

    /// sum_k (|err[k]| / (atol + rtol * max(|y0[k]|, |y1[k]|)))^2
    double (*weighted_err2)(const cplx* err, const cplx* y0, const cplx* y1, double atol,
                            double rtol, std::size_t n);
};

const KernelTable& scalar_table();

/// AVX2 table, or nullptr when it was not compiled in or the CPU lacks AVX2/FMA.
const KernelTable* avx2_table();

/// The table selected for this process.
const KernelTable& active();

}  // namespace qa::kernels
