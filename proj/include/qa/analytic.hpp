#pragma once

// Closed-form final-state distributions of the 1/t projector protocol.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qa {

struct AnalyticPrediction {
    double dim = 0.0;             ///< Hilbert-space dimension
    double p = 1.0;               ///< exp(-2 pi g / dim); uniform-overlap case only
    std::vector<double> p_list;   ///< per-state p_n; general case only
    std::vector<double> P;        ///< over excitation index (may be truncated, see max_n)
    double p0 = 0.0;
    double mean_n = 0.0;
    double n_bar = 0.0;
};

/// P_n = p^n (1 - p) / (1 - p^dim), p = exp(-2 pi g / dim). P is filled for
/// n < min(dim, max_n); the summary values are exact for the full distribution.
AnalyticPrediction geometric_prediction(double g, double dim, std::size_t max_n = SIZE_MAX);

/// Closed-form mean excitation number, without building P.
double geometric_mean_n(double g, double dim);

/// Probability of the symmetric ground superposition for an M-fold degenerate ground level.
double degenerate_prediction(double g, double dim, double M);

/// Product-form distribution for a projector onto an arbitrary unit vector
/// with amplitudes `overlaps` listed in excitation order.
AnalyticPrediction general_prediction(std::span<const std::complex<double>> overlaps, double g);

/// k_B T = dim * delta / (2 pi g)
double effective_temperature(double g, double dim, double delta);

struct GroverParams {
    double g_const = 0.0;
    double duration = 0.0;
};

/// Resonant constant coupling eps * dim / (dim - 2) and its half-Rabi time pi sqrt(dim) / (2 eps).
GroverParams grover_params(double dim, double eps);

/// Upper bound log2(2 pi tau_dec eps_max N) on correctly oriented spins.
double hardware_estimate(double eps_max, double tau_dec, double n_qubits);

}  // namespace qa
