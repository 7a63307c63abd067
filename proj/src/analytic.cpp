#include "qa/analytic.hpp"

#include "qa/error.hpp"

#include <cmath>
#include <numbers>

namespace qa {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_dim(double dim) {
    if (!(dim >= 2.0)) {
        throw UsageError("dimension must be >= 2");
    }
}

}  // namespace

double geometric_mean_n(double g, double dim) {
    check_dim(dim);
    if (!(g >= 0.0)) {
        throw UsageError("g must be non-negative");
    }
    if (g == 0.0) {
        return 0.5 * (dim - 1.0);
    }
    const double x = kTwoPi * g / dim;  // -ln p
    // p/(1-p) - dim p^dim/(1-p^dim), with p^dim = exp(-2 pi g)
    const double a = 1.0 / std::expm1(x);
    const double b = dim / std::expm1(kTwoPi * g);
    if (x < 1e-3) {
        // Series of the difference for small x avoids cancelling two O(dim/x) terms:
        // 1/(e^x-1) = 1/x - 1/2 + x/12 - x^3/720 + x^5/30240
        const double y = kTwoPi * g;
        auto tail = [](double u) {
            const double u2 = u * u;
            return u / 12.0 - u * u2 / 720.0 + u * u2 * u2 / 30240.0;
        };
        if (y < 1e-3) {
            return 0.5 * (dim - 1.0) + (tail(x) - dim * tail(y));
        }
        return (1.0 / x - 0.5 + tail(x)) - b;
    }
    return a - b;
}

AnalyticPrediction geometric_prediction(double g, double dim, std::size_t max_n) {
    check_dim(dim);
    if (!(g >= 0.0)) {
        throw UsageError("g must be non-negative");
    }
    AnalyticPrediction out;
    out.dim = dim;
    const double count = std::min(dim, static_cast<double>(max_n));
    const auto len = static_cast<std::size_t>(count);
    out.P.resize(len);
    if (g == 0.0) {
        out.p = 1.0;
        for (auto& v : out.P) {
            v = 1.0 / dim;
        }
        out.p0 = 1.0 / dim;
    } else {
        const double log_p = -kTwoPi * g / dim;
        out.p = std::exp(log_p);
        // ln(1 - p) - ln(1 - p^dim)
        const double log_norm = std::log(-std::expm1(log_p)) - std::log(-std::expm1(-kTwoPi * g));
        for (std::size_t n = 0; n < len; ++n) {
            out.P[n] = std::exp(static_cast<double>(n) * log_p + log_norm);
        }
        out.p0 = std::exp(log_norm);
    }
    out.mean_n = geometric_mean_n(g, dim);
    out.n_bar = out.mean_n / (0.5 * (dim - 1.0));
    return out;
}

double degenerate_prediction(double g, double dim, double M) {
    check_dim(dim);
    if (!(M >= 1.0) || M > dim) {
        throw UsageError("degeneracy M must lie in [1, dim]");
    }
    if (g == 0.0) {
        return M / dim;
    }
    return std::expm1(-kTwoPi * g * M / dim) / std::expm1(-kTwoPi * g);
}

AnalyticPrediction general_prediction(std::span<const std::complex<double>> overlaps, double g) {
    const std::size_t dim = overlaps.size();
    if (dim < 2) {
        throw UsageError("need at least two overlaps");
    }
    if (!(g >= 0.0)) {
        throw UsageError("g must be non-negative");
    }
    double total = 0.0;
    for (const auto& o : overlaps) {
        total += std::norm(o);
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw UsageError("overlaps are not normalized");
    }
    AnalyticPrediction out;
    out.dim = static_cast<double>(dim);
    out.p_list.resize(dim);
    out.P.resize(dim);
    if (g == 0.0) {
        for (std::size_t n = 0; n < dim; ++n) {
            out.p_list[n] = 1.0;
            out.P[n] = std::norm(overlaps[n]);
        }
    } else {
        // log of prod_{k<n} p_k is -2 pi g sum_{k<n} |o_k|^2
        double cumulative = 0.0;
        for (std::size_t n = 0; n < dim; ++n) {
            const double w = std::norm(overlaps[n]);
            out.p_list[n] = std::exp(-kTwoPi * g * w);
            out.P[n] = -std::expm1(-kTwoPi * g * w) * std::exp(-kTwoPi * g * cumulative);
            cumulative += w;
        }
        const double denom = -std::expm1(-kTwoPi * g * cumulative);
        for (auto& v : out.P) {
            v /= denom;
        }
    }
    out.p0 = out.P.front();
    for (std::size_t n = 0; n < dim; ++n) {
        out.mean_n += static_cast<double>(n) * out.P[n];
    }
    out.n_bar = out.mean_n / (0.5 * (out.dim - 1.0));
    return out;
}

double effective_temperature(double g, double dim, double delta) {
    if (!(g > 0.0) || !(dim > 0.0) || !(delta > 0.0)) {
        throw UsageError("effective temperature needs positive g, dim and level spacing");
    }
    return dim * delta / (kTwoPi * g);
}

GroverParams grover_params(double dim, double eps) {
    if (!(dim > 2.0)) {
        throw UsageError("Grover protocol needs dim > 2");
    }
    if (!(eps > 0.0)) {
        throw UsageError("Grover energy scale must be positive");
    }
    return {eps * dim / (dim - 2.0), std::numbers::pi * std::sqrt(dim) / (2.0 * eps)};
}

double hardware_estimate(double eps_max, double tau_dec, double n_qubits) {
    if (!(eps_max > 0.0) || !(tau_dec > 0.0) || !(n_qubits > 0.0)) {
        throw UsageError("hardware estimate needs positive inputs");
    }
    return std::log2(kTwoPi * tau_dec * eps_max * n_qubits);
}

}  // namespace qa
