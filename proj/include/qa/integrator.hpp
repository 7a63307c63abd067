#pragma once

// Adaptive Dormand-Prince 5(4) for complex state vectors.
//
// Error control is the RMS over components of |err_k| / (atol + rtol * |y_k|),
// with |y_k| the larger of the start and end values. The last accepted step
// size and the first-same-as-last stage carry over between calls to
// integrate(), so a run may be split into segments without restarting.

#include "qa/error.hpp"
#include "qa/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace qa {

struct IntegratorOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    std::size_t max_steps = 100'000'000;
};

struct IntegratorStats {
    std::size_t steps = 0;
    std::size_t rejected_steps = 0;
    std::size_t rhs_evals = 0;
};

class DormandPrince {
public:
    using cplx = kernels::cplx;

    DormandPrince(std::size_t n, IntegratorOptions opts, const kernels::KernelTable& kt = kernels::active())
        : n_(n), opts_(opts), kt_(&kt), y_new_(n), err_(n), zero_(n, cplx{0.0, 0.0}) {
        for (auto& k : k_) {
            k.resize(n);
        }
        if (!(opts_.rel_tol > 0.0) || !(opts_.abs_tol > 0.0)) {
            throw UsageError("integrator tolerances must be positive");
        }
    }

    const IntegratorStats& stats() const { return stats_; }

    /// Advances y from t0 to t1 (t1 > t0). rhs(t, const cplx* y, cplx* dy).
    template <class Rhs>
    void integrate(Rhs&& rhs, double t0, double t1, std::vector<cplx>& y) {
        if (!(t1 > t0)) {
            return;
        }
        double t = t0;
        if (!fsal_valid_ || fsal_t_ != t0) {
            rhs(t, y.data(), k_[0].data());
            ++stats_.rhs_evals;
        }
        if (!(h_ > 0.0)) {
            h_ = initial_step(t, t1, y);
        }
        bool last_rejected = false;
        while (t < t1) {
            if (stats_.steps + stats_.rejected_steps >= opts_.max_steps) {
                throw NumericalError("integrator step budget exhausted at t=" + std::to_string(t));
            }
            double h = std::min(h_, t1 - t);
            const bool hits_end = (t + h >= t1) || (t1 - (t + h) < 1e-12 * h);
            if (hits_end) {
                h = t1 - t;
            }
            if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::abs(t)) {
                throw NumericalError("step-size underflow at t=" + std::to_string(t));
            }

            stage(rhs, t, h, y);
            const double err = std::sqrt(kt_->weighted_err2(err_.data(), y.data(), y_new_.data(),
                                                             opts_.abs_tol, opts_.rel_tol, n_) /
                                         static_cast<double>(n_));
            if (err <= 1.0) {
                t = hits_end ? t1 : t + h;
                y.swap(y_new_);
                k_[0].swap(k_[6]);
                ++stats_.steps;
                double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                fac = std::min(fac, last_rejected ? 1.0 : 5.0);
                // Do not let a clipped final step shrink the carried step size.
                h_ = hits_end ? std::max(h_, h * std::max(fac, 1.0)) : h * std::max(0.2, fac);
                last_rejected = false;
            } else {
                ++stats_.rejected_steps;
                const double fac = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.1;
                h_ = h * fac;
                last_rejected = true;
            }
        }
        fsal_valid_ = true;
        fsal_t_ = t1;
    }

    /// Forget the cached stage, e.g. after the caller modified y.
    void reset() { fsal_valid_ = false; }

private:
    template <class Rhs>
    void stage(Rhs& rhs, double t, double h, const std::vector<cplx>& y) {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr std::array<double, 1> a2{1.0 / 5};
        static constexpr std::array<double, 2> a3{3.0 / 40, 9.0 / 40};
        static constexpr std::array<double, 3> a4{44.0 / 45, -56.0 / 15, 32.0 / 9};
        static constexpr std::array<double, 4> a5{19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                                                  -212.0 / 729};
        static constexpr std::array<double, 5> a6{9017.0 / 3168, -355.0 / 33, 46732.0 / 5247,
                                                  49.0 / 176, -5103.0 / 18656};
        static constexpr std::array<double, 6> a7{35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192,
                                                  -2187.0 / 6784, 11.0 / 84};
        static constexpr std::array<double, 7> e{71.0 / 57600,  0.0,          -71.0 / 16695,
                                                 71.0 / 1920,   -17253.0 / 339200, 22.0 / 525,
                                                 -1.0 / 40};

        const cplx* ks[7] = {k_[0].data(), k_[1].data(), k_[2].data(), k_[3].data(),
                             k_[4].data(), k_[5].data(), k_[6].data()};
        auto eval = [&](const double* a, std::size_t m, double c, std::size_t out) {
            kt_->lincomb(y_new_.data(), y.data(), h, a, ks, m, n_);
            rhs(t + c * h, y_new_.data(), k_[out].data());
            ++stats_.rhs_evals;
        };
        eval(a2.data(), 1, c2, 1);
        eval(a3.data(), 2, c3, 2);
        eval(a4.data(), 3, c4, 3);
        eval(a5.data(), 4, c5, 4);
        eval(a6.data(), 5, 1.0, 5);
        eval(a7.data(), 6, 1.0, 6);  // y_new_ holds the 5th-order solution, k_[6] its derivative
        kt_->lincomb(err_.data(), zero_.data(), h, e.data(), ks, 7, n_);
    }

    double initial_step(double t, double t1, const std::vector<cplx>& y) const {
        const double d0 = std::sqrt(kt_->weighted_err2(y.data(), y.data(), y.data(), opts_.abs_tol,
                                                       opts_.rel_tol, n_) / static_cast<double>(n_));
        const double d1 = std::sqrt(kt_->weighted_err2(k_[0].data(), y.data(), y.data(),
                                                       opts_.abs_tol, opts_.rel_tol, n_) /
                                    static_cast<double>(n_));
        double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * (t1 - t) : 0.01 * d0 / d1;
        h = std::min(h, t1 - t);
        return std::max(h, 1e-12 * (t1 - t));
    }

    std::size_t n_;
    IntegratorOptions opts_;
    const kernels::KernelTable* kt_;
    std::array<std::vector<cplx>, 7> k_;
    std::vector<cplx> y_new_;
    std::vector<cplx> err_;
    std::vector<cplx> zero_;
    double h_ = 0.0;
    bool fsal_valid_ = false;
    double fsal_t_ = 0.0;
    IntegratorStats stats_;
};

}  // namespace qa
