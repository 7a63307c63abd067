#include "qa/dynamics.hpp"

#include "qa/analytic.hpp"
#include "qa/error.hpp"
#include "qa/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace qa {
namespace {

// Right-hand side for a full-space run. Owns the scratch buffers so that
// evaluations do not allocate.
class SchrodingerRhs {
public:
    SchrodingerRhs(const IsingInstance& inst, const Schedule& sched, Picture picture,
                   std::vector<cplx> drive, double energy_ref)
        : sched_(&sched), picture_(picture), kt_(&kernels::active()), n_qubits_(inst.n_qubits()) {
        const auto& d = inst.diagonal();
        energy_.resize(d.size());
        std::transform(d.begin(), d.end(), energy_.begin(), [&](double e) { return e - energy_ref; });
        if (sched.mixer() == Mixer::Projector) {
            drive_ = std::move(drive);
            drive_conj_.resize(drive_.size());
            std::transform(drive_.begin(), drive_.end(), drive_conj_.begin(),
                           [](cplx u) { return std::conj(u); });
            weights_.resize(drive_.size());
        } else if (picture_ == Picture::Interaction) {
            drive_.assign(energy_.size(), cplx{1.0, 0.0});
            weights_.resize(energy_.size());
            scratch_.resize(energy_.size());
            zeros_.assign(energy_.size(), 0.0);
        }
    }

    void operator()(double t, const cplx* y, cplx* dy) {
        const double c = coupling_at(*sched_, t);
        const std::size_t n = energy_.size();
        if (sched_->mixer() == Mixer::Transverse) {
            if (picture_ == Picture::Direct) {
                kt_->transverse_rhs(energy_.data(), y, c, dy, static_cast<unsigned>(n_qubits_));
                return;
            }
            // dc/dt = conj(w) * (i c X (w * c)) with w = exp(-i e t)
            kt_->phase_weights(energy_.data(), t, drive_.data(), weights_.data(), n);
            for (std::size_t k = 0; k < n; ++k) {
                scratch_[k] = weights_[k] * y[k];
            }
            kt_->transverse_rhs(zeros_.data(), scratch_.data(), c, dy, static_cast<unsigned>(n_qubits_));
            // generator shifted by the mixer ground energy -N c (a global phase)
            const cplx shift{0.0, c * n_qubits_};
            for (std::size_t k = 0; k < n; ++k) {
                dy[k] = dy[k] * std::conj(weights_[k]) - shift * y[k];
            }
            return;
        }
        if (picture_ == Picture::Interaction) {
            kt_->phase_weights(energy_.data(), t, drive_.data(), weights_.data(), n);
            const cplx s = kt_->dot(weights_.data(), y, n);
            kt_->scale_conj(weights_.data(), cplx{0.0, c} * s, dy, n);
            // generator shifted by the mixer ground energy -c (a global phase)
            for (std::size_t k = 0; k < n; ++k) {
                dy[k] -= cplx{0.0, c} * y[k];
            }
            return;
        }
        const cplx s = kt_->dot(drive_conj_.data(), y, n);
        kt_->diag_rhs(energy_.data(), y, cplx{0.0, c} * s, drive_.data(), dy, n);
    }

    // psi_k = exp(-i e_k t) c_k and back.
    void to_interaction(double t, std::vector<cplx>& v) const { rotate(v, t); }
    void to_direct(double t, std::vector<cplx>& v) const { rotate(v, -t); }

private:
    void rotate(std::vector<cplx>& v, double t) const {
        for (std::size_t k = 0; k < v.size(); ++k) {
            v[k] *= std::polar(1.0, energy_[k] * t);
        }
    }

    const Schedule* sched_;
    Picture picture_;
    const kernels::KernelTable* kt_;
    int n_qubits_;
    std::vector<double> energy_;
    std::vector<cplx> drive_;
    std::vector<cplx> drive_conj_;
    std::vector<cplx> weights_;
    std::vector<cplx> scratch_;
    std::vector<double> zeros_;
};

Picture resolve_picture(Picture requested) {
    return requested == Picture::Auto ? Picture::Interaction : requested;
}

std::vector<cplx> make_drive(const IsingInstance& inst, const Schedule& sched,
                             const std::vector<cplx>& requested) {
    const std::size_t dim = inst.dim();
    if (sched.mixer() == Mixer::Transverse) {
        if (!requested.empty()) {
            throw UsageError("a custom drive vector needs the projector mixer");
        }
        return {};
    }
    if (requested.empty()) {
        return std::vector<cplx>(dim, cplx{1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
    }
    if (requested.size() != dim) {
        throw UsageError("drive vector dimension does not match the instance");
    }
    double norm = 0.0;
    for (const auto& u : requested) {
        norm += std::norm(u);
    }
    if (std::abs(norm - 1.0) > 1e-9) {
        throw UsageError("drive vector is not normalized");
    }
    return requested;
}

std::vector<double> trace_times(double t0, double t1, int points) {
    std::vector<double> ts;
    if (points < 2) {
        return {t1};
    }
    ts.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        const double f = static_cast<double>(i) / (points - 1);
        ts.push_back(t0 > 0.0 ? t0 * std::pow(t1 / t0, f) : t0 + f * (t1 - t0));
    }
    ts.front() = t0;
    ts.back() = t1;
    return ts;
}

}  // namespace

RunResult excitation_distribution(std::span<const cplx> state, std::span<const double> diagonal,
                                  const SpectrumStats& stats) {
    const std::size_t dim = diagonal.size();
    if (state.size() != dim || stats.sort_order.size() != dim) {
        throw UsageError("state dimension does not match the spectrum");
    }
    RunResult r;
    double total = 0.0;
    for (const auto& a : state) {
        total += std::norm(a);
    }
    if (!(total > 0.0)) {
        throw NumericalError("state has zero norm");
    }
    r.norm_error = std::abs(total - 1.0);
    r.P.resize(dim);
    for (std::size_t n = 0; n < dim; ++n) {
        r.P[n] = std::norm(state[stats.sort_order[n]]) / total;
    }

    const double e0 = stats.ground_energy;
    for (std::size_t n = 0; n < dim; ++n) {
        const double e = diagonal[stats.sort_order[n]];
        if (r.levels.empty() || e - r.levels.back().energy > stats.degeneracy_tol) {
            r.levels.push_back({e, n, 0, 0.0});
        }
        auto& lvl = r.levels.back();
        ++lvl.degeneracy;
        lvl.probability += r.P[n];
        r.eps_res += r.P[n] * (e - e0);
    }
    r.p0 = r.levels.front().probability;
    for (const auto& lvl : r.levels) {
        r.mean_n += static_cast<double>(lvl.excitation_index) * lvl.probability;
    }
    r.n_bar = dim > 1 ? r.mean_n / (0.5 * static_cast<double>(dim - 1)) : 0.0;
    r.eps_res = std::max(r.eps_res, 0.0);
    return r;
}

std::vector<cplx> rhs(const IsingInstance& instance, const Schedule& schedule, double t,
                      std::span<const cplx> state, Picture picture) {
    if (state.size() != instance.dim()) {
        throw UsageError("state dimension does not match the instance");
    }
    const Picture pic = resolve_picture(picture);
    SchrodingerRhs f(instance, schedule, pic, make_drive(instance, schedule, {}), 0.0);
    std::vector<cplx> out(state.size());
    f(t, state.data(), out.data());
    return out;
}

RunResult evolve(const IsingInstance& instance, const Schedule& schedule, const EvolveOptions& opts) {
    if (schedule.n_qubits != instance.n_qubits()) {
        throw UsageError("schedule and instance disagree on the number of qubits");
    }
    if (schedule.calibrated() &&
        std::abs(schedule.bandwidth - instance.stats().bandwidth) >
            1e-12 * std::max(schedule.bandwidth, instance.stats().bandwidth)) {
        throw UsageError("schedule was calibrated against a different bandwidth than the instance");
    }
    if (!(schedule.T > schedule.t0)) {
        throw UsageError("schedule end time must exceed its start time");
    }
    const Picture pic = resolve_picture(opts.picture);
    std::vector<cplx> drive = make_drive(instance, schedule, opts.drive);
    const auto& st = instance.stats();
    const double ref = 0.5 * (st.ground_energy + st.max_energy);

    std::vector<cplx> y;
    if (schedule.mixer() == Mixer::Projector) {
        y = drive;
    } else {
        y.assign(instance.dim(), cplx{1.0 / std::sqrt(static_cast<double>(instance.dim())), 0.0});
    }
    SchrodingerRhs f(instance, schedule, pic, std::move(drive), ref);
    if (pic == Picture::Interaction) {
        f.to_interaction(schedule.t0, y);
    }

    DormandPrince integrator(y.size(), {opts.rel_tol, opts.abs_tol});
    std::vector<TracePoint> trace;
    if (opts.record_trace) {
        const auto ts = trace_times(schedule.t0, schedule.T, opts.trace_points);
        double t = schedule.t0;
        for (double tn : ts) {
            integrator.integrate(f, t, tn, y);
            t = tn;
            const RunResult snap = excitation_distribution(y, instance.diagonal(), st);
            trace.push_back({t, snap.n_bar, snap.p0});
        }
    } else {
        integrator.integrate(f, schedule.t0, schedule.T, y);
    }
    if (pic == Picture::Interaction) {
        f.to_direct(schedule.T, y);
    }

    RunResult r = excitation_distribution(y, instance.diagonal(), st);
    r.integrator = integrator.stats();
    r.trace = std::move(trace);
    if (!(r.norm_error <= opts.norm_tol)) {
        throw NumericalError("norm drift " + std::to_string(r.norm_error) + " exceeds tolerance");
    }
    return r;
}

GroverResult evolve_grover(int n_qubits, double eps, const EvolveOptions& opts) {
    const auto params = grover_params(std::ldexp(1.0, n_qubits), eps);
    const double dim = std::ldexp(1.0, n_qubits);
    const double g = params.g_const;
    const double diag0 = g / dim + eps;
    const double diag1 = (dim - 1.0) * g / dim;
    const double off = std::sqrt(dim - 1.0) * g / dim;
    auto f = [&](double, const cplx* y, cplx* dy) {
        const cplx i{0.0, 1.0};
        dy[0] = i * (diag0 * y[0] + off * y[1]);
        dy[1] = i * (diag1 * y[1] + off * y[0]);
    };
    std::vector<cplx> y{cplx{1.0 / std::sqrt(dim), 0.0}, cplx{std::sqrt(1.0 - 1.0 / dim), 0.0}};
    DormandPrince integrator(2, {opts.rel_tol, opts.abs_tol});
    GroverResult r;
    r.g_const = g;
    r.duration = params.duration;
    if (opts.record_trace) {
        const auto ts = trace_times(0.0, params.duration, opts.trace_points);
        double t = 0.0;
        for (double tn : ts) {
            integrator.integrate(f, t, tn, y);
            t = tn;
            r.trace.push_back({t, 0.0, std::norm(y[0])});
        }
    } else {
        integrator.integrate(f, 0.0, params.duration, y);
    }
    const double norm = std::norm(y[0]) + std::norm(y[1]);
    if (std::abs(norm - 1.0) > opts.norm_tol) {
        throw NumericalError("norm drift in two-level Grover evolution");
    }
    r.p0_final = std::norm(y[0]);
    r.integrator = integrator.stats();
    return r;
}

GroverResult evolve_grover_full(int n_qubits, double eps, std::uint64_t target,
                                const EvolveOptions& opts) {
    const auto params = grover_params(std::ldexp(1.0, n_qubits), eps);
    const IsingInstance inst = grover_instance(n_qubits, target, eps);
    const Schedule sched =
        make_constant_schedule(params.g_const, Mixer::Projector, params.duration, n_qubits);
    const RunResult run = evolve(inst, sched, opts);
    GroverResult r;
    r.g_const = params.g_const;
    r.duration = params.duration;
    r.p0_final = run.p0;
    r.integrator = run.integrator;
    for (const auto& tp : run.trace) {
        r.trace.push_back(tp);
    }
    return r;
}

std::vector<std::uint64_t> zero_magnetization_basis(int n_spins) {
    if (n_spins < 2 || n_spins % 2 != 0) {
        throw UsageError("the zero-magnetization sector needs an even number of spins");
    }
    if (n_spins > 16) {
        throw UsageError("sector runs are limited to N <= 16");
    }
    std::vector<std::uint64_t> basis;
    for (std::uint64_t m = 0; m < (1ULL << n_spins); ++m) {
        if (std::popcount(m) == n_spins / 2) {
            basis.push_back(m);
        }
    }
    return basis;
}

SectorResult evolve_sector(std::span<const double> eps_fields, double g, const SectorOptions& opts) {
    const int n = static_cast<int>(eps_fields.size());
    SectorResult r;
    r.basis = zero_magnetization_basis(n);
    if (!(g > 0.0)) {
        throw UsageError("sector coupling g must be positive");
    }
    const std::size_t dim = r.basis.size();

    r.energies.resize(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        double e = 0.0;
        for (int k = 0; k < n; ++k) {
            e += ((r.basis[s] >> k) & 1U) ? -eps_fields[k] : eps_fields[k];
        }
        r.energies[s] = e;
    }

    // sigma+_i sigma-_j moves a down-flip (set bit) from i to j.
    const std::size_t degree = static_cast<std::size_t>(n / 2) * static_cast<std::size_t>(n / 2);
    std::vector<std::uint32_t> neighbors;
    neighbors.reserve(dim * degree);
    for (std::size_t s = 0; s < dim; ++s) {
        const std::uint64_t m = r.basis[s];
        for (int i = 0; i < n; ++i) {
            if (!((m >> i) & 1U)) continue;
            for (int j = 0; j < n; ++j) {
                if ((m >> j) & 1U) continue;
                const std::uint64_t moved = m ^ (1ULL << i) ^ (1ULL << j);
                const auto it = std::lower_bound(r.basis.begin(), r.basis.end(), moved);
                neighbors.push_back(static_cast<std::uint32_t>(it - r.basis.begin()));
            }
        }
    }

    std::vector<std::size_t> order(dim);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return r.energies[a] < r.energies[b]; });
    r.ground_mask = r.basis[order.front()];
    r.ground_energy = r.energies[order.front()];
    const double bandwidth = r.energies[order.back()] - r.ground_energy;
    if (!(bandwidth > 0.0)) {
        throw UsageError("sector fields give a zero-bandwidth spectrum");
    }

    // Dicke-state gap of the hopping term is (N/2)^2 times the coupling.
    r.tau_a = g * static_cast<double>(degree) / bandwidth;
    const double t0 = r.tau_a / opts.t0_factor;
    const double t1 = r.tau_a * opts.ratio_T;
    const double ref = 0.5 * (r.ground_energy + r.energies[order.back()]);

    // Interaction picture: c_s = exp(i e_s t) psi_s up to a global phase,
    // dc/dt = (i g/t) (conj(w) * Hop (w * c) - (N/2)^2 c).
    std::vector<double> shifted(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        shifted[s] = r.energies[s] - ref;
    }
    std::vector<cplx> w(dim);
    std::vector<cplx> psi(dim);
    auto f = [&](double t, const cplx* y, cplx* dy) {
        const double c = g / t;
        for (std::size_t s = 0; s < dim; ++s) {
            w[s] = std::polar(1.0, -shifted[s] * t);
            psi[s] = w[s] * y[s];
        }
        for (std::size_t s = 0; s < dim; ++s) {
            cplx acc{0.0, 0.0};
            const std::uint32_t* nb = neighbors.data() + s * degree;
            for (std::size_t q = 0; q < degree; ++q) {
                acc += psi[nb[q]];
            }
            // shifted by the Dicke-state energy -c (N/2)^2, a global phase
            acc = std::conj(w[s]) * acc - static_cast<double>(degree) * y[s];
            dy[s] = cplx{-c * acc.imag(), c * acc.real()};
        }
    };
    std::vector<cplx> y(dim);
    for (std::size_t s = 0; s < dim; ++s) {
        y[s] = std::polar(1.0 / std::sqrt(static_cast<double>(dim)), shifted[s] * t0);
    }
    DormandPrince integrator(dim, {opts.rel_tol, opts.abs_tol});
    integrator.integrate(f, t0, t1, y);
    r.integrator = integrator.stats();

    double total = 0.0;
    for (const auto& a : y) {
        total += std::norm(a);
    }
    r.norm_error = std::abs(total - 1.0);
    if (r.norm_error > opts.norm_tol) {
        throw NumericalError("norm drift in sector evolution");
    }
    r.P.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const std::size_t s = order[i];
        r.P[i] = std::norm(y[s]) / total;
        r.wrong_spin_fraction +=
            r.P[i] * std::popcount(r.basis[s] ^ r.ground_mask) / static_cast<double>(n);
    }
    r.p0 = r.P.front();
    return r;
}

}  // namespace qa
