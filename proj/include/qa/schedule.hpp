#pragma once

// Annealing protocols H(t) = H_I - coupling(t) * M, where M is either the
// projector |psi0><psi0| onto the uniform superposition or sum_q sigma_x^q.
// Only the positive coupling magnitude is stored.

#include "qa/ising.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace qa {

enum class Mixer { Projector, Transverse };

enum class ProtocolKind {
    P1,           ///< g/t, projector
    P2,           ///< g/(N t), transverse field
    P3,           ///< g/(a t^2) with a = Delta E_I / g, projector
    PowerLaw,     ///< prefactor / t^alpha
    Constant,     ///< value
    Exponential,  ///< prefactor * exp(-rate * t / tau_a)
};

struct Protocol {
    ProtocolKind kind = ProtocolKind::P1;
    Mixer mixer = Mixer::Projector;
    double alpha = 1.0;  ///< PowerLaw exponent
    double rate = 1.0;   ///< Exponential decay rate in units of 1/tau_a
    double value = 0.0;  ///< Constant coupling

    /// p1 | p2 | p3 | power:<alpha>[:transverse] | const:<value>[:transverse] | exp:<rate>[:transverse]
    static Protocol parse(std::string_view text);
    std::string name() const;
};

struct Schedule {
    Protocol protocol;
    double g = 0.0;
    int n_qubits = 0;
    double bandwidth = 0.0;  ///< Delta E_I the schedule was calibrated against; 0 if uncalibrated
    double tau_I = 0.0;
    double tau_a = 0.0;
    double t0 = 0.0;
    double T = 0.0;
    double ratio_T = 0.0;
    double prefactor = 0.0;  ///< coefficient of the time dependence (a, 1/a, ... folded in)
    double time_unit = 0.0;  ///< g * tau_I; the exponential family decays on this scale

    Mixer mixer() const { return protocol.mixer; }
    bool calibrated() const { return bandwidth > 0.0; }
};

struct ScheduleOptions {
    double ratio_T = 100.0;
    double t0_factor = 100.0;
};

/// Calibrates a protocol so that gap_scale(tau_a) = Delta E_I with tau_a = g * tau_I.
/// For the power-law and exponential families tau_a is recovered by solving that
/// crossing numerically. A constant coupling never crosses; its tau_a is the
/// nominal g * tau_I, used only to place t0 and T.
Schedule make_schedule(const Protocol& protocol, double g, const SpectrumStats& stats, int n_qubits,
                       const ScheduleOptions& opts = {});

/// Time-independent coupling `value` applied over [0, duration].
Schedule make_constant_schedule(double value, Mixer mixer, double duration, int n_qubits);

/// Magnitude of the coefficient multiplying the mixer at time t.
double coupling_at(const Schedule& s, double t);

/// Distance from the mixer ground level to its dense spectral region, coupling
/// for the projector and N * coupling for the transverse field.
double gap_scale(const Schedule& s, double t);

/// Solves gap_scale(t) = target by bisection in log t over [lo, hi].
double solve_gap_crossing(const Schedule& s, double target, double lo, double hi);

std::string_view to_string(Mixer mixer);

}  // namespace qa
