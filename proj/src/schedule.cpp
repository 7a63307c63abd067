#include "qa/schedule.hpp"

#include "qa/error.hpp"

#include <charconv>
#include <cmath>
#include <vector>

namespace qa {
namespace {

double parse_number(std::string_view text, std::string_view what) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw UsageError("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

double mixer_factor(const Schedule& s) {
    return s.mixer() == Mixer::Transverse ? static_cast<double>(s.n_qubits) : 1.0;
}

}  // namespace

Protocol Protocol::parse(std::string_view text) {
    Protocol p;
    if (text == "p1") {
        return p;
    }
    if (text == "p2") {
        p.kind = ProtocolKind::P2;
        p.mixer = Mixer::Transverse;
        return p;
    }
    if (text == "p3") {
        p.kind = ProtocolKind::P3;
        return p;
    }
    const auto parts = split(text, ':');
    if (parts.size() < 2 || parts.size() > 3) {
        throw UsageError("unknown protocol '" + std::string(text) + "'");
    }
    if (parts.size() == 3) {
        if (parts[2] == "transverse") {
            p.mixer = Mixer::Transverse;
        } else if (parts[2] != "projector") {
            throw UsageError("unknown mixer '" + std::string(parts[2]) + "'");
        }
    }
    if (parts[0] == "power") {
        p.kind = ProtocolKind::PowerLaw;
        p.alpha = parse_number(parts[1], "power-law exponent");
        if (!(p.alpha > 0.0)) {
            throw UsageError("power-law exponent must be positive");
        }
    } else if (parts[0] == "const") {
        p.kind = ProtocolKind::Constant;
        p.value = parse_number(parts[1], "constant coupling");
        if (!(p.value >= 0.0)) {
            throw UsageError("constant coupling must be non-negative");
        }
    } else if (parts[0] == "exp") {
        p.kind = ProtocolKind::Exponential;
        p.rate = parse_number(parts[1], "exponential rate");
        if (!(p.rate > 0.0)) {
            throw UsageError("exponential rate must be positive");
        }
    } else {
        throw UsageError("unknown protocol '" + std::string(text) + "'");
    }
    return p;
}

namespace {
std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}
}  // namespace

std::string Protocol::name() const {
    const std::string suffix = mixer == Mixer::Transverse ? ":transverse" : "";
    switch (kind) {
        case ProtocolKind::P1: return "p1";
        case ProtocolKind::P2: return "p2";
        case ProtocolKind::P3: return "p3";
        case ProtocolKind::PowerLaw: return "power:" + shortest(alpha) + suffix;
        case ProtocolKind::Constant: return "const:" + shortest(value) + suffix;
        case ProtocolKind::Exponential: return "exp:" + shortest(rate) + suffix;
    }
    return "?";
}

std::string_view to_string(Mixer mixer) {
    return mixer == Mixer::Projector ? "projector" : "transverse";
}

double coupling_at(const Schedule& s, double t) {
    const bool regular_at_zero = s.protocol.kind == ProtocolKind::Constant ||
                                 s.protocol.kind == ProtocolKind::Exponential;
    if (t < 0.0 || (t == 0.0 && !regular_at_zero) || std::isnan(t)) {
        throw UsageError("coupling evaluated at non-positive time");
    }
    switch (s.protocol.kind) {
        case ProtocolKind::P1:
        case ProtocolKind::P2:
            return s.prefactor / t;
        case ProtocolKind::P3:
            return s.prefactor / (t * t);
        case ProtocolKind::PowerLaw:
            return s.prefactor / std::pow(t, s.protocol.alpha);
        case ProtocolKind::Constant:
            return s.prefactor;
        case ProtocolKind::Exponential:
            return s.prefactor * std::exp(-s.protocol.rate * t / s.time_unit);
    }
    return 0.0;
}

double gap_scale(const Schedule& s, double t) { return mixer_factor(s) * coupling_at(s, t); }

double solve_gap_crossing(const Schedule& s, double target, double lo, double hi) {
    double f_lo = gap_scale(s, lo) - target;
    double f_hi = gap_scale(s, hi) - target;
    if (f_lo * f_hi > 0.0) {
        throw UsageError("gap scale does not cross the Ising bandwidth in the search window");
    }
    double a = std::log(lo);
    double b = std::log(hi);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        const double m = 0.5 * (a + b);
        const double f_m = gap_scale(s, std::exp(m)) - target;
        if ((f_m > 0.0) == (f_lo > 0.0)) {
            a = m;
            f_lo = f_m;
        } else {
            b = m;
        }
    }
    return std::exp(0.5 * (a + b));
}

Schedule make_schedule(const Protocol& protocol, double g, const SpectrumStats& stats, int n_qubits,
                       const ScheduleOptions& opts) {
    if (stats.zero_bandwidth || !(stats.bandwidth > 0.0)) {
        throw UsageError("cannot calibrate a schedule against a zero-bandwidth instance");
    }
    if (!(g > 0.0)) {
        throw UsageError("quench parameter g must be positive");
    }
    if (!(opts.ratio_T > 1.0) || !(opts.t0_factor > 1.0)) {
        throw UsageError("ratio_T and t0_factor must be > 1");
    }
    if (n_qubits < 1) {
        throw UsageError("n_qubits must be >= 1");
    }

    Schedule s;
    s.protocol = protocol;
    s.g = g;
    s.n_qubits = n_qubits;
    s.bandwidth = stats.bandwidth;
    s.tau_I = 1.0 / stats.bandwidth;
    s.tau_a = g * s.tau_I;
    s.time_unit = s.tau_a;
    s.ratio_T = opts.ratio_T;
    s.T = opts.ratio_T * s.tau_a;
    s.t0 = s.tau_a / opts.t0_factor;

    const double factor = mixer_factor(s);
    switch (protocol.kind) {
        case ProtocolKind::P1:
            s.prefactor = g;
            break;
        case ProtocolKind::P2:
            s.prefactor = g / static_cast<double>(n_qubits);
            break;
        case ProtocolKind::P3: {
            const double a = stats.bandwidth / g;
            s.prefactor = g / a;
            break;
        }
        case ProtocolKind::PowerLaw:
            s.prefactor = stats.bandwidth * std::pow(s.tau_a, protocol.alpha) / factor;
            break;
        case ProtocolKind::Exponential:
            s.prefactor = stats.bandwidth * std::exp(protocol.rate) / factor;
            break;
        case ProtocolKind::Constant:
            s.prefactor = protocol.value;
            break;
    }
    if (protocol.kind == ProtocolKind::PowerLaw || protocol.kind == ProtocolKind::Exponential) {
        s.tau_a = solve_gap_crossing(s, stats.bandwidth, s.tau_a * 1e-6, s.tau_a * 1e6);
    }
    return s;
}

Schedule make_constant_schedule(double value, Mixer mixer, double duration, int n_qubits) {
    if (!(value >= 0.0) || !(duration > 0.0)) {
        throw UsageError("constant schedule needs value >= 0 and duration > 0");
    }
    Schedule s;
    s.protocol.kind = ProtocolKind::Constant;
    s.protocol.mixer = mixer;
    s.protocol.value = value;
    s.prefactor = value;
    s.n_qubits = n_qubits;
    s.t0 = 0.0;
    s.T = duration;
    s.tau_a = duration;
    s.time_unit = duration;
    s.ratio_T = 1.0;
    return s;
}

}  // namespace qa
