#pragma once

// Time-dependent Schrodinger evolution under H(t) = H_I - coupling(t) * M.

#include "qa/integrator.hpp"
#include "qa/ising.hpp"
#include "qa/schedule.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qa {

using cplx = std::complex<double>;

enum class Picture { Auto, Direct, Interaction };

struct EvolveOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    Picture picture = Picture::Auto;
    bool record_trace = false;
    int trace_points = 200;
    double norm_tol = 1e-6;
    /// Projector mixer |u><u| with a caller-supplied unit vector u (basis-index
    /// order); the run starts in u. Empty means the uniform superposition.
    std::vector<cplx> drive;
};

struct TracePoint {
    double t = 0.0;
    double n_bar = 0.0;
    double p0 = 0.0;
};

/// Probability mass of one energy level (a class of degenerate basis states).
struct LevelProbability {
    double energy = 0.0;
    std::size_t excitation_index = 0;  ///< number of basis states strictly below this level
    std::size_t degeneracy = 1;
    double probability = 0.0;
};

struct RunResult {
    std::vector<double> P;  ///< per basis state, in excitation order
    std::vector<LevelProbability> levels;
    double p0 = 0.0;        ///< ground-level probability (summed over degenerate ground states)
    double mean_n = 0.0;
    double n_bar = 0.0;     ///< mean_n / ((dim - 1) / 2)
    double eps_res = 0.0;
    double norm_error = 0.0;
    IntegratorStats integrator;
    std::vector<TracePoint> trace;
};

/// Integrates from schedule.t0 to schedule.T starting in the mixer ground state.
RunResult evolve(const IsingInstance& instance, const Schedule& schedule,
                 const EvolveOptions& opts = {});

/// d(state)/dt at time t. In the interaction picture `state` holds
/// c_k = exp(i eps_k t) psi_k and the generator is shifted by the mixer ground
/// energy, so c differs from that by a global phase.
std::vector<cplx> rhs(const IsingInstance& instance, const Schedule& schedule, double t,
                      std::span<const cplx> state, Picture picture = Picture::Direct);

/// P[n] = |amp[pi(n)]|^2 (normalized) plus level-aggregated metrics.
RunResult excitation_distribution(std::span<const cplx> state, std::span<const double> diagonal,
                                  const SpectrumStats& stats);

struct GroverResult {
    double p0_final = 0.0;
    double g_const = 0.0;
    double duration = 0.0;
    std::vector<TracePoint> trace;  ///< n_bar unused; p0 = |a0|^2
    IntegratorStats integrator;
};

/// Two-level (a0, a+) reduction of the projector protocol on the Grover
/// Hamiltonian with the resonant constant coupling.
GroverResult evolve_grover(int n_qubits, double eps, const EvolveOptions& opts = {});

/// The same protocol simulated in the full 2^N space; p0 is the target probability.
GroverResult evolve_grover_full(int n_qubits, double eps, std::uint64_t target,
                                const EvolveOptions& opts = {});

struct SectorOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double ratio_T = 100.0;
    double t0_factor = 100.0;
    double norm_tol = 1e-6;
};

struct SectorResult {
    std::vector<std::uint64_t> basis;  ///< sector basis masks (bit set = spin down)
    std::vector<double> energies;      ///< sum_k eps_k s_k per basis state
    std::vector<double> P;             ///< per sector state, ascending energy
    double p0 = 0.0;
    double wrong_spin_fraction = 0.0;
    std::uint64_t ground_mask = 0;
    double ground_energy = 0.0;
    double tau_a = 0.0;
    double norm_error = 0.0;
    IntegratorStats integrator;
};

/// Zero-magnetization basis of N spins, ascending mask order.
std::vector<std::uint64_t> zero_magnetization_basis(int n_spins);

/// H(t) = sum_k eps_k sigma_z^k - (g/t) sum_{i != j} sigma+_i sigma-_j in the
/// S_z = 0 sector, started in the symmetric Dicke state.
SectorResult evolve_sector(std::span<const double> eps_fields, double g,
                           const SectorOptions& opts = {});

}  // namespace qa
