#pragma once
// Disorder-averaged sweeps, power-law fits and the classical annealing baseline.

#include "qa/dynamics.hpp"
#include "qa/io.hpp"
#include "qa/ising.hpp"
#include "qa/schedule.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qa {

struct SweepSpec {
    InstanceMode instance_mode = InstanceMode::FullRandomCouplings;
    std::optional<int> k;  ///< range-k locality
    std::vector<int> n_list;
    int realizations = 25;
    std::uint64_t master_seed = 1;
    std::vector<std::string> protocols;
    std::vector<double> g_list;
    ScheduleOptions schedule;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    BandwidthMode bandwidth_mode = BandwidthMode::FwhmGaussian;
    int jobs = 0;  ///< 0 selects default_jobs()
    std::string results_csv = "results.csv";
    std::string aggregates_csv = "aggregates.csv";

    static SweepSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;
};

/// QA_JOBS if set, otherwise the hardware thread count.
int default_jobs();

struct SweepResult {
    std::vector<io::RunRecord> rows;              ///< ordered by (protocol, g, N, realization)
    std::vector<io::AggregateRecord> aggregates;  ///< ordered by (protocol, g, N)
};

/// Per-realization instance seed.
std::uint64_t realization_seed(std::uint64_t master_seed, int n_qubits, int realization);

/// Runs every (protocol, g, N, realization) combination; protocols and g values
/// share the realization's instance. Failed runs become rows with status "failed".
SweepResult sweep(const SweepSpec& spec);

/// Mean and sample standard deviation of n_bar per (protocol, g, N) over rows with status "ok".
std::vector<io::AggregateRecord> aggregate(const std::vector<io::RunRecord>& rows);

struct FitResult {
    double alpha = 0.0;
    double intercept = 0.0;
    std::pair<double, double> fit_window{0.0, 0.0};
    double r_squared = 0.0;
    double stderr_alpha = 0.0;
    std::size_t n_points = 0;
};

/// Upper half of [min g, max g] in log space.
std::pair<double, double> default_fit_window(const std::vector<double>& g_values);

/// OLS of log n_bar on log g over points with g in [window.first, window.second];
/// alpha = -slope.
FitResult fit_alpha(const std::vector<std::pair<double, double>>& g_nbar,
                    std::pair<double, double> window);
FitResult fit_alpha(const std::vector<std::pair<double, double>>& g_nbar);

/// Selects one (protocol, N) series from aggregates, then fits.
std::vector<std::pair<double, double>> series(const std::vector<io::AggregateRecord>& aggregates,
                                              const std::string& protocol, int n_qubits);

/// Least squares fit of values to sum_{k=0}^{order} c_k / N^k. Returns c_0..c_order.
std::vector<double> inverse_polynomial_fit(const std::vector<double>& n_values,
                                           const std::vector<double>& values, int order = 4);
double inverse_polynomial_eval(const std::vector<double>& coeffs, double n);

enum class CoolingSchedule { Geometric, Linear };
CoolingSchedule parse_cooling_schedule(std::string_view name);

struct SaOptions {
    CoolingSchedule cooling = CoolingSchedule::Geometric;
    int stages = 100;
    int trace_points = 50;
};

struct SaTracePoint {
    long long sweep = 0;
    double eps_res = 0.0;  ///< of the best configuration seen so far
};

struct SaResult {
    double eps_res = 0.0;
    std::uint64_t best_state = 0;
    double best_energy = 0.0;
    std::vector<SaTracePoint> trace;
    long long accepted = 0;
    long long proposals = 0;
};

/// Single-spin-flip Metropolis from T = Delta E_I down to T = delta over `sweeps`
/// sweeps of N proposals each.
SaResult classical_sa(const IsingInstance& instance, long long sweeps, std::uint64_t seed,
                      const SaOptions& opts = {});

enum class RelaxationMode { QuantumAnalytic, QuantumNumeric, ClassicalSa };
RelaxationMode parse_relaxation_mode(std::string_view name);

struct RelaxationPoint {
    double budget = 0.0;  ///< tau_a / tau_I for quantum modes, sweeps for classical
    double eps_res = 0.0;
};

/// Residual energy for each budget. The quantum modes use the g/t projector
/// protocol with g = budget.
std::vector<RelaxationPoint> relaxation_curve(RelaxationMode mode, const IsingInstance& instance,
                                              const std::vector<double>& budgets,
                                              std::uint64_t seed = 1,
                                              const EvolveOptions& evolve_opts = {},
                                              const ScheduleOptions& schedule_opts = {});

/// Residual energy of a distribution over excitation index on the instance spectrum.
double residual_energy(const IsingInstance& instance, const std::vector<double>& P);

}  // namespace qa
