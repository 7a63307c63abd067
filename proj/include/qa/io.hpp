#pragma once

#include "qa/dynamics.hpp"
#include "qa/ising.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace qa::io {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(const std::string& text);

nlohmann::json instance_to_json(const IsingInstance& inst);
IsingInstance instance_from_json(const nlohmann::json& j, const BuildOptions& opts = {});
void write_instance(const std::filesystem::path& path, const IsingInstance& inst);
IsingInstance read_instance(const std::filesystem::path& path, const BuildOptions& opts = {});

/// One simulated run, one CSV row.
struct RunRecord {
    std::string run_id;
    std::string protocol;
    int n_qubits = 0;
    double g = 0.0;
    double tau_a = 0.0;
    double T = 0.0;
    double t0 = 0.0;
    std::uint64_t seed = 0;
    double p0 = 0.0;
    double mean_n = 0.0;
    double n_bar = 0.0;
    double eps_res = 0.0;
    double norm_error = 0.0;
    std::size_t steps = 0;
    double wall_time_s = 0.0;
    std::string instance_mode;
    int k = 0;
    int realization = 0;
    double ratio_T = 0.0;
    double t0_factor = 0.0;
    double rel_tol = 0.0;
    double abs_tol = 0.0;
    std::string status = "ok";
    std::string message;
};

struct AggregateRecord {
    std::string protocol;
    int n_qubits = 0;
    double g = 0.0;
    double mean_n_bar = 0.0;
    double std_n_bar = 0.0;
    double mean_p0 = 0.0;
    double mean_eps_res = 0.0;
    int n_realizations = 0;
};

/// Header plus string cells. Cells never contain commas or newlines.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;  ///< throws UsageError if missing
};

CsvTable read_csv(const std::filesystem::path& path);

void write_results_csv(const std::filesystem::path& path, const std::vector<RunRecord>& rows);
std::vector<RunRecord> read_results_csv(const std::filesystem::path& path);

void write_aggregates_csv(const std::filesystem::path& path,
                          const std::vector<AggregateRecord>& rows);
std::vector<AggregateRecord> read_aggregates_csv(const std::filesystem::path& path);

void write_trace_csv(const std::filesystem::path& path, const std::vector<TracePoint>& trace);

}  // namespace qa::io
