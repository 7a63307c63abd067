#include "qa/cli.hpp"

#include "qa/analytic.hpp"
#include "qa/dynamics.hpp"
#include "qa/error.hpp"
#include "qa/experiments.hpp"
#include "qa/io.hpp"
#include "qa/ising.hpp"
#include "qa/plot.hpp"
#include "qa/rng.hpp"
#include "qa/schedule.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace qa::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw UsageError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

Picture parse_picture(const std::string& s) {
    if (s == "auto") return Picture::Auto;
    if (s == "direct") return Picture::Direct;
    if (s == "interaction") return Picture::Interaction;
    throw UsageError("unknown picture '" + s + "'");
}

std::vector<double> read_fields(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '[') {
        try {
            return json::parse(text).get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw UsageError("malformed field list in " + path.string() + ": " + e.what());
        }
    }
    std::vector<double> out;
    std::istringstream words(text);
    std::string w;
    while (words >> w) {
        out.push_back(io::parse_double(w));
    }
    return out;
}

struct Instance {
    IsingInstance inst;
    std::uint64_t seed = 0;
    std::string mode = "file";
    int k = 0;
};

Instance load_instance(const fs::path& path, BandwidthMode bw) {
    const json j = read_json_file(path);
    BuildOptions opts;
    opts.bandwidth_mode = bw;
    Instance out;
    out.inst = io::instance_from_json(j, opts);
    try {
        out.seed = j.value("seed", std::uint64_t{0});
        out.mode = j.value("mode", out.mode);
        out.k = j.value("k", 0);
    } catch (const json::exception& e) {
        throw UsageError(std::string("instance metadata schema violation: ") + e.what());
    }
    return out;
}

void print(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

struct Context {
    std::ostream& out;
    std::ostream& err;
};

// Each subcommand registers its flags and returns the action to run after parsing.
using Action = std::function<void()>;

Action add_generate(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("generate", "Generate a random Ising instance");
    struct Opts {
        std::string mode;
        int n = 0;
        std::optional<int> k;
        std::uint64_t seed = 1;
        std::string out;
        std::string bw = "fwhm-gaussian";
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--mode", o->mode, "full-random | full-random-diagonal | range-k")->required();
    cmd->add_option("--n", o->n, "Number of qubits")->required();
    cmd->add_option("--k", o->k, "Locality for range-k");
    cmd->add_option("--seed", o->seed, "Instance seed")->capture_default_str();
    cmd->add_option("--out", o->out, "Output instance JSON")->required();
    cmd->add_option("--bandwidth-mode", o->bw, "fwhm-gaussian | fwhm-histogram | full-range")
        ->capture_default_str();
    return [cmd, o, &ctx] {
        if (!cmd->parsed()) return;
        BuildOptions opts;
        opts.bandwidth_mode = parse_bandwidth_mode(o->bw);
        const InstanceMode mode = parse_instance_mode(o->mode);
        const IsingInstance inst = random_instance(mode, o->n, o->k, o->seed, opts);
        json j = io::instance_to_json(inst);
        j["seed"] = o->seed;
        j["mode"] = std::string(to_string(mode));
        if (o->k) j["k"] = *o->k;
        const fs::path path(o->out);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        std::ofstream f(path);
        if (!f) throw UsageError("cannot write " + o->out);
        f << j.dump() << '\n';
        const auto& st = inst.stats();
        print(ctx.out, {{"out", o->out},
                        {"n_qubits", inst.n_qubits()},
                        {"seed", o->seed},
                        {"mode", std::string(to_string(mode))},
                        {"bandwidth", st.bandwidth},
                        {"ground_energy", st.ground_energy},
                        {"ground_degeneracy", st.ground_degeneracy}});
    };
}

Action add_run(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("run", "Simulate one annealing run");
    struct Opts {
        std::string instance;
        std::string protocol = "p1";
        double g = 0.0;
        double ratio_T = 100.0;
        double t0_factor = 100.0;
        double rel_tol = 1e-8;
        double abs_tol = 1e-10;
        std::string picture = "auto";
        std::string trace;
        int trace_points = 200;
        std::optional<std::uint64_t> seed;
        std::string out;
        std::string bw = "fwhm-gaussian";
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--instance", o->instance, "Instance JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--protocol", o->protocol, "p1 | p2 | p3 | power:<a> | exp:<r> | const:<v>")
        ->capture_default_str();
    cmd->add_option("--g", o->g, "Annealing-time parameter g = tau_a / tau_I")->required();
    cmd->add_option("--ratio-T", o->ratio_T, "T / tau_a")->capture_default_str();
    cmd->add_option("--t0-factor", o->t0_factor, "tau_a / t0")->capture_default_str();
    cmd->add_option("--rel-tol", o->rel_tol, "Integrator relative tolerance")->capture_default_str();
    cmd->add_option("--abs-tol", o->abs_tol, "Integrator absolute tolerance")->capture_default_str();
    cmd->add_option("--picture", o->picture, "auto | direct | interaction")->capture_default_str();
    cmd->add_option("--trace", o->trace, "Write a t,n_bar,p0 trace CSV here");
    cmd->add_option("--trace-points", o->trace_points, "Trace samples")->capture_default_str();
    cmd->add_option("--seed", o->seed, "Seed echoed into the record (default: the instance's)");
    cmd->add_option("--out", o->out, "Results CSV");
    cmd->add_option("--bandwidth-mode", o->bw, "fwhm-gaussian | fwhm-histogram | full-range")
        ->capture_default_str();
    return [cmd, o, &ctx] {
        if (!cmd->parsed()) return;
        const Instance in = load_instance(o->instance, parse_bandwidth_mode(o->bw));
        const Protocol protocol = Protocol::parse(o->protocol);
        const Schedule s = make_schedule(protocol, o->g, in.inst.stats(), in.inst.n_qubits(),
                                         {o->ratio_T, o->t0_factor});
        EvolveOptions eo;
        eo.rel_tol = o->rel_tol;
        eo.abs_tol = o->abs_tol;
        eo.picture = parse_picture(o->picture);
        eo.record_trace = !o->trace.empty();
        eo.trace_points = o->trace_points;
        const auto start = std::chrono::steady_clock::now();
        const RunResult r = evolve(in.inst, s, eo);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        io::RunRecord row;
        row.seed = o->seed.value_or(in.seed);
        row.protocol = protocol.name();
        row.n_qubits = in.inst.n_qubits();
        row.g = o->g;
        row.run_id = row.protocol + "/g" + io::format_double(o->g) + "/N" +
                     std::to_string(row.n_qubits) + "/s" + std::to_string(row.seed);
        row.tau_a = s.tau_a;
        row.T = s.T;
        row.t0 = s.t0;
        row.p0 = r.p0;
        row.mean_n = r.mean_n;
        row.n_bar = r.n_bar;
        row.eps_res = r.eps_res;
        row.norm_error = r.norm_error;
        row.steps = r.integrator.steps;
        row.wall_time_s = wall;
        row.instance_mode = in.mode;
        row.k = in.k;
        row.ratio_T = o->ratio_T;
        row.t0_factor = o->t0_factor;
        row.rel_tol = o->rel_tol;
        row.abs_tol = o->abs_tol;
        if (!o->out.empty()) io::write_results_csv(o->out, {row});
        if (!o->trace.empty()) io::write_trace_csv(o->trace, r.trace);

        const auto pred = geometric_prediction(o->g, static_cast<double>(in.inst.dim()));
        json j = {{"run_id", row.run_id},  {"protocol", row.protocol}, {"N", row.n_qubits},
                  {"g", row.g},            {"seed", row.seed},         {"tau_a", row.tau_a},
                  {"T", row.T},            {"t0", row.t0},             {"p0", row.p0},
                  {"mean_n", row.mean_n},  {"n_bar", row.n_bar},       {"eps_res", row.eps_res},
                  {"norm_error", row.norm_error}, {"steps", row.steps}, {"wall_time_s", wall}};
        if (protocol.kind == ProtocolKind::P1) {
            j["analytic_n_bar"] = pred.n_bar;
            j["analytic_p0"] = pred.p0;
        }
        print(ctx.out, j);
    };
}

Action add_sweep(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("sweep", "Disorder-averaged parameter sweep");
    struct Opts {
        std::string config;
        std::string out_dir = ".";
        std::optional<int> jobs;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--config", o->config, "Sweep config JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out-dir", o->out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--jobs", o->jobs, "Worker threads (default: QA_JOBS or hardware threads)");
    return [cmd, o, &ctx] {
        if (!cmd->parsed()) return;
        SweepSpec spec = SweepSpec::from_json(read_json_file(o->config));
        if (o->jobs) {
            if (*o->jobs < 1) throw UsageError("--jobs must be >= 1");
            spec.jobs = *o->jobs;
        }
        const fs::path dir(o->out_dir);
        fs::create_directories(dir);
        const SweepResult res = sweep(spec);
        const fs::path results = dir / spec.results_csv;
        const fs::path aggregates = dir / spec.aggregates_csv;
        io::write_results_csv(results, res.rows);
        io::write_aggregates_csv(aggregates, res.aggregates);
        {
            std::ofstream f(dir / "sweep.json");
            f << spec.to_json().dump(2) << '\n';
        }
        const auto failed = std::count_if(res.rows.begin(), res.rows.end(),
                                          [](const io::RunRecord& r) { return r.status != "ok"; });
        if (failed > 0) {
            ctx.err << "warning: " << failed << " of " << res.rows.size() << " runs failed\n";
        }
        print(ctx.out, {{"rows", res.rows.size()},
                        {"failed", failed},
                        {"aggregates", res.aggregates.size()},
                        {"results_csv", results.string()},
                        {"aggregates_csv", aggregates.string()}});
    };
}

Action add_analytic(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("analytic", "Closed-form final-state distribution");
    struct Opts {
        double g = 0.0;
        int n_qubits = 0;
        std::optional<double> degeneracy;
        std::size_t max_n = 32;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--g", o->g, "g = tau_a / tau_I")->required();
    cmd->add_option("--n-qubits", o->n_qubits, "Number of qubits")->required()->check(
        CLI::Range(1, 1000));
    cmd->add_option("--degeneracy", o->degeneracy, "Ground-level degeneracy M");
    cmd->add_option("--max-n", o->max_n, "Number of P entries to print")->capture_default_str();
    return [cmd, o, &ctx] {
        if (!cmd->parsed()) return;
        const double dim = std::ldexp(1.0, o->n_qubits);
        const auto pred = geometric_prediction(o->g, dim, o->max_n);
        json j = {{"g", o->g},           {"n_qubits", o->n_qubits}, {"dim", dim},
                  {"p", pred.p},         {"p0", pred.p0},           {"mean_n", pred.mean_n},
                  {"n_bar", pred.n_bar}, {"P", pred.P}};
        if (o->degeneracy) {
            j["degeneracy"] = *o->degeneracy;
            j["p_plus"] = degenerate_prediction(o->g, dim, *o->degeneracy);
        }
        print(ctx.out, j);
    };
}

Action add_grover(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("grover", "Constant-coupling Grover search run");
    struct Opts {
        int n_qubits = 0;
        double eps = 1.0;
        bool full = false;
        std::uint64_t target = 0;
        double rel_tol = 1e-10;
        double abs_tol = 1e-12;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--n-qubits", o->n_qubits, "Number of qubits")->required()->check(
        CLI::Range(2, 24));
    cmd->add_option("--eps", o->eps, "Target energy gap")->capture_default_str();
    cmd->add_flag("--full", o->full, "Also simulate the full state space");
    cmd->add_option("--target", o->target, "Target basis state for --full")->capture_default_str();
    cmd->add_option("--rel-tol", o->rel_tol, "Integrator relative tolerance")->capture_default_str();
    cmd->add_option("--abs-tol", o->abs_tol, "Integrator absolute tolerance")->capture_default_str();
    return [cmd, o, &ctx] {
        if (!cmd->parsed()) return;
        EvolveOptions eo;
        eo.rel_tol = o->rel_tol;
        eo.abs_tol = o->abs_tol;
        const auto two = evolve_grover(o->n_qubits, o->eps, eo);
        json j = {{"n_qubits", o->n_qubits}, {"dim", std::ldexp(1.0, o->n_qubits)},
                  {"eps", o->eps},           {"g_const", two.g_const},
                  {"duration", two.duration}, {"p0_two_level", two.p0_final}};
        if (o->full) {
            j["target"] = o->target;
            j["p0_full"] = evolve_grover_full(o->n_qubits, o->eps, o->target, eo).p0_final;
        }
        print(ctx.out, j);
    };
}

Action add_sector(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("sector", "Zero-magnetization hopping model run");
    struct Opts {
        int n = 8;
        double g = 0.0;
        std::string eps_file;
        std::uint64_t seed = 1;
        SectorOptions so;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--n", o->n, "Number of spins (even)")->capture_default_str();
    cmd->add_option("--g", o->g, "Hopping strength parameter")->required();
    auto* file = cmd->add_option("--eps-file", o->eps_file, "Local fields (JSON array or whitespace list)")
                     ->check(CLI::ExistingFile);
    auto* seed = cmd->add_option("--seed", o->seed, "Seed for uniform(0, 1) local fields")
                     ->capture_default_str();
    file->excludes(seed);
    cmd->add_option("--ratio-T", o->so.ratio_T, "T / tau_a")->capture_default_str();
    cmd->add_option("--t0-factor", o->so.t0_factor, "tau_a / t0")->capture_default_str();
    cmd->add_option("--rel-tol", o->so.rel_tol, "Integrator relative tolerance")->capture_default_str();
    return [cmd, o, &ctx] {
        if (!cmd->parsed()) return;
        std::vector<double> fields;
        if (!o->eps_file.empty()) {
            fields = read_fields(o->eps_file);
        } else {
            Rng rng(o->seed);
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            fields.resize(static_cast<std::size_t>(std::max(o->n, 0)));
            for (auto& f : fields) f = unit(rng);
        }
        const SectorResult r = evolve_sector(fields, o->g, o->so);
        json j = {{"n", fields.size()},
                  {"g", o->g},
                  {"sector_dim", r.basis.size()},
                  {"p0", r.p0},
                  {"uniform_baseline", 1.0 / static_cast<double>(r.basis.size())},
                  {"wrong_spin_fraction", r.wrong_spin_fraction},
                  {"ground_mask", r.ground_mask},
                  {"tau_a", r.tau_a},
                  {"norm_error", r.norm_error},
                  {"eps", fields}};
        if (o->eps_file.empty()) j["seed"] = o->seed;
        print(ctx.out, j);
    };
}

Action add_classical(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("classical", "Simulated-annealing baseline");
    struct Opts {
        std::string instance;
        long long sweeps = 0;
        std::uint64_t seed = 1;
        std::string schedule = "geometric";
        int stages = 100;
        std::string trace;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--instance", o->instance, "Instance JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--sweeps", o->sweeps, "Number of full sweeps")->required();
    cmd->add_option("--seed", o->seed, "Metropolis seed")->capture_default_str();
    cmd->add_option("--schedule", o->schedule, "geometric | linear")->capture_default_str();
    cmd->add_option("--stages", o->stages, "Temperature stages")->capture_default_str();
    cmd->add_option("--trace", o->trace, "Write a sweep,eps_res CSV here");
    return [cmd, o, &ctx] {
        if (!cmd->parsed()) return;
        const Instance in = load_instance(o->instance, BandwidthMode::FwhmGaussian);
        SaOptions so;
        so.cooling = parse_cooling_schedule(o->schedule);
        so.stages = o->stages;
        const SaResult r = classical_sa(in.inst, o->sweeps, o->seed, so);
        if (!o->trace.empty()) {
            std::ofstream f(o->trace);
            if (!f) throw UsageError("cannot write " + o->trace);
            f << "sweep,eps_res\n";
            for (const auto& tp : r.trace) f << tp.sweep << ',' << io::format_double(tp.eps_res) << '\n';
        }
        print(ctx.out, {{"sweeps", o->sweeps},
                        {"seed", o->seed},
                        {"schedule", o->schedule},
                        {"eps_res", r.eps_res},
                        {"best_state", r.best_state},
                        {"best_energy", r.best_energy},
                        {"acceptance_rate", static_cast<double>(r.accepted) /
                                                static_cast<double>(std::max(1LL, r.proposals))}});
    };
}

Action add_relax(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("relax", "Residual energy versus annealing budget");
    struct Opts {
        std::string instance;
        std::string mode = "quantum-analytic";
        std::vector<double> budgets;
        std::uint64_t seed = 1;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--instance", o->instance, "Instance JSON")->required()->check(CLI::ExistingFile);
    cmd->add_option("--mode", o->mode, "quantum-analytic | quantum-numeric | classical-sa")
        ->capture_default_str();
    cmd->add_option("--budgets", o->budgets, "tau_a/tau_I values or sweep counts")
        ->required()
        ->delimiter(',');
    cmd->add_option("--seed", o->seed, "Seed for the classical mode")->capture_default_str();
    cmd->add_option("--out", o->out, "CSV with budget,eps_res,mode")->required();
    return [cmd, o, &ctx] {
        if (!cmd->parsed()) return;
        const Instance in = load_instance(o->instance, BandwidthMode::FwhmGaussian);
        const auto curve = relaxation_curve(parse_relaxation_mode(o->mode), in.inst, o->budgets, o->seed);
        const fs::path path(o->out);
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        std::ofstream f(path);
        if (!f) throw UsageError("cannot write " + o->out);
        f << "budget,eps_res,mode\n";
        json pts = json::array();
        for (const auto& p : curve) {
            f << io::format_double(p.budget) << ',' << io::format_double(p.eps_res) << ',' << o->mode
              << '\n';
            pts.push_back({{"budget", p.budget}, {"eps_res", p.eps_res}});
        }
        print(ctx.out, {{"mode", o->mode}, {"seed", o->seed}, {"points", pts}});
    };
}

Action add_hardware(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("hardware", "Decoherence-limited qubit-count estimate");
    struct Opts {
        double eps_max = 0.0;
        double tau_dec = 0.0;
        double n = 0.0;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--eps-max", o->eps_max, "Maximum coupling frequency (Hz)")->required();
    cmd->add_option("--tau-dec", o->tau_dec, "Decoherence time (s)")->required();
    cmd->add_option("--n", o->n, "Number of physical qubits")->required();
    return [cmd, o, &ctx] {
        if (!cmd->parsed()) return;
        const double b = hardware_estimate(o->eps_max, o->tau_dec, o->n);
        print(ctx.out, {{"bound", b}, {"n_c", std::floor(b)}});
    };
}

Action add_fit(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("fit", "Power-law exponent fits on aggregate CSVs");
    struct Opts {
        std::string in;
        std::optional<double> gmin;
        std::optional<double> gmax;
        std::optional<std::string> protocol;
        std::optional<int> n;
        bool inverse_poly = false;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--in", o->in, "Aggregate CSV")->required()->check(CLI::ExistingFile);
    auto* lo = cmd->add_option("--gmin", o->gmin, "Fit window lower g");
    auto* hi = cmd->add_option("--gmax", o->gmax, "Fit window upper g");
    lo->needs(hi);
    hi->needs(lo);
    cmd->add_option("--protocol", o->protocol, "Only this protocol");
    cmd->add_option("--n", o->n, "Only this N");
    cmd->add_flag("--inverse-poly", o->inverse_poly,
                  "Fit mean n_bar against sum_k c_k / N^k per (protocol, g) instead");
    return [cmd, o, &ctx] {
        if (!cmd->parsed()) return;
        const auto rows = io::read_aggregates_csv(o->in);
        const bool filtered = o->protocol || o->n;
        json fits = json::array();
        if (o->inverse_poly) {
            std::map<std::pair<std::string, double>, std::vector<std::pair<double, double>>> groups;
            for (const auto& a : rows) {
                if ((o->protocol && a.protocol != *o->protocol) || !std::isfinite(a.mean_n_bar)) continue;
                groups[{a.protocol, a.g}].emplace_back(a.n_qubits, a.mean_n_bar);
            }
            for (const auto& [key, pts] : groups) {
                std::vector<double> ns, vs;
                for (const auto& [n, v] : pts) {
                    ns.push_back(n);
                    vs.push_back(v);
                }
                const int order = std::min<int>(4, static_cast<int>(ns.size()) - 1);
                if (order < 0) continue;
                fits.push_back({{"protocol", key.first},
                                {"g", key.second},
                                {"order", order},
                                {"coefficients", inverse_polynomial_fit(ns, vs, order)}});
            }
            print(ctx.out, fits);
            return;
        }
        std::map<std::pair<std::string, int>, bool> keys;
        for (const auto& a : rows) {
            if ((o->protocol && a.protocol != *o->protocol) || (o->n && a.n_qubits != *o->n)) continue;
            keys[{a.protocol, a.n_qubits}] = true;
        }
        if (keys.empty()) throw UsageError("no aggregate rows match the selection");
        for (const auto& [key, _] : keys) {
            const auto pts = series(rows, key.first, key.second);
            json entry = {{"protocol", key.first}, {"N", key.second}};
            try {
                const FitResult f = o->gmin ? fit_alpha(pts, {*o->gmin, *o->gmax}) : fit_alpha(pts);
                entry["alpha"] = f.alpha;
                entry["intercept"] = f.intercept;
                entry["fit_window"] = {f.fit_window.first, f.fit_window.second};
                entry["r_squared"] = f.r_squared;
                entry["stderr_alpha"] = f.stderr_alpha;
                entry["n_points"] = f.n_points;
            } catch (const UsageError& e) {
                if (filtered && keys.size() == 1) throw;
                entry["error"] = e.what();
            }
            fits.push_back(entry);
        }
        print(ctx.out, fits);
    };
}

Action add_plot(CLI::App& app, Context& ctx) {
    auto* cmd = app.add_subcommand("plot", "Render an SVG chart");
    struct Opts {
        std::vector<std::string> in;
        std::string kind;
        std::string out;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--in", o->in, "Input CSV file(s)")->required()->check(CLI::ExistingFile);
    cmd->add_option("--kind", o->kind, "n-vs-g | n-vs-N | trace | relaxation")->required();
    cmd->add_option("--out", o->out, "Output SVG")->required();
    return [cmd, o, &ctx] {
        if (!cmd->parsed()) return;
        std::vector<fs::path> paths(o->in.begin(), o->in.end());
        plot::plot(paths, plot::parse_kind(o->kind), o->out);
        print(ctx.out, {{"out", o->out}, {"kind", o->kind}});
    };
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Nonadiabatic quantum annealing simulator", "qanneal"};
    app.require_subcommand(1);
    Context ctx{out, err};
    std::vector<Action> actions = {
        add_generate(app, ctx), add_run(app, ctx),      add_sweep(app, ctx),
        add_analytic(app, ctx), add_grover(app, ctx),   add_sector(app, ctx),
        add_classical(app, ctx), add_relax(app, ctx),   add_hardware(app, ctx),
        add_fit(app, ctx),      add_plot(app, ctx)};
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }
    try {
        for (auto& a : actions) a();
        return 0;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return 2;
    }
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace qa::cli
