#include "qa/experiments.hpp"

#include "qa/analytic.hpp"
#include "qa/error.hpp"
#include "qa/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

namespace qa {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string run_id(const std::string& protocol, double g, int n, int r) {
    return protocol + "/g" + io::format_double(g) + "/N" + std::to_string(n) + "/r" +
           std::to_string(r);
}

}  // namespace

SweepSpec SweepSpec::from_json(const nlohmann::json& j) {
    static const std::set<std::string> known = {
        "instance_mode", "k",        "n",       "realizations",   "master_seed",
        "protocols",     "g",        "ratio_T", "t0_factor",      "rel_tol",
        "abs_tol",       "bandwidth_mode", "jobs", "results_csv", "aggregates_csv"};
    if (!j.is_object()) {
        throw UsageError("sweep config must be a JSON object");
    }
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) {
            throw UsageError("unknown sweep config key '" + key + "'");
        }
    }
    SweepSpec s;
    try {
        if (j.contains("instance_mode")) {
            s.instance_mode = parse_instance_mode(j.at("instance_mode").get<std::string>());
        }
        if (j.contains("k")) {
            s.k = j.at("k").get<int>();
        }
        const auto& n = j.at("n");
        s.n_list = n.is_array() ? n.get<std::vector<int>>() : std::vector<int>{n.get<int>()};
        s.realizations = j.value("realizations", s.realizations);
        s.master_seed = j.value("master_seed", s.master_seed);
        s.protocols = j.at("protocols").get<std::vector<std::string>>();
        s.g_list = j.at("g").get<std::vector<double>>();
        s.schedule.ratio_T = j.value("ratio_T", s.schedule.ratio_T);
        s.schedule.t0_factor = j.value("t0_factor", s.schedule.t0_factor);
        s.rel_tol = j.value("rel_tol", s.rel_tol);
        s.abs_tol = j.value("abs_tol", s.abs_tol);
        if (j.contains("bandwidth_mode")) {
            s.bandwidth_mode = parse_bandwidth_mode(j.at("bandwidth_mode").get<std::string>());
        }
        s.jobs = j.value("jobs", s.jobs);
        s.results_csv = j.value("results_csv", s.results_csv);
        s.aggregates_csv = j.value("aggregates_csv", s.aggregates_csv);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("sweep config schema violation: ") + e.what());
    }
    s.validate();
    return s;
}

nlohmann::json SweepSpec::to_json() const {
    nlohmann::json j;
    j["instance_mode"] = std::string(to_string(instance_mode));
    if (k) {
        j["k"] = *k;
    }
    j["n"] = n_list;
    j["realizations"] = realizations;
    j["master_seed"] = master_seed;
    j["protocols"] = protocols;
    j["g"] = g_list;
    j["ratio_T"] = schedule.ratio_T;
    j["t0_factor"] = schedule.t0_factor;
    j["rel_tol"] = rel_tol;
    j["abs_tol"] = abs_tol;
    j["bandwidth_mode"] = std::string(to_string(bandwidth_mode));
    j["jobs"] = jobs;
    j["results_csv"] = results_csv;
    j["aggregates_csv"] = aggregates_csv;
    return j;
}

void SweepSpec::validate() const {
    if (n_list.empty() || protocols.empty() || g_list.empty()) {
        throw UsageError("sweep needs at least one N, one protocol and one g");
    }
    for (int n : n_list) {
        if (n < 1 || n > kDefaultMaxQubits) {
            throw UsageError("sweep N out of range: " + std::to_string(n));
        }
        if (instance_mode == InstanceMode::RangeK && (!k || *k < 1 || *k > n)) {
            throw UsageError("range-k sweep needs 1 <= k <= N");
        }
    }
    for (const auto& p : protocols) {
        Protocol::parse(p);
    }
    for (double g : g_list) {
        if (!(g > 0.0)) {
            throw UsageError("sweep g values must be positive");
        }
    }
    if (realizations < 1) {
        throw UsageError("realizations must be >= 1");
    }
    if (!(schedule.ratio_T > 1.0) || !(schedule.t0_factor > 1.0)) {
        throw UsageError("ratio_T and t0_factor must exceed 1");
    }
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw UsageError("tolerances must be positive");
    }
    if (jobs < 0) {
        throw UsageError("jobs must be >= 0");
    }
}

int default_jobs() {
    if (const char* env = std::getenv("QA_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0) {
            return v;
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::uint64_t realization_seed(std::uint64_t master_seed, int n_qubits, int realization) {
    return derive_seed({master_seed, static_cast<std::uint64_t>(n_qubits),
                        static_cast<std::uint64_t>(realization)});
}

SweepResult sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<Protocol> protocols;
    std::vector<std::string> names;
    for (const auto& p : spec.protocols) {
        protocols.push_back(Protocol::parse(p));
        names.push_back(protocols.back().name());
    }
    const std::size_t n_p = protocols.size();
    const std::size_t n_g = spec.g_list.size();
    const std::size_t n_n = spec.n_list.size();
    const std::size_t n_r = static_cast<std::size_t>(spec.realizations);

    std::vector<io::RunRecord> rows(n_p * n_g * n_n * n_r);
    auto row_index = [&](std::size_t pi, std::size_t gi, std::size_t ni, std::size_t r) {
        return ((pi * n_g + gi) * n_n + ni) * n_r + r;
    };

    EvolveOptions eopts;
    eopts.rel_tol = spec.rel_tol;
    eopts.abs_tol = spec.abs_tol;
    BuildOptions bopts;
    bopts.bandwidth_mode = spec.bandwidth_mode;

    auto run_task = [&](std::size_t task) {
        const std::size_t ni = task / n_r;
        const std::size_t r = task % n_r;
        const int n = spec.n_list[ni];
        const std::uint64_t seed = realization_seed(spec.master_seed, n, static_cast<int>(r));

        std::optional<IsingInstance> inst;
        std::string build_error;
        try {
            inst = random_instance(spec.instance_mode, n, spec.k, seed, bopts);
        } catch (const std::exception& e) {
            build_error = e.what();
        }
        for (std::size_t pi = 0; pi < n_p; ++pi) {
            for (std::size_t gi = 0; gi < n_g; ++gi) {
                const double g = spec.g_list[gi];
                io::RunRecord& row = rows[row_index(pi, gi, ni, r)];
                row.run_id = run_id(names[pi], g, n, static_cast<int>(r));
                row.protocol = names[pi];
                row.n_qubits = n;
                row.g = g;
                row.seed = seed;
                row.instance_mode = std::string(to_string(spec.instance_mode));
                row.k = spec.k.value_or(0);
                row.realization = static_cast<int>(r);
                row.ratio_T = spec.schedule.ratio_T;
                row.t0_factor = spec.schedule.t0_factor;
                row.rel_tol = spec.rel_tol;
                row.abs_tol = spec.abs_tol;
                if (!inst) {
                    row.status = "failed";
                    row.message = build_error;
                    row.p0 = row.mean_n = row.n_bar = row.eps_res = row.norm_error = kNaN;
                    continue;
                }
                const auto start = std::chrono::steady_clock::now();
                try {
                    const Schedule s =
                        make_schedule(protocols[pi], g, inst->stats(), n, spec.schedule);
                    row.tau_a = s.tau_a;
                    row.T = s.T;
                    row.t0 = s.t0;
                    const RunResult res = evolve(*inst, s, eopts);
                    row.p0 = res.p0;
                    row.mean_n = res.mean_n;
                    row.n_bar = res.n_bar;
                    row.eps_res = res.eps_res;
                    row.norm_error = res.norm_error;
                    row.steps = res.integrator.steps;
                } catch (const std::exception& e) {
                    row.status = "failed";
                    row.message = e.what();
                    row.p0 = row.mean_n = row.n_bar = row.eps_res = row.norm_error = kNaN;
                }
                row.wall_time_s =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            }
        }
    };

    const std::size_t n_tasks = n_n * n_r;
    const int jobs = static_cast<int>(
        std::min<std::size_t>(spec.jobs > 0 ? spec.jobs : default_jobs(), n_tasks));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < n_tasks; t = next++) {
            run_task(t);
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int i = 0; i < jobs; ++i) {
            pool.emplace_back(worker);
        }
    }

    SweepResult out;
    out.rows = std::move(rows);
    out.aggregates = aggregate(out.rows);
    return out;
}

std::vector<io::AggregateRecord> aggregate(const std::vector<io::RunRecord>& rows) {
    using Key = std::tuple<std::string, double, int>;
    std::vector<Key> order;
    std::map<Key, std::vector<const io::RunRecord*>> groups;
    for (const auto& r : rows) {
        Key key{r.protocol, r.g, r.n_qubits};
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) {
            order.push_back(key);
        }
        if (r.status == "ok") {
            it->second.push_back(&r);
        }
    }
    std::vector<io::AggregateRecord> out;
    for (const auto& key : order) {
        const auto& members = groups[key];
        io::AggregateRecord a;
        a.protocol = std::get<0>(key);
        a.g = std::get<1>(key);
        a.n_qubits = std::get<2>(key);
        a.n_realizations = static_cast<int>(members.size());
        if (members.empty()) {
            a.mean_n_bar = a.std_n_bar = a.mean_p0 = a.mean_eps_res = kNaN;
            out.push_back(a);
            continue;
        }
        const double m = static_cast<double>(members.size());
        double s_nbar = 0.0, s_p0 = 0.0, s_eps = 0.0;
        for (const auto* r : members) {
            s_nbar += r->n_bar;
            s_p0 += r->p0;
            s_eps += r->eps_res;
        }
        a.mean_n_bar = s_nbar / m;
        a.mean_p0 = s_p0 / m;
        a.mean_eps_res = s_eps / m;
        double ss = 0.0;
        for (const auto* r : members) {
            ss += (r->n_bar - a.mean_n_bar) * (r->n_bar - a.mean_n_bar);
        }
        a.std_n_bar = members.size() > 1 ? std::sqrt(ss / (m - 1.0)) : 0.0;
        out.push_back(a);
    }
    return out;
}

std::pair<double, double> default_fit_window(const std::vector<double>& g_values) {
    if (g_values.empty()) {
        throw UsageError("no g values to choose a fit window from");
    }
    const auto [lo, hi] = std::minmax_element(g_values.begin(), g_values.end());
    if (!(*lo > 0.0)) {
        throw UsageError("fit window needs positive g values");
    }
    return {std::sqrt(*lo * *hi), *hi};
}

FitResult fit_alpha(const std::vector<std::pair<double, double>>& g_nbar,
                    std::pair<double, double> window) {
    const double slack = 1e-9;
    std::vector<double> xs, ys;
    for (const auto& [g, nbar] : g_nbar) {
        if (g < window.first * (1.0 - slack) || g > window.second * (1.0 + slack)) {
            continue;
        }
        if (!(g > 0.0) || !(nbar > 0.0)) {
            throw UsageError("fit needs positive g and n_bar inside the window");
        }
        xs.push_back(std::log(g));
        ys.push_back(std::log(nbar));
    }
    if (xs.size() < 4) {
        throw UsageError("fit needs at least 4 points inside the window, found " +
                         std::to_string(xs.size()));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw UsageError("fit needs at least two distinct g values");
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (intercept + slope * xs[i]);
        ssr += e * e;
    }
    FitResult f;
    f.alpha = -slope;
    f.intercept = intercept;
    f.fit_window = window;
    f.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    f.stderr_alpha = std::sqrt(ssr / (n - 2.0) / sxx);
    f.n_points = xs.size();
    return f;
}

FitResult fit_alpha(const std::vector<std::pair<double, double>>& g_nbar) {
    std::vector<double> gs;
    for (const auto& pt : g_nbar) {
        gs.push_back(pt.first);
    }
    return fit_alpha(g_nbar, default_fit_window(gs));
}

std::vector<std::pair<double, double>> series(const std::vector<io::AggregateRecord>& aggregates,
                                              const std::string& protocol, int n_qubits) {
    std::vector<std::pair<double, double>> out;
    for (const auto& a : aggregates) {
        if (a.protocol == protocol && a.n_qubits == n_qubits) {
            out.emplace_back(a.g, a.mean_n_bar);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> inverse_polynomial_fit(const std::vector<double>& n_values,
                                           const std::vector<double>& values, int order) {
    if (order < 0 || n_values.size() != values.size() ||
        n_values.size() < static_cast<std::size_t>(order) + 1) {
        throw UsageError("inverse polynomial fit needs at least order + 1 matching points");
    }
    const Eigen::Index rows = static_cast<Eigen::Index>(n_values.size());
    Eigen::MatrixXd A(rows, order + 1);
    Eigen::VectorXd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (!(n_values[i] > 0.0)) {
            throw UsageError("inverse polynomial fit needs positive N");
        }
        double x = 1.0;
        for (int c = 0; c <= order; ++c) {
            A(i, c) = x;
            x /= n_values[i];
        }
        b(i) = values[i];
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
    return {c.data(), c.data() + c.size()};
}

double inverse_polynomial_eval(const std::vector<double>& coeffs, double n) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = acc / n + *it;
    }
    return acc;
}

CoolingSchedule parse_cooling_schedule(std::string_view name) {
    if (name == "geometric") {
        return CoolingSchedule::Geometric;
    }
    if (name == "linear") {
        return CoolingSchedule::Linear;
    }
    throw UsageError("unknown cooling schedule '" + std::string(name) + "'");
}

SaResult classical_sa(const IsingInstance& instance, long long sweeps, std::uint64_t seed,
                      const SaOptions& opts) {
    if (sweeps < 1) {
        throw UsageError("classical annealing needs at least one sweep");
    }
    if (opts.stages < 1) {
        throw UsageError("classical annealing needs at least one temperature stage");
    }
    const auto& st = instance.stats();
    if (st.zero_bandwidth) {
        throw UsageError("classical annealing needs a nonzero bandwidth");
    }
    const auto& diag = instance.diagonal();
    const int n = instance.n_qubits();
    const double t_max = st.bandwidth;
    const double t_min = std::min(st.mean_level_spacing, t_max);

    Rng rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick_state(0, instance.dim() - 1);
    std::uniform_int_distribution<int> pick_site(0, std::max(n - 1, 0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Log-spaced sweep counts at which the best-so-far residual is recorded.
    std::vector<long long> marks;
    const int n_marks = std::max(opts.trace_points, 1);
    for (int i = 0; i < n_marks; ++i) {
        const double frac = n_marks == 1 ? 1.0 : static_cast<double>(i) / (n_marks - 1);
        const auto m = static_cast<long long>(
            std::llround(std::exp(frac * std::log(static_cast<double>(sweeps)))));
        if (marks.empty() || m > marks.back()) {
            marks.push_back(std::min(m, sweeps));
        }
    }
    if (marks.back() != sweeps) {
        marks.push_back(sweeps);
    }

    SaResult res;
    std::uint64_t state = pick_state(rng);
    double energy = diag[state];
    res.best_state = state;
    res.best_energy = energy;

    std::size_t mark = 0;
    const int stages = opts.stages;
    for (long long sweep = 0; sweep < sweeps; ++sweep) {
        const int stage = static_cast<int>((sweep * stages) / sweeps);
        const double frac = stages == 1 ? 1.0 : static_cast<double>(stage) / (stages - 1);
        const double temp = opts.cooling == CoolingSchedule::Geometric
                                ? t_max * std::pow(t_min / t_max, frac)
                                : t_max + (t_min - t_max) * frac;
        for (int step = 0; step < n; ++step) {
            const std::uint64_t cand = state ^ (std::uint64_t{1} << pick_site(rng));
            const double delta = diag[cand] - energy;
            ++res.proposals;
            if (delta <= 0.0 || unit(rng) < std::exp(-delta / temp)) {
                state = cand;
                energy = diag[cand];
                ++res.accepted;
                if (energy < res.best_energy) {
                    res.best_energy = energy;
                    res.best_state = state;
                }
            }
        }
        while (mark < marks.size() && marks[mark] == sweep + 1) {
            res.trace.push_back({sweep + 1, res.best_energy - st.ground_energy});
            ++mark;
        }
    }
    res.eps_res = res.best_energy - st.ground_energy;
    return res;
}

RelaxationMode parse_relaxation_mode(std::string_view name) {
    if (name == "quantum-analytic") {
        return RelaxationMode::QuantumAnalytic;
    }
    if (name == "quantum-numeric") {
        return RelaxationMode::QuantumNumeric;
    }
    if (name == "classical-sa") {
        return RelaxationMode::ClassicalSa;
    }
    throw UsageError("unknown relaxation mode '" + std::string(name) + "'");
}

double residual_energy(const IsingInstance& instance, const std::vector<double>& P) {
    double acc = 0.0;
    for (std::size_t n = 0; n < P.size() && n < instance.dim(); ++n) {
        acc += P[n] * instance.excitation_energy(n);
    }
    return acc;
}

std::vector<RelaxationPoint> relaxation_curve(RelaxationMode mode, const IsingInstance& instance,
                                              const std::vector<double>& budgets,
                                              std::uint64_t seed, const EvolveOptions& evolve_opts,
                                              const ScheduleOptions& schedule_opts) {
    if (instance.stats().zero_bandwidth) {
        throw UsageError("relaxation curve needs a nonzero bandwidth");
    }
    std::vector<RelaxationPoint> out;
    for (std::size_t i = 0; i < budgets.size(); ++i) {
        const double b = budgets[i];
        if (!(b > 0.0)) {
            throw UsageError("relaxation budgets must be positive");
        }
        RelaxationPoint pt{b, 0.0};
        switch (mode) {
            case RelaxationMode::QuantumAnalytic: {
                const auto pred = geometric_prediction(b, static_cast<double>(instance.dim()));
                pt.eps_res = residual_energy(instance, pred.P);
                break;
            }
            case RelaxationMode::QuantumNumeric: {
                const Schedule s = make_schedule(Protocol{}, b, instance.stats(),
                                                 instance.n_qubits(), schedule_opts);
                pt.eps_res = evolve(instance, s, evolve_opts).eps_res;
                break;
            }
            case RelaxationMode::ClassicalSa: {
                const long long sweeps = std::max<long long>(1, std::llround(b));
                pt.eps_res = classical_sa(instance, sweeps, derive_seed({seed, i})).eps_res;
                break;
            }
        }
        out.push_back(pt);
    }
    return out;
}

}  // namespace qa
