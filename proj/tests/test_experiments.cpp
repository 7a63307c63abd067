#include "qa/analytic.hpp"
#include "qa/error.hpp"
#include "qa/experiments.hpp"

#include "support.hpp"

#include <doctest.h>

#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

using namespace qa;

namespace {

SweepSpec small_spec() {
    SweepSpec s;
    s.instance_mode = InstanceMode::FullRandomCouplings;
    s.n_list = {3, 4};
    s.realizations = 3;
    s.master_seed = 17;
    s.protocols = {"p1", "p2"};
    s.g_list = {1.0, 2.0};
    s.jobs = 1;
    return s;
}

std::uint64_t bits(double v) { return std::bit_cast<std::uint64_t>(v); }

bool same_metrics(const io::RunRecord& a, const io::RunRecord& b) {
    return a.run_id == b.run_id && a.seed == b.seed && a.status == b.status && bits(a.p0) == bits(b.p0) &&
           bits(a.mean_n) == bits(b.mean_n) && bits(a.n_bar) == bits(b.n_bar) &&
           bits(a.eps_res) == bits(b.eps_res) && a.steps == b.steps;
}

}  // namespace

TEST_CASE("sweep row and aggregate counts") {
    SweepSpec s;
    s.n_list = {3};
    s.realizations = 2;
    s.protocols = {"p1"};
    s.g_list = {1.0};
    s.jobs = 1;
    const auto r = sweep(s);
    CHECK(r.rows.size() == 2);
    CHECK(r.aggregates.size() == 1);
    CHECK(r.aggregates[0].n_realizations == 2);

    const auto big = sweep(small_spec());
    CHECK(big.rows.size() == 2 * 2 * 2 * 3);
    CHECK(big.aggregates.size() == 2 * 2 * 2);
    CHECK(big.rows.front().protocol == "p1");
    CHECK(big.rows.back().protocol == "p2");
}

TEST_CASE("sweeps are deterministic and independent of the thread count") {
    auto spec = small_spec();
    const auto a = sweep(spec);
    const auto b = sweep(spec);
    spec.jobs = 3;
    const auto c = sweep(spec);
    REQUIRE(a.rows.size() == b.rows.size());
    REQUIRE(a.rows.size() == c.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(same_metrics(a.rows[i], b.rows[i]));
        CHECK(same_metrics(a.rows[i], c.rows[i]));
    }
    std::map<std::string, int> ids;
    for (const auto& row : a.rows) ++ids[row.run_id];
    CHECK(ids.size() == a.rows.size());
}

TEST_CASE("instances are shared across protocols and g within a realization") {
    const auto r = sweep(small_spec());
    std::map<std::pair<int, int>, std::uint64_t> seeds;
    for (const auto& row : r.rows) {
        const auto key = std::make_pair(row.n_qubits, row.realization);
        auto [it, fresh] = seeds.emplace(key, row.seed);
        if (!fresh) CHECK(it->second == row.seed);
        CHECK(row.seed == realization_seed(17, row.n_qubits, row.realization));
    }
}

TEST_CASE("aggregates agree with a direct recomputation") {
    const auto r = sweep(small_spec());
    for (const auto& agg : r.aggregates) {
        std::vector<double> v;
        double p0 = 0.0;
        for (const auto& row : r.rows) {
            if (row.protocol == agg.protocol && row.n_qubits == agg.n_qubits && row.g == agg.g) {
                v.push_back(row.n_bar);
                p0 += row.p0;
            }
        }
        REQUIRE(v.size() == 3);
        const double mean = std::accumulate(v.begin(), v.end(), 0.0) / 3.0;
        double ss = 0.0;
        for (double x : v) ss += (x - mean) * (x - mean);
        CHECK(std::abs(agg.mean_n_bar - mean) < 1e-12);
        CHECK(std::abs(agg.std_n_bar - std::sqrt(ss / 2.0)) < 1e-12);
        CHECK(std::abs(agg.mean_p0 - p0 / 3.0) < 1e-12);
    }
}

TEST_CASE("failed runs are flagged and excluded from aggregates") {
    SweepSpec s;
    s.n_list = {6};
    s.realizations = 2;
    s.protocols = {"p2"};
    s.g_list = {4.0};
    s.rel_tol = 0.5;
    s.abs_tol = 0.5;
    s.jobs = 1;
    const auto r = sweep(s);
    REQUIRE(r.rows.size() == 2);
    for (const auto& row : r.rows) {
        CHECK(row.status == "failed");
        CHECK(std::isnan(row.n_bar));
        CHECK_FALSE(row.message.empty());
    }
    REQUIRE(r.aggregates.size() == 1);
    CHECK(r.aggregates[0].n_realizations == 0);
    CHECK(std::isnan(r.aggregates[0].mean_n_bar));
}

TEST_CASE("sweep spec validation and json") {
    auto j = small_spec().to_json();
    const auto back = SweepSpec::from_json(j);
    CHECK(back.n_list == small_spec().n_list);
    CHECK(back.g_list == small_spec().g_list);
    CHECK(back.protocols == small_spec().protocols);
    CHECK(back.master_seed == 17);

    auto bad = j;
    bad["unknown_key"] = 1;
    CHECK_THROWS_AS(SweepSpec::from_json(bad), UsageError);
    bad = j;
    bad["protocols"] = {"p9"};
    CHECK_THROWS_AS(SweepSpec::from_json(bad), UsageError);
    bad = j;
    bad["g"] = {-1.0};
    CHECK_THROWS_AS(SweepSpec::from_json(bad), UsageError);
    bad = j;
    bad["realizations"] = 0;
    CHECK_THROWS_AS(SweepSpec::from_json(bad), UsageError);
    bad = j;
    bad["instance_mode"] = "range-k";
    bad.erase("k");
    CHECK_THROWS_AS(SweepSpec::from_json(bad), UsageError);
}

TEST_CASE("power-law fit") {
    std::vector<std::pair<double, double>> pts;
    for (double g = 1.0; g <= 64.0; g *= 2.0) pts.emplace_back(g, 3.0 / (g * g));
    auto f = fit_alpha(pts);
    CHECK(f.alpha == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.fit_window.first == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(f.fit_window.second == 64.0);
    CHECK(f.n_points == 4);

    pts.clear();
    for (double g = 1.0; g <= 64.0; g *= 2.0) pts.emplace_back(g, 0.5 / g);
    f = fit_alpha(pts, {1.0, 64.0});
    CHECK(f.alpha == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f.n_points == 7);

    CHECK_THROWS_AS(fit_alpha(pts, {32.0, 64.0}), UsageError);
    auto neg = pts;
    neg[6].second = -1.0;
    CHECK_THROWS_AS(fit_alpha(neg, {1.0, 64.0}), UsageError);
}

TEST_CASE("inverse polynomial fit recovers exact coefficients") {
    const std::vector<double> c{0.3, -1.2, 2.5};
    std::vector<double> ns, vs;
    for (int n = 4; n <= 14; ++n) {
        ns.push_back(n);
        vs.push_back(c[0] + c[1] / n + c[2] / (double(n) * n));
    }
    const auto fit = inverse_polynomial_fit(ns, vs, 2);
    REQUIRE(fit.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(fit[k] == doctest::Approx(c[k]).epsilon(1e-9));
    CHECK(inverse_polynomial_eval(fit, 7.0) == doctest::Approx(vs[3]).epsilon(1e-12));
    CHECK_THROWS_AS(inverse_polynomial_fit({1.0, 2.0}, {1.0, 2.0}, 4), UsageError);
}

TEST_CASE("classical annealing") {
    std::vector<IsingTerm> chain;
    for (int q = 0; q + 1 < 8; ++q) chain.push_back({(1ull << q) | (1ull << (q + 1)), -1.0});
    const auto ferro = build_instance(8, chain);

    SUBCASE("ferromagnetic chain reaches a ground state") {
        const auto r = classical_sa(ferro, 2000, 5);
        CHECK(r.eps_res == 0.0);
        CHECK((r.best_state == 0 || r.best_state == 0xff));
        CHECK(r.proposals == 2000 * 8);
        CHECK(r.best_energy == doctest::Approx(-7.0).epsilon(1e-14));
    }
    SUBCASE("deterministic for a given seed") {
        const auto inst = random_instance(InstanceMode::FullRandomCouplings, 8, std::nullopt, 2);
        const auto a = classical_sa(inst, 100, 9);
        const auto b = classical_sa(inst, 100, 9);
        CHECK(a.eps_res == b.eps_res);
        CHECK(a.accepted == b.accepted);
        CHECK(a.best_state == b.best_state);
        SaOptions lin;
        lin.cooling = CoolingSchedule::Linear;
        CHECK_NOTHROW(classical_sa(inst, 100, 9, lin));
    }
    SUBCASE("trace is non-increasing") {
        const auto inst = random_instance(InstanceMode::FullRandomDiagonal, 8, std::nullopt, 3);
        const auto r = classical_sa(inst, 500, 1);
        REQUIRE(r.trace.size() >= 2);
        for (std::size_t i = 1; i < r.trace.size(); ++i) {
            CHECK(r.trace[i].eps_res <= r.trace[i - 1].eps_res);
            CHECK(r.trace[i].sweep > r.trace[i - 1].sweep);
        }
        CHECK(r.trace.back().eps_res == r.eps_res);
    }
    CHECK_THROWS_AS(classical_sa(ferro, 0, 1), UsageError);
    CHECK_THROWS_AS(parse_cooling_schedule("cubic"), UsageError);
}

TEST_CASE("relaxation curves") {
    SUBCASE("equally spaced spectrum: residual energy is spacing times mean excitation") {
        const int n = 8;
        std::vector<double> d(256);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = 0.01 * static_cast<double>((i * 37) % 256);
        const auto inst = instance_from_diagonal(n, d);
        const auto curve = relaxation_curve(RelaxationMode::QuantumAnalytic, inst, {1.0, 4.0, 16.0});
        for (const auto& pt : curve) {
            CHECK(pt.eps_res == doctest::Approx(0.01 * geometric_mean_n(pt.budget, 256.0)).epsilon(1e-12));
        }
    }
    SUBCASE("analytic curve decays as 1/budget on a smooth spectrum") {
        Rng rng(4);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::vector<double> d(1 << 14);
        for (auto& x : d) x = unit(rng);
        const auto inst = instance_from_diagonal(14, d);
        std::vector<double> budgets{8.0, 16.0, 32.0, 64.0, 128.0};
        const auto curve = relaxation_curve(RelaxationMode::QuantumAnalytic, inst, budgets);
        std::vector<std::pair<double, double>> pts;
        for (const auto& pt : curve) pts.emplace_back(pt.budget, pt.eps_res);
        const auto f = fit_alpha(pts, {8.0, 128.0});
        CHECK(f.alpha > 0.85);
        CHECK(f.alpha < 1.15);
    }
    SUBCASE("numeric and analytic quantum modes agree") {
        const auto inst = random_instance(InstanceMode::FullRandomCouplings, 6, std::nullopt, 8);
        const auto a = relaxation_curve(RelaxationMode::QuantumAnalytic, inst, {2.0});
        const auto q = relaxation_curve(RelaxationMode::QuantumNumeric, inst, {2.0});
        CHECK(q[0].eps_res == doctest::Approx(a[0].eps_res).epsilon(0.05));
    }
    SUBCASE("classical residual energy falls with sweeps on average") {
        const auto inst = random_instance(InstanceMode::FullRandomCouplings, 10, std::nullopt, 6);
        double few = 0.0, many = 0.0;
        for (std::uint64_t s = 0; s < 8; ++s) {
            few += relaxation_curve(RelaxationMode::ClassicalSa, inst, {2.0}, s)[0].eps_res;
            many += relaxation_curve(RelaxationMode::ClassicalSa, inst, {400.0}, s)[0].eps_res;
        }
        CHECK(many < few);
    }
    CHECK_THROWS_AS(parse_relaxation_mode("annealing"), UsageError);
}
