#include "qa/cli.hpp"
#include "qa/error.hpp"
#include "qa/io.hpp"
#include "qa/plot.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

using namespace qa;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("qa_test_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation qanneal(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

int count(const std::string& hay, const std::string& needle) {
    int n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("shortest double formatting round-trips") {
    for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324,
                     std::numeric_limits<double>::max()}) {
        CHECK(io::parse_double(io::format_double(v)) == v);
    }
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(std::isnan(io::parse_double(io::format_double(std::nan("")))));
    CHECK_THROWS_AS(io::parse_double("1.0x"), UsageError);
    CHECK_THROWS_AS(io::parse_double(""), UsageError);
}

TEST_CASE("results and aggregates CSV round-trip") {
    TempDir dir;
    io::RunRecord a;
    a.run_id = "p1/g2/N4/r0";
    a.protocol = "p1";
    a.n_qubits = 4;
    a.g = 2.0;
    a.tau_a = 1.0 / 3.0;
    a.seed = 18446744073709551615ull;
    a.p0 = 0.123456789012345;
    a.n_bar = std::nan("");
    a.steps = 42;
    a.message = "bad, really\nbad";
    a.status = "failed";
    io::write_results_csv(dir / "r.csv", {a});
    const auto back = io::read_results_csv(dir / "r.csv");
    REQUIRE(back.size() == 1);
    CHECK(back[0].run_id == a.run_id);
    CHECK(back[0].tau_a == a.tau_a);
    CHECK(back[0].seed == a.seed);
    CHECK(back[0].p0 == a.p0);
    CHECK(std::isnan(back[0].n_bar));
    CHECK(back[0].steps == 42);
    CHECK(back[0].status == "failed");
    CHECK(back[0].message.find(',') == std::string::npos);

    io::AggregateRecord g{"p2", 6, 0.25, 0.3, 0.01, 0.5, 0.02, 25};
    io::write_aggregates_csv(dir / "a.csv", {g});
    const auto ag = io::read_aggregates_csv(dir / "a.csv");
    REQUIRE(ag.size() == 1);
    CHECK(ag[0].protocol == "p2");
    CHECK(ag[0].g == 0.25);
    CHECK(ag[0].n_realizations == 25);

    const auto table = io::read_csv(dir / "r.csv");
    CHECK(table.header.front() == "run_id");
    CHECK(table.column("N") == 2);
    CHECK_THROWS_AS(table.column("nope"), UsageError);
}

TEST_CASE("instance JSON round-trip") {
    TempDir dir;
    const auto inst = random_instance(InstanceMode::RangeK, 6, 2, 4);
    io::write_instance(dir / "i.json", inst);
    const auto back = io::read_instance(dir / "i.json");
    CHECK(back.diagonal() == inst.diagonal());
    CHECK(back.terms().size() == inst.terms().size());
    std::ofstream(dir / "bad.json") << "{\"n_qubits\": 2}";
    CHECK_THROWS_AS(io::read_instance(dir / "bad.json"), UsageError);
}

TEST_CASE("generate then run") {
    TempDir dir;
    auto gen = qanneal({"generate", "--mode", "full-random", "--n", "6", "--seed", "3", "--out", dir / "inst.json"});
    REQUIRE(gen.code == 0);
    auto run = qanneal({"run", "--instance", dir / "inst.json", "--protocol", "p1", "--g", "2",
                        "--out", dir / "run.csv", "--trace", dir / "trace.csv", "--trace-points", "20"});
    REQUIRE(run.code == 0);
    const auto j = nlohmann::json::parse(run.out);
    CHECK(j["N"] == 6);
    CHECK(j["seed"] == 3);
    CHECK(std::abs(j["n_bar"].get<double>() - j["analytic_n_bar"].get<double>()) < 0.01);
    CHECK(j["norm_error"].get<double>() < 1e-6);
    const auto rows = io::read_results_csv(dir / "run.csv");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n_bar == j["n_bar"].get<double>());
    CHECK(io::read_csv(dir / "trace.csv").rows.size() == 20);
}

TEST_CASE("analytic subcommand") {
    auto r = qanneal({"analytic", "--g", "2", "--n-qubits", "12"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["p"].get<double>() == doctest::Approx(std::exp(-4.0 * std::numbers::pi / 4096.0)).epsilon(1e-15));
    CHECK(j["P"].size() == 32);
}

TEST_CASE("exit codes") {
    TempDir dir;
    CHECK(qanneal({"analytic", "--g", "1", "--n-qubits", "4"}).code == 0);
    CHECK(qanneal({"nonsense"}).code == 1);
    CHECK(qanneal({"analytic", "--g", "-1", "--n-qubits", "4"}).code == 1);
    CHECK(qanneal({"run", "--instance", dir / "missing.json", "--g", "1"}).code == 1);
    REQUIRE(qanneal({"generate", "--mode", "full-random", "--n", "6", "--out", dir / "i.json"}).code == 0);
    CHECK(qanneal({"run", "--instance", dir / "i.json", "--protocol", "p7", "--g", "1"}).code == 1);
    const auto bad = qanneal({"run", "--instance", dir / "i.json", "--protocol", "p2", "--g", "4",
                              "--rel-tol", "0.5", "--abs-tol", "0.5"});
    CHECK(bad.code == 2);
    CHECK_FALSE(bad.err.empty());
}

TEST_CASE("short final times leave residual nonadiabatic excitation") {
    TempDir dir;
    REQUIRE(qanneal({"generate", "--mode", "full-random", "--n", "6", "--seed", "9", "--out", dir / "i.json"}).code == 0);
    auto deviation = [&](const std::string& ratio) {
        const auto r = qanneal({"run", "--instance", dir / "i.json", "--g", "2", "--ratio-T", ratio});
        REQUIRE(r.code == 0);
        const auto j = nlohmann::json::parse(r.out);
        return std::abs(j["n_bar"].get<double>() - j["analytic_n_bar"].get<double>());
    };
    CHECK(deviation("100") < deviation("1.5"));
}

TEST_CASE("sweep subcommand writes its outputs") {
    TempDir dir;
    nlohmann::json cfg = {{"instance_mode", "full-random"}, {"n", {3, 4}},  {"realizations", 2},
                          {"protocols", {"p1", "p2"}},      {"g", {1.0, 2.0, 4.0}}};
    std::ofstream(dir / "cfg.json") << cfg.dump();
    const auto r = qanneal({"sweep", "--config", dir / "cfg.json", "--out-dir", dir / "out", "--jobs", "1"});
    REQUIRE(r.code == 0);
    CHECK(io::read_results_csv(dir / "out/results.csv").size() == 2 * 2 * 3 * 2);
    CHECK(io::read_aggregates_csv(dir / "out/aggregates.csv").size() == 2 * 2 * 3);
    CHECK(fs::exists(dir / "out/sweep.json"));

    SUBCASE("plot n vs g") {
        const auto p = qanneal({"plot", "--in", dir / "out/aggregates.csv", "--kind", "n-vs-g", "--out", dir / "f.svg"});
        REQUIRE(p.code == 0);
        const auto svg = slurp(dir / "f.svg");
        CHECK(svg.rfind("<svg", 0) == 0);
        CHECK(count(svg, "class=\"series\"") == 4);
        CHECK(count(svg, "class=\"series analytic\"") == 2);
    }
    SUBCASE("fit") {
        // three points are too few: reported per series, fatal for a single selected series
        const auto f = qanneal({"fit", "--in", dir / "out/aggregates.csv", "--gmin", "1", "--gmax", "4"});
        REQUIRE(f.code == 0);
        const auto j = nlohmann::json::parse(f.out);
        CHECK(j.size() == 4);
        for (const auto& e : j) CHECK(e.contains("error"));
        const auto one = qanneal({"fit", "--in", dir / "out/aggregates.csv", "--protocol", "p1", "--n", "3"});
        CHECK(one.code == 1);
        const auto lone = qanneal({"fit", "--in", dir / "out/aggregates.csv", "--gmin", "1"});
        CHECK(lone.code == 1);
    }
}

TEST_CASE("plot inputs") {
    TempDir dir;
    std::ofstream(dir / "empty.csv") << "protocol,N,g,mean_n_bar,std_n_bar,mean_p0,mean_eps_res,n_realizations\n";
    CHECK_THROWS_AS(plot::plot({dir / "empty.csv"}, plot::Kind::NVsG, dir / "e.svg"), UsageError);
    CHECK_FALSE(fs::exists(dir / "e.svg"));

    std::ofstream(dir / "t.csv") << "t,n_bar,p0\n0.01,1,0.1\n0.1,0.5,0.3\n1,0.2,0.6\n";
    const auto chart = plot::build_chart({dir / "t.csv"}, plot::Kind::Trace);
    CHECK(chart.log_x);
    plot::plot({dir / "t.csv"}, plot::Kind::Trace, dir / "t.svg");
    CHECK(fs::exists(dir / "t.svg"));
    CHECK_THROWS_AS(plot::parse_kind("pie"), UsageError);
}

TEST_CASE("hardware subcommand") {
    const auto r = qanneal({"hardware", "--eps-max", "1e10", "--tau-dec", "1e-3", "--n", "1000"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["bound"].get<double>() > 35.0);
    CHECK(j["bound"].get<double>() < 36.0);
    CHECK(j["n_c"] == 35);
}
