#include "qa/io.hpp"

#include "qa/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace qa::io {
namespace {

std::string sanitize(std::string s) {
    for (char& c : s) {
        if (c == ',' || c == '\n' || c == '\r') {
            c = ';';
        }
    }
    return s;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw UsageError("cannot write " + path.string());
    }
    return out;
}

template <class Int>
Int parse_int(const std::string& text) {
    Int v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw UsageError("cannot parse integer from '" + text + "'");
    }
    return v;
}

const std::vector<std::string> kResultColumns = {
    "run_id",  "protocol",  "N",       "g",          "tau_a",   "T",         "t0",
    "seed",    "p0",        "mean_n",  "n_bar",      "eps_res", "norm_error", "steps",
    "wall_time_s", "instance_mode", "k", "realization", "ratio_T", "t0_factor", "rel_tol",
    "abs_tol", "status",    "message"};

const std::vector<std::string> kAggregateColumns = {
    "protocol", "N", "g", "mean_n_bar", "std_n_bar", "mean_p0", "mean_eps_res", "n_realizations"};

void write_header(std::ofstream& out, const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << cols[i];
    }
    out << '\n';
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw UsageError("cannot parse number from '" + text + "'");
    }
    return v;
}

nlohmann::json instance_to_json(const IsingInstance& inst) {
    nlohmann::json j;
    j["n_qubits"] = inst.n_qubits();
    j["convention"] = std::string(kBasisConvention);
    if (!inst.terms().empty()) {
        auto terms = nlohmann::json::array();
        for (const auto& t : inst.terms()) {
            terms.push_back({{"sites", t.sites()}, {"coeff", t.coeff}});
        }
        j["terms"] = std::move(terms);
    } else {
        j["diagonal"] = inst.diagonal();
    }
    return j;
}

IsingInstance instance_from_json(const nlohmann::json& j, const BuildOptions& opts) {
    try {
        if (!j.is_object() || !j.contains("n_qubits")) {
            throw UsageError("instance JSON needs an integer n_qubits");
        }
        const int n = j.at("n_qubits").get<int>();
        if (j.contains("convention") &&
            j.at("convention").get<std::string>() != std::string(kBasisConvention)) {
            throw UsageError("instance uses an unsupported basis convention");
        }
        const bool has_terms = j.contains("terms");
        const bool has_diag = j.contains("diagonal");
        if (has_terms == has_diag) {
            throw UsageError("instance JSON needs exactly one of 'terms' or 'diagonal'");
        }
        if (has_diag) {
            return instance_from_diagonal(n, j.at("diagonal").get<std::vector<double>>(), opts);
        }
        std::vector<IsingTerm> terms;
        for (const auto& t : j.at("terms")) {
            const auto sites = t.at("sites").get<std::vector<int>>();
            terms.push_back(IsingTerm::from_sites(sites, t.at("coeff").get<double>()));
        }
        return build_instance(n, std::move(terms), opts);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("instance JSON schema violation: ") + e.what());
    }
}

void write_instance(const std::filesystem::path& path, const IsingInstance& inst) {
    auto out = open_out(path);
    out << instance_to_json(inst).dump() << '\n';
}

IsingInstance read_instance(const std::filesystem::path& path, const BuildOptions& opts) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("malformed JSON in " + path.string() + ": " + e.what());
    }
    return instance_from_json(j, opts);
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw UsageError("CSV is missing column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot read " + path.string());
    }
    CsvTable table;
    std::string line;
    if (!std::getline(in, line) || line.empty()) {
        throw UsageError(path.string() + " is empty");
    }
    table.header = split_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto cells = split_line(line);
        if (cells.size() != table.header.size()) {
            throw UsageError(path.string() + ": row has " + std::to_string(cells.size()) +
                             " cells, header has " + std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

void write_results_csv(const std::filesystem::path& path, const std::vector<RunRecord>& rows) {
    auto out = open_out(path);
    write_header(out, kResultColumns);
    for (const auto& r : rows) {
        out << sanitize(r.run_id) << ',' << sanitize(r.protocol) << ',' << r.n_qubits << ','
            << format_double(r.g) << ',' << format_double(r.tau_a) << ',' << format_double(r.T) << ','
            << format_double(r.t0) << ',' << r.seed << ',' << format_double(r.p0) << ','
            << format_double(r.mean_n) << ',' << format_double(r.n_bar) << ','
            << format_double(r.eps_res) << ',' << format_double(r.norm_error) << ',' << r.steps << ','
            << format_double(r.wall_time_s) << ',' << r.instance_mode << ',' << r.k << ','
            << r.realization << ',' << format_double(r.ratio_T) << ',' << format_double(r.t0_factor)
            << ',' << format_double(r.rel_tol) << ',' << format_double(r.abs_tol) << ',' << r.status
            << ',' << sanitize(r.message) << '\n';
    }
}

std::vector<RunRecord> read_results_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    std::vector<std::size_t> idx;
    for (const auto& c : kResultColumns) {
        idx.push_back(t.column(c));
    }
    std::vector<RunRecord> rows;
    for (const auto& cells : t.rows) {
        auto at = [&](std::size_t i) -> const std::string& { return cells[idx[i]]; };
        RunRecord r;
        r.run_id = at(0);
        r.protocol = at(1);
        r.n_qubits = parse_int<int>(at(2));
        r.g = parse_double(at(3));
        r.tau_a = parse_double(at(4));
        r.T = parse_double(at(5));
        r.t0 = parse_double(at(6));
        r.seed = parse_int<std::uint64_t>(at(7));
        r.p0 = parse_double(at(8));
        r.mean_n = parse_double(at(9));
        r.n_bar = parse_double(at(10));
        r.eps_res = parse_double(at(11));
        r.norm_error = parse_double(at(12));
        r.steps = parse_int<std::size_t>(at(13));
        r.wall_time_s = parse_double(at(14));
        r.instance_mode = at(15);
        r.k = parse_int<int>(at(16));
        r.realization = parse_int<int>(at(17));
        r.ratio_T = parse_double(at(18));
        r.t0_factor = parse_double(at(19));
        r.rel_tol = parse_double(at(20));
        r.abs_tol = parse_double(at(21));
        r.status = at(22);
        r.message = at(23);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_aggregates_csv(const std::filesystem::path& path,
                          const std::vector<AggregateRecord>& rows) {
    auto out = open_out(path);
    write_header(out, kAggregateColumns);
    for (const auto& a : rows) {
        out << sanitize(a.protocol) << ',' << a.n_qubits << ',' << format_double(a.g) << ','
            << format_double(a.mean_n_bar) << ',' << format_double(a.std_n_bar) << ','
            << format_double(a.mean_p0) << ',' << format_double(a.mean_eps_res) << ','
            << a.n_realizations << '\n';
    }
}

std::vector<AggregateRecord> read_aggregates_csv(const std::filesystem::path& path) {
    const CsvTable t = read_csv(path);
    std::vector<std::size_t> idx;
    for (const auto& c : kAggregateColumns) {
        idx.push_back(t.column(c));
    }
    std::vector<AggregateRecord> rows;
    for (const auto& cells : t.rows) {
        AggregateRecord a;
        a.protocol = cells[idx[0]];
        a.n_qubits = parse_int<int>(cells[idx[1]]);
        a.g = parse_double(cells[idx[2]]);
        a.mean_n_bar = parse_double(cells[idx[3]]);
        a.std_n_bar = parse_double(cells[idx[4]]);
        a.mean_p0 = parse_double(cells[idx[5]]);
        a.mean_eps_res = parse_double(cells[idx[6]]);
        a.n_realizations = parse_int<int>(cells[idx[7]]);
        rows.push_back(std::move(a));
    }
    return rows;
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TracePoint>& trace) {
    auto out = open_out(path);
    out << "t,n_bar,p0\n";
    for (const auto& tp : trace) {
        out << format_double(tp.t) << ',' << format_double(tp.n_bar) << ',' << format_double(tp.p0)
            << '\n';
    }
}

}  // namespace qa::io
