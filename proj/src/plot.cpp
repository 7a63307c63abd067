#include "qa/plot.hpp"

#include "qa/analytic.hpp"
#include "qa/error.hpp"
#include "qa/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace qa::plot {
namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool log = false;

    double map(double v) const {
        const double a = log ? std::log10(v) : v;
        return (a - lo) / (hi - lo);
    }
};

Axis make_axis(const std::vector<double>& values, bool log) {
    Axis ax;
    ax.log = log;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (double v : values) {
        if (!std::isfinite(v) || (log && !(v > 0.0))) {
            continue;
        }
        const double a = log ? std::log10(v) : v;
        lo = first ? a : std::min(lo, a);
        hi = first ? a : std::max(hi, a);
        first = false;
    }
    if (first) {
        throw UsageError("nothing plottable on a " + std::string(log ? "log" : "linear") + " axis");
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.04 * (hi - lo);
    ax.lo = log ? std::floor(lo) : lo - pad;
    ax.hi = log ? std::ceil(hi) : hi + pad;
    if (log && ax.hi - ax.lo < 1.0) {
        ax.hi = ax.lo + 1.0;
    }
    return ax;
}

std::vector<double> ticks(const Axis& ax) {
    std::vector<double> out;
    if (ax.log) {
        const int step = std::max(1, static_cast<int>(std::ceil((ax.hi - ax.lo) / 8.0)));
        for (int e = static_cast<int>(ax.lo); e <= static_cast<int>(ax.hi); e += step) {
            out.push_back(std::pow(10.0, e));
        }
        return out;
    }
    const double raw = (ax.hi - ax.lo) / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) {
            step = m * mag;
            break;
        }
    }
    for (double v = std::ceil(ax.lo / step) * step; v <= ax.hi + 1e-9 * step; v += step) {
        out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    }
    return out;
}

Series& series_named(std::vector<Series>& list, const std::string& name) {
    for (auto& s : list) {
        if (s.name == name) {
            return s;
        }
    }
    list.push_back({name, {}, {}, false});
    return list.back();
}

Chart aggregate_chart(const std::vector<io::AggregateRecord>& rows, Kind kind) {
    Chart c;
    c.y_label = "mean n_bar";
    c.log_y = true;
    std::map<int, std::vector<double>> p1_g_by_n;
    std::map<double, std::vector<int>> p1_n_by_g;
    for (const auto& a : rows) {
        if (!std::isfinite(a.mean_n_bar)) {
            continue;
        }
        std::string name;
        double x = 0.0;
        if (kind == Kind::NVsG) {
            name = a.protocol + " N=" + std::to_string(a.n_qubits);
            x = a.g;
            if (a.protocol == "p1") {
                p1_g_by_n[a.n_qubits].push_back(a.g);
            }
        } else {
            name = a.protocol + " g=" + io::format_double(a.g);
            x = a.n_qubits;
            if (a.protocol == "p1") {
                p1_n_by_g[a.g].push_back(a.n_qubits);
            }
        }
        Series& s = series_named(c.series, name);
        s.points.emplace_back(x, a.mean_n_bar);
        s.errors.push_back(a.std_n_bar);
    }
    for (auto& s : c.series) {
        std::vector<std::size_t> idx(s.points.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            idx[i] = i;
        }
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return s.points[a] < s.points[b]; });
        Series sorted{s.name, {}, {}, false};
        for (std::size_t i : idx) {
            sorted.points.push_back(s.points[i]);
            sorted.errors.push_back(s.errors[i]);
        }
        s = std::move(sorted);
    }
    if (kind == Kind::NVsG) {
        c.title = "Excitations vs g";
        c.x_label = "g = tau_a / tau_I";
        c.log_x = true;
        for (const auto& [n, gs] : p1_g_by_n) {
            const auto [lo, hi] = std::minmax_element(gs.begin(), gs.end());
            const double dim = std::ldexp(1.0, n);
            Series s{"analytic N=" + std::to_string(n), {}, {}, true};
            const int pts = 64;
            for (int i = 0; i < pts; ++i) {
                const double g = *lo * std::pow(*hi / *lo, static_cast<double>(i) / (pts - 1));
                s.points.emplace_back(g, geometric_prediction(g, dim, 1).n_bar);
            }
            c.series.push_back(std::move(s));
        }
    } else {
        c.title = "Excitations vs N";
        c.x_label = "N";
        for (const auto& [g, ns] : p1_n_by_g) {
            const auto [lo, hi] = std::minmax_element(ns.begin(), ns.end());
            Series s{"analytic g=" + io::format_double(g), {}, {}, true};
            for (int n = *lo; n <= *hi; ++n) {
                s.points.emplace_back(n, geometric_prediction(g, std::ldexp(1.0, n), 1).n_bar);
            }
            c.series.push_back(std::move(s));
        }
    }
    return c;
}

}  // namespace

Kind parse_kind(std::string_view name) {
    if (name == "n-vs-g") return Kind::NVsG;
    if (name == "n-vs-N" || name == "n-vs-n") return Kind::NVsN;
    if (name == "trace") return Kind::Trace;
    if (name == "relaxation") return Kind::Relaxation;
    throw UsageError("unknown plot kind '" + std::string(name) + "'");
}

Chart build_chart(const std::vector<std::filesystem::path>& inputs, Kind kind) {
    if (inputs.empty()) {
        throw UsageError("plot needs at least one input file");
    }
    Chart c;
    if (kind == Kind::NVsG || kind == Kind::NVsN) {
        std::vector<io::AggregateRecord> rows;
        for (const auto& p : inputs) {
            auto part = io::read_aggregates_csv(p);
            rows.insert(rows.end(), part.begin(), part.end());
        }
        if (rows.empty()) {
            throw UsageError("plot input has no data rows");
        }
        c = aggregate_chart(rows, kind);
    } else if (kind == Kind::Trace) {
        c.title = "Excitations during the anneal";
        c.x_label = "t";
        c.y_label = "value";
        c.log_x = true;
        for (const auto& p : inputs) {
            const auto t = io::read_csv(p);
            const auto ct = t.column("t");
            const auto cn = t.column("n_bar");
            const auto cp = t.column("p0");
            const std::string prefix = inputs.size() > 1 ? p.stem().string() + " " : "";
            Series sn{prefix + "n_bar", {}, {}, false};
            Series sp{prefix + "p0", {}, {}, false};
            for (const auto& row : t.rows) {
                const double x = io::parse_double(row[ct]);
                sn.points.emplace_back(x, io::parse_double(row[cn]));
                sp.points.emplace_back(x, io::parse_double(row[cp]));
            }
            if (!sn.points.empty()) {
                c.series.push_back(std::move(sn));
                c.series.push_back(std::move(sp));
            }
        }
    } else {
        c.title = "Residual energy relaxation";
        c.x_label = "budget";
        c.y_label = "eps_res";
        c.log_x = true;
        c.log_y = true;
        for (const auto& p : inputs) {
            const auto t = io::read_csv(p);
            const auto cb = t.column("budget");
            const auto ce = t.column("eps_res");
            std::size_t cm = t.header.size();
            for (std::size_t i = 0; i < t.header.size(); ++i) {
                if (t.header[i] == "mode") cm = i;
            }
            for (const auto& row : t.rows) {
                const std::string name = cm < row.size() ? row[cm] : p.stem().string();
                series_named(c.series, name)
                    .points.emplace_back(io::parse_double(row[cb]), io::parse_double(row[ce]));
            }
        }
    }
    if (c.series.empty()) {
        throw UsageError("plot input has no data rows");
    }
    return c;
}

std::string render_svg(const Chart& chart) {
    std::vector<double> xs, ys;
    for (const auto& s : chart.series) {
        for (const auto& [x, y] : s.points) {
            xs.push_back(x);
            ys.push_back(y);
        }
    }
    const Axis ax = make_axis(xs, chart.log_x);
    const Axis ay = make_axis(ys, chart.log_y);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + ax.map(x) * pw; };
    auto py = [&](double y) { return kTop + (1.0 - ay.map(y)) * ph; };
    auto visible = [&](double x, double y) {
        return std::isfinite(x) && std::isfinite(y) && (!ax.log || x > 0.0) && (!ay.log || y > 0.0);
    };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << escape(chart.title) << "</text>\n";
    o << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\"/>\n</g>\n";

    o << "<g class=\"ticks\" font-size=\"11\">\n";
    for (double t : ticks(ax)) {
        const double x = px(t);
        o << "<line x1=\"" << x << "\" y1=\"" << kTop + ph << "\" x2=\"" << x << "\" y2=\""
          << kTop + ph + 5 << "\" stroke=\"black\"/>";
        o << "<text x=\"" << x << "\" y=\"" << kTop + ph + 18 << "\" text-anchor=\"middle\">"
          << num(t) << "</text>\n";
    }
    for (double t : ticks(ay)) {
        const double y = py(t);
        o << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\"" << y
          << "\" stroke=\"black\"/>";
        o << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << num(t)
          << "</text>\n";
    }
    o << "</g>\n";
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 15
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(chart.x_label)
      << (ax.log ? " (log)" : "") << "</text>\n";
    o << "<text transform=\"translate(20," << kTop + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">" << escape(chart.y_label)
      << (ay.log ? " (log)" : "") << "</text>\n";

    std::size_t color = 0;
    for (std::size_t si = 0; si < chart.series.size(); ++si) {
        const Series& s = chart.series[si];
        const char* col = s.analytic ? "black" : kPalette[color++ % std::size(kPalette)];
        o << "<polyline class=\"series" << (s.analytic ? " analytic" : "") << "\" data-name=\""
          << escape(s.name) << "\" fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\""
          << (s.analytic ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
        for (const auto& [x, y] : s.points) {
            if (visible(x, y)) {
                o << px(x) << ',' << py(y) << ' ';
            }
        }
        o << "\"/>\n";
        if (!s.analytic) {
            for (std::size_t i = 0; i < s.points.size(); ++i) {
                const auto [x, y] = s.points[i];
                if (!visible(x, y)) {
                    continue;
                }
                if (i < s.errors.size() && s.errors[i] > 0.0) {
                    const double lo = ay.log ? std::max(y - s.errors[i], y * 1e-3) : y - s.errors[i];
                    o << "<line x1=\"" << px(x) << "\" y1=\"" << py(lo) << "\" x2=\"" << px(x)
                      << "\" y2=\"" << py(y + s.errors[i]) << "\" stroke=\"" << col << "\"/>";
                }
                o << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << col
                  << "\"/>\n";
            }
        }
        const double ly = kTop + 10 + 18.0 * static_cast<double>(si);
        const double lx = kLeft + pw + 15;
        o << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly
          << "\" stroke=\"" << col << "\" stroke-width=\"2\""
          << (s.analytic ? " stroke-dasharray=\"6,4\"" : "") << "/>";
        o << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">"
          << escape(s.name) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void plot(const std::vector<std::filesystem::path>& inputs, Kind kind,
          const std::filesystem::path& out) {
    const std::string svg = render_svg(build_chart(inputs, kind));
    if (out.has_parent_path()) {
        std::filesystem::create_directories(out.parent_path());
    }
    std::ofstream f(out);
    if (!f) {
        throw UsageError("cannot write " + out.string());
    }
    f << svg;
}

}  // namespace qa::plot
