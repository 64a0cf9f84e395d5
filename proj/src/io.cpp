#include "annular/io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>

#include "annular/errors.hpp"

namespace annular {

nlohmann::json cosine_series_to_json(const CosineSeries& s) {
    nlohmann::json arr = nlohmann::json::array();
    for (double c : s.coeffs()) arr.push_back(c);
    return arr;
}

CosineSeries cosine_series_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("cosine series JSON must be an array");
    std::vector<double> c;
    for (const auto& v : j) {
        if (!v.is_number()) throw ConfigError("cosine series entries must be numbers");
        c.push_back(v.get<double>());
    }
    return CosineSeries(std::move(c));
}

void export_solution(const SpectralSolution& sol,
                     const std::filesystem::path& base) {
    const auto& map = sol.map();
    const auto& g = map.geometry();
    const int n = map.n_angular();

    CsvTable field;
    field.header = {"s", "theta", "r", "psi"};
    for (int i = 0; i < map.n_radial(); ++i)
        for (int j = 0; j < map.n_theta(); ++j)
            field.rows.push_back({map.s_nodes()[i], map.theta_nodes()[j],
                                  map.r()(i, j), sol.values()(i, j)});
    std::filesystem::path csv_path = base;
    csv_path += "_field.csv";
    write_csv(csv_path, field);

    nlohmann::json meta = {
        {"kind", sol.kind() == SpectralSolution::Kind::two_phase ? "two_phase"
                                                                 : "single_phase"},
        {"lambda", g.lambda},
        {"eta", cosine_series_to_json(g.eta)},
        {"xi", cosine_series_to_json(g.xi)},
        {"n_radial", map.n_radial()},
        {"n_angular", n},
        {"interior_residual", sol.interior_residual()},
        {"field_csv", csv_path.filename().string()},
    };
    if (sol.kind() == SpectralSolution::Kind::two_phase) {
        meta["gamma1"] = sol.gamma1();
        meta["gamma2"] = sol.gamma2();
    } else {
        meta["gamma"] = sol.gamma();
    }
    nlohmann::json touter = nlohmann::json::array();
    for (double v : sol.outer_trace(n)) touter.push_back(v);
    meta["outer_trace"] = touter;
    if (sol.kind() != SpectralSolution::Kind::two_phase) {
        nlohmann::json tinner = nlohmann::json::array();
        for (double v : sol.inner_trace(n)) tinner.push_back(v);
        meta["inner_trace"] = tinner;
    }
    std::filesystem::path json_path = base;
    json_path += ".json";
    write_json(json_path, meta);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path.string());
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (i) os << ',';
        os << table.header[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_double(row[i]);
        }
        os << '\n';
    }
    if (!os) throw ConfigError("write failed for " + path.string());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

nlohmann::json discrepancies_to_json(const RunReport& report) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : report.entries()) {
        arr.push_back({{"context", d.context},
                       {"k", d.k},
                       {"lambda", d.lambda},
                       {"gamma", d.gamma},
                       {"reference_value", d.reference_value},
                       {"computed_value", d.computed_value},
                       {"rel_error", d.rel_error}});
    }
    return arr;
}

void write_svg_chart(const std::filesystem::path& path, const std::string& title,
                     const std::vector<SvgSeries>& series) {
    const int W = 800, H = 520, ml = 70, mr = 170, mt = 50, mb = 50;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (double v : s.y) {
            if (!std::isfinite(v)) continue;
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    auto px = [&](double x) {
        return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr);
    };
    auto py = [&](double y) {
        return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb);
    };

    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write " + path.string());
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='"
       << H << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>"
       << title << "</text>\n";
    // axes
    os << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr
       << "' y2='" << H - mb << "' stroke='black'/>\n";
    os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
       << H - mb << "' stroke='black'/>\n";
    for (int t = 0; t <= 4; ++t) {
        double xv = xmin + t * (xmax - xmin) / 4;
        double yv = ymin + t * (ymax - ymin) / 4;
        os << "<text x='" << px(xv) << "' y='" << H - mb + 18
           << "' text-anchor='middle' font-size='11'>" << format_double(
                  std::round(xv * 1e6) / 1e6)
           << "</text>\n";
        os << "<text x='" << ml - 8 << "' y='" << py(yv) + 4
           << "' text-anchor='end' font-size='11'>"
           << format_double(std::round(yv * 1e4) / 1e4) << "</text>\n";
    }
    int ci = 0;
    for (const auto& s : series) {
        const char* color = colors[ci % 8];
        os << "<polyline fill='none' stroke='" << color << "' points='";
        for (size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.y[i])) continue;
            os << px(s.x[i]) << ',' << py(s.y[i]) << ' ';
        }
        os << "'/>\n";
        os << "<text x='" << W - mr + 10 << "' y='" << mt + 16 * ci + 12
           << "' font-size='12' fill='" << color << "'>" << s.label
           << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 4;
    if (const char* env = std::getenv("ANNULAR_EULER_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    int workers = std::min(hw, n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace annular
