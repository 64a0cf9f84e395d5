#ifndef ANNULAR_IO_HPP
#define ANNULAR_IO_HPP

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "annular/elliptic.hpp"
#include "annular/report.hpp"
#include "annular/series.hpp"

namespace annular {

// CosineSeries <-> JSON array of coefficients (a_1..a_K).
nlohmann::json cosine_series_to_json(const CosineSeries& s);
CosineSeries cosine_series_from_json(const nlohmann::json& j);

// Self-describing solution bundle: <base>.json carries grid metadata and
// boundary traces, <base>_field.csv the collocation values (s, theta, r, psi).
void export_solution(const SpectralSolution& sol,
                     const std::filesystem::path& base);

// Deterministic CSV writing: fixed "%.17g" formatting, header row, no
// time-dependent content. Identical inputs produce byte-identical files.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
void write_csv(const std::filesystem::path& path, const CsvTable& table);
std::string format_double(double v);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json discrepancies_to_json(const RunReport& report);

// Minimal self-contained SVG line chart: one polyline per series over a
// shared x-grid.
struct SvgSeries {
    std::string label;
    std::vector<double> x, y;
};
void write_svg_chart(const std::filesystem::path& path, const std::string& title,
                     const std::vector<SvgSeries>& series);

// Index-ordered parallel loop over [0, n); worker count is capped by the
// ANNULAR_EULER_THREADS environment variable (>=1). Results must be written
// to pre-sized slots so output assembly stays deterministic.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace annular

#endif
