#pragma once

#include "proxident/experiments.hpp"
#include "proxident/identification.hpp"
#include "proxident/solvers.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace proxident::report {

inline constexpr const char* kCsvHeader =
    "k,prox_steps,f_value,subopt,accelerated,in_z,alpha,correct_manifolds,spurious_manifolds,signature_hash";

struct CsvRow {
    std::size_t k = 0;
    std::size_t prox_steps = 0;
    double f_value = 0.0;
    double subopt = 0.0;
    bool accelerated = false;
    bool in_z = false;
    double alpha = 0.0;
    std::size_t correct = 0;
    std::size_t spurious = 0;
    std::uint64_t signature_hash = 0;
    bool operator==(const CsvRow&) const = default;
};

/// One row per trace record; subopt = f_value - f_star. Throws
/// std::invalid_argument on an empty trace or a series of another length.
std::vector<CsvRow> csv_rows(const Trace& trace, const std::vector<IdentificationPoint>& series, double f_star);
std::string format_csv(const std::vector<CsvRow>& rows);
std::vector<CsvRow> parse_csv(const std::string& text);

void emit_csv(const Trace& trace, const std::vector<IdentificationPoint>& series, double f_star,
              const std::filesystem::path& path);
std::vector<CsvRow> read_csv(const std::filesystem::path& path);

enum class PlotKind { Suboptimality, Identification };

struct PlotSeries {
    std::string name;
    std::vector<double> x; // prox-gradient steps
    std::vector<double> y;
    /// x position of the identification marker.
    std::optional<double> marker;
};

struct PlotOptions {
    std::string title;
    /// Suboptimality values at or below this are drawn at it.
    double floor = 1e-16;
    /// Identification axis upper bound (the target count); 0 picks the data maximum.
    double y_max = 0.0;
};

/// Self-contained SVG: log-scale y for suboptimality, linear y for
/// identification counts. Throws std::invalid_argument with no series.
std::string render_svg(const std::vector<PlotSeries>& series, PlotKind kind, const PlotOptions& options);
void emit_svg(const std::vector<PlotSeries>& series, PlotKind kind, const PlotOptions& options,
              const std::filesystem::path& path);

/// Plot series built from CSV rows, with the marker at the first row that has
/// `target` correct manifolds and no spurious one.
PlotSeries series_from_rows(const std::string& name, const std::vector<CsvRow>& rows, PlotKind kind,
                            std::size_t target);

/// Suboptimality floor used for plots given the reference value.
double plot_floor(double f_star);

/// Writes <dir>/<algo>.csv for every run and <dir>/reference.json; with `svg`
/// also <dir>/plots/suboptimality.svg and <dir>/plots/identification.svg.
void write_bundle(const ReportBundle& bundle, const std::filesystem::path& dir, bool svg);

/// Re-renders the plots of a bundle directory from its CSV files and reference.json.
void replot(const std::filesystem::path& dir);

/// printf-style %.<digits>g rendering.
std::string real_string(double v, int digits = 17);

/// Writes `contents` to `path`, creating parent directories; throws
/// std::runtime_error naming the path on failure.
void write_file(const std::filesystem::path& path, const std::string& contents);

} // namespace proxident::report
