#include "proxident/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace proxident::report {

namespace fs = std::filesystem;

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string real17(double v) { return fmt("%.17g", v); }

} // namespace

std::string real_string(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::size_t parse_size(const std::string& s) {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad integer '" + s + "'");
    return static_cast<std::size_t>(v);
}

double parse_real(const std::string& s) {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("bad real '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s) {
    if (s == "1") return true;
    if (s == "0") return false;
    throw std::invalid_argument("bad flag '" + s + "'");
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

void write_file(const fs::path& path, const std::string& contents) {
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw std::runtime_error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

// ---------------------------------------------------------------- CSV

std::vector<CsvRow> csv_rows(const Trace& trace, const std::vector<IdentificationPoint>& series, double f_star) {
    if (trace.records.empty()) throw std::invalid_argument("csv: empty trace");
    if (series.size() != trace.records.size()) throw std::invalid_argument("csv: series does not match trace");
    std::vector<CsvRow> rows;
    rows.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& r = trace.records[i];
        rows.push_back({r.k, r.prox_steps, r.f_value, r.f_value - f_star, r.accelerated, r.in_z, r.alpha,
                        series[i].correct, series[i].spurious, r.signature.hash()});
    }
    return rows;
}

std::string format_csv(const std::vector<CsvRow>& rows) {
    std::string out = kCsvHeader;
    out += '\n';
    char hash[32];
    for (const auto& r : rows) {
        std::snprintf(hash, sizeof hash, "%016" PRIx64, r.signature_hash);
        out += std::to_string(r.k) + ',' + std::to_string(r.prox_steps) + ',' + real17(r.f_value) + ',' +
               real17(r.subopt) + ',' + (r.accelerated ? '1' : '0') + ',' + (r.in_z ? '1' : '0') + ',' +
               real17(r.alpha) + ',' + std::to_string(r.correct) + ',' + std::to_string(r.spurious) + ',' + hash +
               '\n';
    }
    return out;
}

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw std::invalid_argument("csv: missing or unexpected header");
    std::vector<CsvRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 10) throw std::invalid_argument("csv line " + std::to_string(lineno) + ": expected 10 fields");
        try {
            CsvRow r;
            r.k = parse_size(f[0]);
            r.prox_steps = parse_size(f[1]);
            r.f_value = parse_real(f[2]);
            r.subopt = parse_real(f[3]);
            r.accelerated = parse_bool(f[4]);
            r.in_z = parse_bool(f[5]);
            r.alpha = parse_real(f[6]);
            r.correct = parse_size(f[7]);
            r.spurious = parse_size(f[8]);
            std::size_t pos = 0;
            r.signature_hash = std::stoull(f[9], &pos, 16);
            if (pos != f[9].size()) throw std::invalid_argument("bad hash");
            rows.push_back(r);
        } catch (const std::exception& e) {
            throw std::invalid_argument("csv line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

void emit_csv(const Trace& trace, const std::vector<IdentificationPoint>& series, double f_star, const fs::path& path) {
    write_file(path, format_csv(csv_rows(trace, series, f_star)));
}

std::vector<CsvRow> read_csv(const fs::path& path) {
    try {
        return parse_csv(read_file(path));
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------- SVG

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0; // legend column
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr std::size_t kMaxPoints = 2000;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string px(double v) { return fmt("%.2f", v); }

// Indices kept when drawing: every stride-th point plus the last one.
std::vector<std::size_t> decimate(std::size_t n) {
    std::vector<std::size_t> idx;
    const std::size_t stride = n <= kMaxPoints ? 1 : (n + kMaxPoints - 1) / kMaxPoints;
    for (std::size_t i = 0; i < n; i += stride) idx.push_back(i);
    if (!idx.empty() && idx.back() != n - 1) idx.push_back(n - 1);
    return idx;
}

} // namespace

std::string render_svg(const std::vector<PlotSeries>& series, PlotKind kind, const PlotOptions& options) {
    if (series.empty()) throw std::invalid_argument("svg: no series");
    const bool log_y = kind == PlotKind::Suboptimality;
    if (log_y && !(options.floor > 0.0)) throw std::invalid_argument("svg: floor must be positive");

    auto ty = [&](double v) { return log_y ? std::log10(std::max(v, options.floor)) : v; };

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size()) throw std::invalid_argument("svg: x/y length mismatch in " + s.name);
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, ty(s.y[i]));
            y_hi = std::max(y_hi, ty(s.y[i]));
        }
    }
    if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    if (log_y) {
        y_lo = std::floor(y_lo);
        y_hi = std::ceil(y_hi);
    } else {
        y_lo = 0.0;
        y_hi = std::max(y_hi, options.y_max);
    }
    if (y_hi <= y_lo) y_hi = y_lo + 1.0;
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto sy = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * ph; };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(kWidth) << "\" height=\"" << px(kHeight)
      << "\" viewBox=\"0 0 " << px(kWidth) << ' ' << px(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << px(kWidth) << "\" height=\"" << px(kHeight) << "\" fill=\"white\"/>\n";
    if (!options.title.empty())
        o << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
          << xml_escape(options.title) << "</text>\n";

    // Axes and ticks.
    o << "<g stroke=\"black\" fill=\"none\">\n"
      << "<rect x=\"" << px(kLeft) << "\" y=\"" << px(kTop) << "\" width=\"" << px(pw) << "\" height=\"" << px(ph)
      << "\"/>\n</g>\n<g fill=\"black\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = x_lo + (x_hi - x_lo) * i / 5.0;
        o << "<line x1=\"" << px(sx(xv)) << "\" y1=\"" << px(kTop + ph) << "\" x2=\"" << px(sx(xv)) << "\" y2=\""
          << px(kTop + ph + 5) << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << px(sx(xv)) << "\" y=\"" << px(kTop + ph + 20) << "\" text-anchor=\"middle\">"
          << fmt("%.6g", xv) << "</text>\n";
    }
    const int y_ticks = log_y ? static_cast<int>(y_hi - y_lo) : 5;
    const int y_step = log_y ? std::max(1, y_ticks / 8) : 1;
    for (int i = 0; i <= y_ticks; i += y_step) {
        const double yv = y_lo + (y_hi - y_lo) * i / y_ticks;
        const std::string label = log_y ? "1e" + std::to_string(static_cast<int>(std::lround(yv))) : fmt("%.4g", yv);
        o << "<line x1=\"" << px(kLeft - 5) << "\" y1=\"" << px(sy(yv)) << "\" x2=\"" << px(kLeft) << "\" y2=\""
          << px(sy(yv)) << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << px(kLeft - 8) << "\" y=\"" << px(sy(yv) + 4) << "\" text-anchor=\"end\">" << label
          << "</text>\n";
    }
    o << "<text x=\"" << px(kLeft + pw / 2) << "\" y=\"" << px(kHeight - 15)
      << "\" text-anchor=\"middle\">proximal gradient steps</text>\n"
      << "<text x=\"20\" y=\"" << px(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << px(kTop + ph / 2) << ")\">" << (log_y ? "F(x) - F*" : "identified manifolds") << "</text>\n</g>\n";

    // Curves, markers, legend.
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % std::size(kPalette)];
        o << "<g>\n<title>" << xml_escape(s.name) << "</title>\n";
        if (!s.x.empty()) {
            o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            bool first = true;
            for (std::size_t i : decimate(s.x.size())) {
                if (!first) o << ' ';
                first = false;
                o << px(sx(s.x[i])) << ',' << px(sy(ty(s.y[i])));
            }
            o << "\"/>\n";
        }
        if (s.marker) {
            // Curve height at the marker: first sample at or after it.
            const auto it = std::lower_bound(s.x.begin(), s.x.end(), *s.marker);
            const std::size_t i = it == s.x.end() ? s.x.size() - 1 : static_cast<std::size_t>(it - s.x.begin());
            const double cx = sx(*s.marker);
            const double cy = s.x.empty() ? kTop + ph : sy(ty(s.y[i]));
            o << "<g class=\"identification\" stroke=\"" << color << "\" fill=\"none\" stroke-width=\"1.5\">"
              << "<circle cx=\"" << px(cx) << "\" cy=\"" << px(cy) << "\" r=\"6\"/>"
              << "<line x1=\"" << px(cx - 6) << "\" y1=\"" << px(cy) << "\" x2=\"" << px(cx + 6) << "\" y2=\"" << px(cy)
              << "\"/><line x1=\"" << px(cx) << "\" y1=\"" << px(cy - 6) << "\" x2=\"" << px(cx) << "\" y2=\""
              << px(cy + 6) << "\"/></g>\n";
        }
        const double ly = kTop + 10 + 20.0 * static_cast<double>(k);
        const double lx = kLeft + pw + 15;
        o << "<line x1=\"" << px(lx) << "\" y1=\"" << px(ly) << "\" x2=\"" << px(lx + 25) << "\" y2=\"" << px(ly)
          << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
          << "<text x=\"" << px(lx + 32) << "\" y=\"" << px(ly + 4) << "\">" << xml_escape(s.name) << "</text>\n"
          << "</g>\n";
    }
    o << "</svg>\n";
    return o.str();
}

void emit_svg(const std::vector<PlotSeries>& series, PlotKind kind, const PlotOptions& options, const fs::path& path) {
    write_file(path, render_svg(series, kind, options));
}

PlotSeries series_from_rows(const std::string& name, const std::vector<CsvRow>& rows, PlotKind kind,
                            std::size_t target) {
    PlotSeries s;
    s.name = name;
    for (const auto& r : rows) {
        s.x.push_back(static_cast<double>(r.prox_steps));
        s.y.push_back(kind == PlotKind::Suboptimality ? r.subopt : static_cast<double>(r.correct));
        if (!s.marker && r.correct == target && r.spurious == 0) s.marker = static_cast<double>(r.prox_steps);
    }
    return s;
}

double plot_floor(double f_star) { return 1e-16 * std::max(1.0, std::abs(f_star)); }

// ---------------------------------------------------------------- bundles

namespace {

nlohmann::json signature_json(const StructureSignature& sig) {
    auto arr = nlohmann::json::array();
    for (const auto& m : sig.members()) arr.push_back(m.to_string());
    return arr;
}

nlohmann::json reference_json(const ReportBundle& b) {
    nlohmann::json j;
    j["scenario"] = b.scenario;
    j["f_star"] = b.reference.f_star;
    j["f_star_floor"] = b.f_star_floor;
    j["subopt_achieved"] = b.reference.subopt_achieved;
    j["converged"] = b.reference.converged;
    j["reference_prox_steps"] = b.reference.prox_steps;
    j["signature"] = signature_json(b.reference.signature);
    j["signature_size"] = b.reference.signature.size();
    j["collection_size"] = b.collection_size;
    j["gamma"] = b.gamma;
    j["lipschitz"] = b.lipschitz;
    if (b.ground_truth_signature) j["ground_truth_signature_size"] = b.ground_truth_signature->size();
    auto algos = nlohmann::json::array();
    for (const auto& r : b.runs) {
        nlohmann::json a;
        a["name"] = r.name;
        a["prox_steps"] = r.trace.prox_evaluations;
        a["final_f"] = r.trace.records.back().f_value;
        a["final_subopt"] = r.trace.records.back().f_value - b.f_star_floor;
        if (r.stability.first_full_identification)
            a["first_full_identification"] = *r.stability.first_full_identification;
        else
            a["first_full_identification"] = nullptr;
        a["holes_after_first"] = r.stability.holes_after_first;
        if (b.ground_truth_signature) a["ground_truth_common"] = r.ground_truth_common;
        algos.push_back(std::move(a));
    }
    j["algorithms"] = std::move(algos);
    return j;
}

void write_plots(const fs::path& dir, const std::string& scenario, const std::vector<std::string>& names,
                 const std::vector<std::vector<CsvRow>>& rows, std::size_t target, double f_star_floor) {
    for (PlotKind kind : {PlotKind::Suboptimality, PlotKind::Identification}) {
        std::vector<PlotSeries> series;
        for (std::size_t i = 0; i < names.size(); ++i) series.push_back(series_from_rows(names[i], rows[i], kind, target));
        PlotOptions opt;
        opt.floor = plot_floor(f_star_floor);
        opt.y_max = static_cast<double>(target);
        const bool sub = kind == PlotKind::Suboptimality;
        opt.title = scenario + (sub ? ": suboptimality" : ": identification");
        emit_svg(series, kind, opt, dir / "plots" / (sub ? "suboptimality.svg" : "identification.svg"));
    }
}

} // namespace

void write_bundle(const ReportBundle& bundle, const fs::path& dir, bool svg) {
    std::vector<std::string> names;
    std::vector<std::vector<CsvRow>> all;
    for (const auto& r : bundle.runs) {
        auto rows = csv_rows(r.trace, r.series, bundle.f_star_floor);
        write_file(dir / (r.name + ".csv"), format_csv(rows));
        names.push_back(r.name);
        all.push_back(std::move(rows));
    }
    write_file(dir / "reference.json", reference_json(bundle).dump(2) + "\n");
    if (svg) write_plots(dir, bundle.scenario, names, all, bundle.reference.signature.size(), bundle.f_star_floor);
}

void replot(const fs::path& dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(dir / "reference.json"));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error((dir / "reference.json").string() + ": " + e.what());
    }
    std::vector<std::string> names;
    std::vector<std::vector<CsvRow>> all;
    for (const auto& a : j.at("algorithms")) {
        names.push_back(a.at("name").get<std::string>());
        all.push_back(read_csv(dir / (names.back() + ".csv")));
    }
    write_plots(dir, j.at("scenario").get<std::string>(), names, all, j.at("signature_size").get<std::size_t>(),
                j.at("f_star_floor").get<double>());
}

} // namespace proxident::report
