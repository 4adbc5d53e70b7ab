#include "perc/fitio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "perc/runner.hpp"

namespace perc {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (const char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::vector<CsvRow> read_estimate_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open CSV: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty CSV: " + path.string());
    if (line != kCsvHeader)
        throw config_error("CSV schema mismatch: expected header '" + std::string(kCsvHeader) + "'");
    std::vector<CsvRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 10) throw config_error("CSV schema mismatch: wrong column count");
        CsvRow r;
        try {
            r.event = f[0];
            r.p = std::stod(f[1]);
            r.n = std::stoi(f[2]);
            r.W = std::stoi(f[3]);
            r.m_aux = std::stoi(f[4]);
            r.n_samples = std::stoull(f[5]);
            r.p_hat = std::stod(f[6]);
            r.ci_low = std::stod(f[7]);
            r.ci_high = std::stod(f[8]);
            r.seed = std::stoull(f[9]);
        } catch (const std::exception&) {
            throw config_error("CSV schema mismatch: unparseable row");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

namespace {

std::string svg_scatter(const std::vector<std::pair<double, double>>& pts, const FitResult& fit) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& [x, y] : pts) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (xmax <= xmin) xmax = xmin + 1;
    if (ymax <= ymin) ymax = ymin + 1;
    const double wpx = 480, hpx = 320, pad = 40;
    auto sx = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (wpx - 2 * pad); };
    auto sy = [&](double y) { return hpx - pad - (y - ymin) / (ymax - ymin) * (hpx - 2 * pad); };
    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << wpx << "' height='" << hpx
        << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<line x1='" << sx(xmin) << "' y1='" << sy(fit.slope * xmin + fit.intercept)
        << "' x2='" << sx(xmax) << "' y2='" << sy(fit.slope * xmax + fit.intercept)
        << "' stroke='steelblue' stroke-width='1.5'/>\n";
    for (const auto& [x, y] : pts)
        svg << "<circle cx='" << sx(x) << "' cy='" << sy(y) << "' r='3' fill='crimson'/>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

FitArtifacts fit_csv(const std::filesystem::path& csv, const std::filesystem::path& out_dir,
                     const FitReportOptions& options) {
    const auto rows = read_estimate_csv(csv);
    std::vector<FitPoint> table;
    for (const auto& r : rows) {
        Estimate e;
        e.p_hat = r.p_hat;
        e.ci_low = r.ci_low;
        e.ci_high = r.ci_high;
        e.n_samples = r.n_samples;
        e.seed = r.seed;
        table.push_back(FitPoint{static_cast<double>(r.n), e});
    }
    const FitResult fit = fit_decay(table, options.model);

    FitArtifacts out;
    out.fit = fit;
    out.report_json = out_dir / "fit.json";
    out.points_dat = out_dir / "fit_points.dat";

    nlohmann::json rep;
    rep["model"] = options.model.kind == FitModel::Kind::exp_in_n ? "exp_in_n" : "stretched";
    if (options.model.kind == FitModel::Kind::stretched) {
        rep["alpha"] = options.model.alpha;
        rep["alpha_source"] = options.alpha_source;
        if (options.d_hat) rep["d_hat"] = *options.d_hat;
    }
    rep["slope"] = fit.slope;
    rep["intercept"] = fit.intercept;
    rep["r2"] = fit.r2;
    rep["points_used"] = fit.points_used;
    rep["source_csv"] = csv.string();
    atomic_write(out.report_json, rep.dump(2) + "\n");

    // plot-ready columns: n (or n^alpha) and log p_hat
    std::ostringstream dat;
    std::vector<std::pair<double, double>> pts;
    for (const auto& row : table) {
        if (row.estimate.p_hat <= 0) continue;
        const double x = options.model.kind == FitModel::Kind::exp_in_n
                             ? row.n
                             : std::pow(row.n, options.model.alpha);
        const double y = std::log(row.estimate.p_hat);
        char buf[80];
        std::snprintf(buf, sizeof buf, "%.12g %.12g\n", x, y);
        dat << buf;
        pts.emplace_back(x, y);
    }
    atomic_write(out.points_dat, dat.str());

    if (options.emit_svg) {
        out.svg = out_dir / "fit.svg";
        atomic_write(*out.svg, svg_scatter(pts, fit));
    }
    return out;
}

}  // namespace perc
