#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "perc/estimate.hpp"

namespace perc {

struct CsvRow {
    std::string event;
    double p = 0;
    int n = 0;
    int W = 0;
    int m_aux = 0;
    std::uint64_t n_samples = 0;
    double p_hat = 0;
    double ci_low = 0;
    double ci_high = 0;
    std::uint64_t seed = 0;
};

// Reads a CSV in the published schema; throws config_error on mismatch.
std::vector<CsvRow> read_estimate_csv(const std::filesystem::path& path);

struct FitReportOptions {
    FitModel model;
    std::string alpha_source = "explicit";  // or growth_exponent_fit
    std::optional<double> d_hat;            // recorded when alpha came from a growth fit
    bool emit_svg = false;
};

struct FitArtifacts {
    std::filesystem::path report_json;
    std::filesystem::path points_dat;
    std::optional<std::filesystem::path> svg;
    FitResult fit;
};

FitArtifacts fit_csv(const std::filesystem::path& csv,
                     const std::filesystem::path& out_dir, const FitReportOptions& options);

}  // namespace perc
