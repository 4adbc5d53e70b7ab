#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "perc/cayley.hpp"
#include "perc/estimate.hpp"

namespace perc {

// Exit codes of the CLI; errors map onto these.
enum class ExitCode : int {
    ok = 0,
    config = 2,
    margin = 3,
    resource = 4,
    verification = 5,
};

struct ExperimentConfig {
    GroupSpec group;
    int window = 0;
    EventSpec event;
    std::vector<double> p_grid;
    std::vector<int> n_grid;
    std::uint64_t seed = 0;
    std::uint64_t replicas = 0;
    int workers = 1;
    std::string out_dir = "out";
    double chi = 0.5;
    int coarse_R = 2;
    std::size_t vertex_cap = kDefaultVertexCap;

    std::string digest;     // stable content signature
    std::string raw_json;   // canonical serialized form
};

// Parses and validates; environment overrides: PERC_SEED, PERC_WORKERS.
ExperimentConfig load_config(const std::filesystem::path& file);
ExperimentConfig parse_config(const std::string& json_text);

struct RunArtifacts {
    std::filesystem::path csv;
    std::filesystem::path manifest;
    std::size_t rows = 0;
};

// Estimates every grid cell and writes CSV + manifest atomically.
RunArtifacts run_experiment(const ExperimentConfig& config);

// Serialises one estimate row in the published CSV schema.
std::string csv_row(const std::string& event, double p, int n, int W, int m_aux,
                    const Estimate& est);

inline constexpr const char* kCsvHeader =
    "event,p,n,W,m_aux,n_samples,p_hat,ci_low,ci_high,seed";

void atomic_write(const std::filesystem::path& path, const std::string& contents);

}  // namespace perc
