#include "perc/runner.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace perc {

namespace {

using nlohmann::json;

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

GroupSpec parse_group(const json& g) {
    const std::string kind = g.at("kind").get<std::string>();
    if (kind == "lattice") {
        std::vector<Element> gens;
        for (const auto& row : g.at("generators")) gens.push_back(row.get<Element>());
        return GroupSpec::lattice(g.at("d").get<int>(), std::move(gens));
    }
    if (kind == "heisenberg") return GroupSpec::heisenberg();
    if (kind == "matrix_group") {
        std::vector<Element> gens;
        for (const auto& row : g.at("generators")) gens.push_back(row.get<Element>());
        return GroupSpec::matrix_group(g.at("size").get<int>(), std::move(gens));
    }
    throw config_error("unknown group kind: " + kind);
}

json group_to_json(const GroupSpec& g) {
    json out;
    switch (g.kind) {
        case GroupSpec::Kind::lattice:
            out["kind"] = "lattice";
            out["d"] = g.dim;
            out["generators"] = g.generators;
            break;
        case GroupSpec::Kind::heisenberg:
            out["kind"] = "heisenberg";
            break;
        case GroupSpec::Kind::matrix_group:
            out["kind"] = "matrix_group";
            out["size"] = g.matrix_size;
            out["generators"] = g.generators;
            break;
    }
    return out;
}

json config_to_json(const ExperimentConfig& c) {
    json out;
    out["group"] = group_to_json(c.group);
    out["window"] = c.window;
    json ev;
    ev["name"] = c.event.name;
    ev["m"] = c.event.m_aux;
    ev["delta"] = c.event.delta;
    ev["k"] = c.event.k;
    ev["chi"] = c.event.chi;
    ev["dx"] = c.event.dx;
    ev["dy"] = c.event.dy;
    out["event"] = ev;
    out["p_grid"] = c.p_grid;
    out["n_grid"] = c.n_grid;
    out["seed"] = c.seed;
    out["replicas"] = c.replicas;
    out["workers"] = c.workers;
    out["out_dir"] = c.out_dir;
    out["schedule"] = {{"chi", c.chi}, {"R", c.coarse_R}};
    out["caps"] = {{"vertex_cap", c.vertex_cap}};
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw config_error(std::string("config is not valid JSON: ") + e.what());
    }

    ExperimentConfig c;
    try {
        c.group = parse_group(j.at("group"));
        c.window = j.at("window").get<int>();
        const auto& ev = j.at("event");
        c.event.name = ev.at("name").get<std::string>();
        c.event.m_aux = ev.value("m", 1);
        c.event.delta = ev.value("delta", 0.0);
        c.event.k = ev.value("k", 0);
        c.event.chi = ev.value("chi", 0.5);
        c.event.dx = ev.value("dx", 1);
        c.event.dy = ev.value("dy", 1);
        c.p_grid = j.at("p_grid").get<std::vector<double>>();
        c.n_grid = j.at("n_grid").get<std::vector<int>>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.replicas = j.at("replicas").get<std::uint64_t>();
        c.workers = j.value("workers", 1);
        c.out_dir = j.value("out_dir", std::string("out"));
        if (j.contains("schedule")) {
            c.chi = j["schedule"].value("chi", 0.5);
            c.coarse_R = j["schedule"].value("R", 2);
        }
        if (j.contains("caps")) c.vertex_cap = j["caps"].value("vertex_cap", kDefaultVertexCap);
    } catch (const json::exception& e) {
        throw config_error(std::string("config schema error: ") + e.what());
    }

    if (const char* env_seed = std::getenv("PERC_SEED"))
        c.seed = std::strtoull(env_seed, nullptr, 10);
    if (const char* env_workers = std::getenv("PERC_WORKERS"))
        c.workers = static_cast<int>(std::strtol(env_workers, nullptr, 10));

    if (c.p_grid.empty() || c.n_grid.empty()) throw config_error("p and n grids must be non-empty");
    if (c.replicas < 1) throw config_error("replicas must be >= 1");
    if (c.workers < 1) throw config_error("workers must be >= 1");
    for (const double p : c.p_grid)
        if (p < 0.0 || p > 1.0) throw config_error("p values must lie in [0,1]");
    c.event.chi = c.chi;

    // every grid cell must satisfy the event's margin rule for this window
    for (const int n : c.n_grid) {
        EventSpec probe = c.event;
        probe.n = n;
        validate_event_margins(probe, c.window);
    }

    c.raw_json = config_to_json(c).dump();
    c.digest = fnv1a_hex(c.raw_json);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw config_error("cannot open config file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

void atomic_write(const std::filesystem::path& path, const std::string& contents) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << contents;
        if (!out) throw resource_error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string csv_row(const std::string& event, double p, int n, int W, int m_aux,
                    const Estimate& est) {
    char buf[320];
    std::snprintf(buf, sizeof buf, "%s,%.17g,%d,%d,%d,%llu,%.17g,%.17g,%.17g,%llu", event.c_str(),
                  p, n, W, m_aux, static_cast<unsigned long long>(est.n_samples), est.p_hat,
                  est.ci_low, est.ci_high, static_cast<unsigned long long>(est.seed));
    return buf;
}

RunArtifacts run_experiment(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();

    const GroupModel group = build_group(config.group);
    const GraphWindow window(group, config.window, config.vertex_cap);

    std::ostringstream csv;
    csv << kCsvHeader << '\n';
    std::size_t rows = 0;
    for (const double p : config.p_grid) {
        for (const int n : config.n_grid) {
            EventSpec spec = config.event;
            spec.n = n;
            Estimate est =
                estimate_event(window, spec, p, config.seed, config.replicas, config.workers);
            est.config_digest = config.digest;
            csv << csv_row(spec.name, p, n, config.window, spec.m_aux, est) << '\n';
            ++rows;
        }
    }

    const std::filesystem::path out_dir(config.out_dir);
    RunArtifacts artifacts;
    artifacts.csv = out_dir / (config.event.name + ".csv");
    artifacts.manifest = out_dir / "manifest.json";
    artifacts.rows = rows;

    atomic_write(artifacts.csv, csv.str());

    const auto t1 = std::chrono::steady_clock::now();
    nlohmann::json manifest;
    manifest["tool"] = "perc";
    manifest["version"] = "1.0.0";
    manifest["config"] = nlohmann::json::parse(config.raw_json);
    manifest["config_digest"] = config.digest;
    manifest["wall_time_s"] = std::chrono::duration<double>(t1 - t0).count();
    manifest["outputs"] = {artifacts.csv.string()};
    atomic_write(artifacts.manifest, manifest.dump(2) + "\n");
    return artifacts;
}

}  // namespace perc
