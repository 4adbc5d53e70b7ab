#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "perc/fitio.hpp"
#include "perc/runner.hpp"
#include "perc/verify.hpp"

namespace {

int to_exit(const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (dynamic_cast<const perc::margin_error*>(&e)) return static_cast<int>(perc::ExitCode::margin);
    if (dynamic_cast<const perc::resource_error*>(&e))
        return static_cast<int>(perc::ExitCode::resource);
    return static_cast<int>(perc::ExitCode::config);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-window percolation experiments on graphs of polynomial growth"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed_flag = 0;
    bool seed_set = false;
    int workers_flag = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        auto* c = cmd->add_option("--config", config_path, "experiment config (JSON)");
        if (needs_config) c->required();
        cmd->add_option("--out-dir", out_dir, "output directory");
        cmd->add_option("--seed", seed_flag, "seed override")->each([&](const std::string&) {
            seed_set = true;
        });
        cmd->add_option("--workers", workers_flag, "worker thread count override");
    };

    auto* info = app.add_subcommand("graph-info", "print window statistics for a config");
    add_common(info, true);

    auto* run = app.add_subcommand("run", "estimate the configured event over the p/n grid");
    add_common(run, true);

    auto* verify = app.add_subcommand("verify", "run an exact verification suite");
    std::string suite = "all";
    verify->add_option("suite", suite, "geometry | identities | coupling | all");
    verify->add_option("--out-dir", out_dir, "output directory");
    std::uint64_t verify_seed = 1;
    verify->add_option("--seed", verify_seed, "verification seed");

    auto* fit = app.add_subcommand("fit", "fit a decay model to an emitted CSV");
    std::string csv_path;
    std::string model_name = "exp";
    double alpha = 0.5;
    double growth_d = 0.0;
    bool emit_svg = false;
    fit->add_option("--csv", csv_path, "input CSV in the run schema")->required();
    fit->add_option("--model", model_name, "exp | stretched");
    fit->add_option("--alpha", alpha, "stretched exponent");
    fit->add_option("--growth-d", growth_d,
                    "derive alpha = (d-1)/d from a growth-exponent estimate");
    fit->add_flag("--svg", emit_svg, "also emit a static SVG plot");
    fit->add_option("--out-dir", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (info->parsed() || run->parsed()) {
            perc::ExperimentConfig config = perc::load_config(config_path);
            if (seed_set) config.seed = seed_flag;
            if (workers_flag > 0) config.workers = workers_flag;
            if (run->count("--out-dir") || info->count("--out-dir")) config.out_dir = out_dir;

            if (info->parsed()) {
                const perc::GroupModel group = perc::build_group(config.group);
                const perc::GraphWindow window(group, config.window, config.vertex_cap);
                const auto growth =
                    perc::growth_exponent_fit(group, std::max(4, config.window), config.vertex_cap);
                nlohmann::json out;
                out["config_digest"] = config.digest;
                out["window"] = config.window;
                out["vertex_count"] = window.vertex_count();
                out["edge_count"] = window.edge_count();
                out["degree"] = window.neighbors(0).size();
                out["d_hat"] = growth.d_hat;
                out["growth_fit_residual"] = growth.residual;
                std::cout << out.dump(2) << "\n";
                return 0;
            }
            const auto artifacts = perc::run_experiment(config);
            std::cout << "wrote " << artifacts.rows << " rows to " << artifacts.csv.string()
                      << " (manifest " << artifacts.manifest.string() << ")\n";
            return 0;
        }

        if (verify->parsed()) {
            const perc::VerifyReport report = perc::run_verify_suite(suite, verify_seed);
            const auto path = std::filesystem::path(out_dir) / ("verify_" + suite + ".json");
            perc::atomic_write(path, report.to_json());
            std::cout << report.to_json();
            return report.all_passed() ? 0 : static_cast<int>(perc::ExitCode::verification);
        }

        if (fit->parsed()) {
            perc::FitReportOptions options;
            if (model_name == "exp") {
                options.model = perc::FitModel::exponential();
            } else if (model_name == "stretched") {
                if (growth_d > 1.0) {
                    options.model = perc::FitModel::stretched((growth_d - 1.0) / growth_d);
                    options.alpha_source = "growth_exponent_fit";
                    options.d_hat = growth_d;
                } else {
                    options.model = perc::FitModel::stretched(alpha);
                }
            } else {
                throw perc::config_error("unknown fit model: " + model_name);
            }
            options.emit_svg = emit_svg;
            const auto artifacts = perc::fit_csv(csv_path, out_dir, options);
            std::printf("slope %.6g intercept %.6g r2 %.4f (%d points) -> %s\n",
                        artifacts.fit.slope, artifacts.fit.intercept, artifacts.fit.r2,
                        artifacts.fit.points_used, artifacts.report_json.string().c_str());
            return 0;
        }
    } catch (const std::exception& e) {
        return to_exit(e);
    }
    return 0;
}
