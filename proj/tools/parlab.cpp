#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "parlab/experiments.hpp"

namespace {

using parlab::experiments::ExperimentConfig;
using parlab::experiments::ExperimentKind;
using parlab::experiments::RunReport;

int execute(ExperimentConfig cfg) {
    RunReport rep = parlab::experiments::run(cfg);
    std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    parlab::experiments::write_csv(rep, dir / "report.csv");
    parlab::experiments::write_summary_json(rep, dir / "summary.json");
    int failed = 0;
    for (const auto& r : rep.rows) {
        if (!r.pass) {
            ++failed;
            std::cerr << "FAIL " << r.experiment << "/" << r.check << ": computed " << r.computed
                      << " expected " << r.expected << " (tol " << r.tolerance << ")\n";
        }
    }
    std::cout << rep.rows.size() << " checks, " << failed << " failed; reports in "
              << dir.string() << "\n";
    return failed == 0 ? 0 : 1;
}

ExperimentConfig load(const std::string& config_path, ExperimentKind kind) {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = ExperimentConfig::from_json_file(config_path);
    cfg.kind = kind;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"parlab: parabolic singular-integral laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    int n_arg = 1;
    std::string op_arg = "heat";

    auto* constants = app.add_subcommand("constants", "dimensional constants A_n, B_n");
    constants->add_option("--n", n_arg, "spatial dimension");
    constants->add_option("--config", config_path, "JSON config path");

    auto* solve = app.add_subcommand("solve", "global solve with residual report");
    solve->add_option("--op", op_arg, "heat|hermite");
    solve->add_option("--config", config_path, "JSON config path");

    auto* rverify = app.add_subcommand("riesz-verify", "truncated-limit vs multiplier oracle");
    rverify->add_option("--config", config_path, "JSON config path");

    auto* pverify = app.add_subcommand("poisson-verify", "extension kernel mass/contraction");
    pverify->add_option("--config", config_path, "JSON config path");

    auto* wts = app.add_subcommand("weights", "Muckenhoupt estimates");
    wts->add_option("--config", config_path, "JSON config path");

    auto* ratios = app.add_subcommand("norm-ratios", "operator norm-ratio stability");
    ratios->add_option("--config", config_path, "JSON config path");

    auto* all = app.add_subcommand("all", "every experiment at default scale");
    all->add_option("--config", config_path, "JSON config path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (constants->parsed()) {
            ExperimentConfig cfg = load(config_path, ExperimentKind::constants);
            if (constants->count("--n")) cfg.n = n_arg;
            return execute(cfg);
        }
        if (solve->parsed()) {
            ExperimentConfig cfg = load(config_path, ExperimentKind::solve);
            if (solve->count("--op")) {
                if (op_arg == "heat") cfg.op = parlab::Evolution::heat;
                else if (op_arg == "hermite") cfg.op = parlab::Evolution::hermite;
                else throw std::invalid_argument("--op must be heat or hermite");
            }
            return execute(cfg);
        }
        if (rverify->parsed()) return execute(load(config_path, ExperimentKind::riesz_verify));
        if (pverify->parsed()) return execute(load(config_path, ExperimentKind::poisson_verify));
        if (wts->parsed()) return execute(load(config_path, ExperimentKind::weights));
        if (ratios->parsed()) return execute(load(config_path, ExperimentKind::norm_ratios));
        if (all->parsed()) return execute(load(config_path, ExperimentKind::all));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
