// Command-line front end: parameter sweeps, figure-data replays, and the
// built-in validation suite.  Exit codes: 0 ok, 2 usage, 3 validation or
// parameter failure, 4 numeric failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "robustnet/model.hpp"
#include "robustnet/sweep.hpp"
#include "robustnet/validate.hpp"

namespace {

using namespace robustnet;

constexpr const char* kConfigEnv = "ROBUSTNET_CONFIG";

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw UsageError("empty item in list: '" + s + "'");
        out.push_back(item);
    }
    return out;
}

NetworkConfig resolve_config(const std::string& config_flag) {
    std::string path = config_flag;
    if (path.empty()) {
        if (const char* env = std::getenv(kConfigEnv)) path = env;
    }
    if (path.empty()) {
        NetworkConfig cfg;  // built-in desk defaults
        return validate(cfg);
    }
    return load_config(path);
}

std::vector<Engine> parse_engines(const std::string& list) {
    std::vector<Engine> out;
    for (const std::string& name : split_list(list)) {
        const auto e = engine_from_name(name);
        if (!e) throw UsageError("unknown engine: " + name);
        out.push_back(*e);
    }
    if (out.empty()) throw UsageError("no engines given");
    return out;
}

std::vector<double> parse_values(const std::string& list) {
    std::vector<double> out;
    for (const std::string& item : split_list(list)) {
        try {
            size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("bad axis value: " + item);
        }
    }
    if (out.empty()) throw UsageError("no axis values given");
    return out;
}

PostMode parse_post_mode(const std::string& s) {
    if (s == "reassociate") return PostMode::Reassociate;
    if (s == "frozen") return PostMode::FrozenTopology;
    throw UsageError("unknown post mode: " + s);
}

CountMode parse_counts(const std::string& s) {
    if (s == "floored") return CountMode::Floored;
    if (s == "smooth") return CountMode::Smooth;
    throw UsageError("unknown count mode: " + s);
}

void emit(const SweepResult& result, const std::string& out_path) {
    if (out_path.empty()) {
        write_csv(result, std::cout);
        return;
    }
    std::ofstream os(out_path);
    if (!os) throw UsageError("cannot open output file: " + out_path);
    write_csv(result, os);
    if (!os.good()) throw std::runtime_error("write failed: " + out_path);
}

struct CommonFlags {
    std::string config;
    std::string out;
    uint64_t seed = 1;
    long iterations = 10000;
    std::string post_mode = "reassociate";
    std::string counts = "floored";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config,
                    "scenario config file (default: $" + std::string(kConfigEnv) +
                        ", else built-in desk defaults)");
    cmd->add_option("--seed", f.seed, "master seed (default 1)");
    cmd->add_option("--iterations", f.iterations,
                    "realizations per simulated point (default 10000)");
    cmd->add_option("--out", f.out, "CSV output path (default: stdout)");
    cmd->add_option("--post-mode", f.post_mode, "reassociate|frozen (default reassociate)");
    cmd->add_option("--counts", f.counts, "floored|smooth analytic counts (default floored)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cluster-network robustness laboratory"};
    app.require_subcommand(1);

    CommonFlags sweep_flags;
    std::string sweep_axis, sweep_values, sweep_engines = "sim";
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "evaluate engines along one axis");
    add_common(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--axis", sweep_axis,
                          "ch_probability|n_nodes|p_threshold_dbm|failure_q")
        ->required();
    sweep_cmd->add_option("--values", sweep_values, "comma-separated axis values")
        ->required();
    sweep_cmd->add_option("--engine", sweep_engines,
                          "comma list of sim|analytic-exact|analytic-approx|mean-degree");

    CommonFlags fig_flags;
    std::string fig_name, fig_engines;
    CLI::App* fig_cmd = app.add_subcommand("figure", "replay a standard figure's data");
    add_common(fig_cmd, fig_flags);
    fig_cmd->add_option("name", fig_name, "fig3|fig4|fig5|fig6|fig7")->required();
    fig_cmd->add_option("--engine", fig_engines, "override the preset engine list");

    std::string validate_level = "fast", validate_config;
    CLI::App* val_cmd = app.add_subcommand("validate", "run the built-in check suite");
    val_cmd->add_option("--level", validate_level, "fast|full (default fast)");
    val_cmd->add_option("--config", validate_config,
                        "config file to load-check before the suite runs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep_cmd->parsed()) {
            SweepPlan plan;
            plan.base = resolve_config(sweep_flags.config);
            const auto axis = axis_from_name(sweep_axis);
            if (!axis) throw UsageError("unknown axis: " + sweep_axis);
            plan.axis = *axis;
            plan.values = parse_values(sweep_values);
            plan.engines = parse_engines(sweep_engines);
            plan.iterations = sweep_flags.iterations;
            plan.master_seed = sweep_flags.seed;
            plan.post_mode = parse_post_mode(sweep_flags.post_mode);
            plan.counts = parse_counts(sweep_flags.counts);
            emit(run_sweep(plan), sweep_flags.out);
        } else if (fig_cmd->parsed()) {
            SweepPlan plan = figure_plan(fig_name, resolve_config(fig_flags.config));
            if (!fig_engines.empty()) plan.engines = parse_engines(fig_engines);
            plan.iterations = fig_flags.iterations;
            plan.master_seed = fig_flags.seed;
            plan.post_mode = parse_post_mode(fig_flags.post_mode);
            plan.counts = parse_counts(fig_flags.counts);
            emit(run_sweep(plan), fig_flags.out);
        } else if (val_cmd->parsed()) {
            ValidateLevel level;
            if (validate_level == "fast")
                level = ValidateLevel::Fast;
            else if (validate_level == "full")
                level = ValidateLevel::Full;
            else
                throw UsageError("unknown level: " + validate_level);
            resolve_config(validate_config);  // surfaces config errors first
            if (run_validate(level, std::cout) != 0) return 3;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidParameter& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
