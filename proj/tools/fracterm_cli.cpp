// fracterm: configuration-driven experiment runner for the terminal
// value problem library. Subcommands: ml eval|scan, basis info,
// validate, solve, roundtrip, regularity, constants.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fracterm/experiment.hpp"

namespace {

int log_level() {
    const char* env = std::getenv("FRACTERM_LOG");
    if (env == nullptr) return 1;
    std::string v = env;
    if (v == "quiet") return 0;
    if (v == "debug") return 2;
    return 1;  // info
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[fracterm] " << msg << "\n";
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw fracterm::ConfigError("output directory cannot be created: " + dir);
}

int run_pipeline(const std::string& config_path, const std::string& out_override,
                 const std::string& forced_mode, bool force_constants, bool force_regularity) {
    auto cfg = fracterm::load_config(config_path);
    if (!forced_mode.empty()) cfg.solver.mode = forced_mode;
    if (force_constants) cfg.analysis.constants = true;
    if (force_regularity) cfg.analysis.regularity = true;
    std::string out_dir = out_override.empty() ? cfg.output_dir : out_override;
    ensure_dir(out_dir);
    auto art = fracterm::run_experiment(cfg);
    fracterm::write_artifacts(art, out_dir);
    if (!art.error_code.empty())
        info("run failed with " + art.error_code + " (exit " + std::to_string(art.exit_code) + ")");
    else
        info("artifacts written to " + out_dir + " (exit " + std::to_string(art.exit_code) + ")");
    return art.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral terminal value problems for time-fractional wave equations"};
    app.require_subcommand(1);
    app.fallthrough();  // accept --config/--out after the subcommand name

    std::string config_path, out_dir;
    int threads = 1;
    unsigned seed = 7;
    app.add_option("--config", config_path, "experiment config (JSON)");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--threads", threads, "worker threads (reserved; runs are single-process)");
    app.add_option("--seed", seed, "seed for randomized fits");

    // ml eval / ml scan
    auto* ml_cmd = app.add_subcommand("ml", "Mittag-Leffler evaluation and envelope scan");
    double ml_alpha = 1.5, ml_beta = 1.0, ml_z = -1.0, ml_tmax = 50.0;
    int ml_points = 500;
    auto* ml_eval = ml_cmd->add_subcommand("eval", "print E_{alpha,beta}(z) and certified bound");
    ml_eval->add_option("--alpha", ml_alpha)->required();
    ml_eval->add_option("--beta", ml_beta)->required();
    ml_eval->add_option("--z", ml_z)->required();
    auto* ml_scan = ml_cmd->add_subcommand("scan", "CSV envelope scan of E_{alpha,beta}(-t)");
    ml_scan->add_option("--alpha", ml_alpha)->required();
    ml_scan->add_option("--beta", ml_beta)->required();
    ml_scan->add_option("--t-max", ml_tmax);
    ml_scan->add_option("--points", ml_points);

    auto* basis_cmd = app.add_subcommand("basis", "spatial basis diagnostics");
    auto* basis_info = basis_cmd->add_subcommand("info", "print the eigenvalue table and Weyl fit");

    auto* validate_cmd = app.add_subcommand("validate", "dry run: theorem-hypothesis predicates");
    auto* solve_cmd = app.add_subcommand("solve", "run the configured solver");
    auto* roundtrip_cmd = app.add_subcommand("roundtrip", "solve, reconstruct u(0), march forward");
    auto* regularity_cmd = app.add_subcommand("regularity", "solve plus exponent-envelope fits");
    auto* constants_cmd = app.add_subcommand("constants", "emit the estimate constants");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ml_eval->parsed()) {
            fracterm::MLEvaluator ev(fracterm::MLParams{ml_alpha, ml_beta});
            auto v = ev.evaluate(ml_z);
            std::cout << "E_{" << fracterm::format_number(ml_alpha) << ","
                      << fracterm::format_number(ml_beta) << "}("
                      << fracterm::format_number(ml_z)
                      << ") = " << fracterm::format_number(v.value)
                      << "  certified_error <= " << fracterm::format_number(v.error_bound) << "\n";
            return 0;
        }
        if (ml_scan->parsed()) {
            auto env = fracterm::fit_bound_constants(ml_alpha, ml_beta, ml_tmax);
            fracterm::MLEvaluator ev(fracterm::MLParams{ml_alpha, ml_beta});
            std::string csv = "t,E_value,lower_envelope,upper_envelope,violated_flag\n";
            for (int i = 1; i <= ml_points; ++i) {
                double t = ml_tmax * i / ml_points;
                double e = ev.evaluate(-t).value;
                double lo = env.m_alpha / (1.0 + t), hi = env.M_alpha / (1.0 + t);
                bool violated = std::abs(e) < lo || std::abs(e) > hi;
                csv += fracterm::format_number(t) + "," + fracterm::format_number(e) + "," +
                       fracterm::format_number(lo) + "," + fracterm::format_number(hi) + "," +
                       (violated ? "1" : "0") + "\n";
            }
            if (out_dir.empty()) {
                std::cout << csv;
            } else {
                ensure_dir(out_dir);
                fracterm::write_file_atomic(out_dir + "/ml_scan.csv", csv);
                info("scan written to " + out_dir + "/ml_scan.csv");
            }
            return env.lower_bound_violated ? 1 : 0;
        }
        if (basis_info->parsed()) {
            if (config_path.empty()) throw fracterm::ConfigError("basis info needs --config");
            auto cfg = fracterm::load_config(config_path);
            auto basis = fracterm::detail::build_basis(cfg.basis);
            std::cout << "j,lambda\n";
            for (int j = 0; j < basis.size(); ++j)
                std::cout << j + 1 << "," << fracterm::format_number(basis.lambda(j)) << "\n";
            std::cout << "weyl_constant," << fracterm::format_number(basis.weyl_constant())
                      << "\n";
            fracterm::TerminalSetup setup(cfg.alpha, cfg.t_final, basis);
            std::cout << "worst_amplification,"
                      << fracterm::format_number(setup.worst_amplification()) << "\n";
            return 0;
        }
        if (validate_cmd->parsed()) {
            if (config_path.empty()) throw fracterm::ConfigError("validate needs --config");
            auto cfg = fracterm::load_config(config_path);
            auto lines = fracterm::validate_experiment(cfg);
            bool all = true;
            for (const auto& l : lines) {
                std::cout << (l.pass ? "PASS  " : "FAIL  ") << l.name;
                if (!l.detail.empty()) std::cout << "  [" << l.detail << "]";
                std::cout << "\n";
                all = all && l.pass;
            }
            return all ? 0 : 1;
        }
        if (solve_cmd->parsed() || roundtrip_cmd->parsed() || regularity_cmd->parsed() ||
            constants_cmd->parsed()) {
            if (config_path.empty()) throw fracterm::ConfigError("this subcommand needs --config");
            std::string forced = roundtrip_cmd->parsed() ? "roundtrip" : "";
            return run_pipeline(config_path, out_dir, forced, constants_cmd->parsed(),
                                regularity_cmd->parsed());
        }
    } catch (const fracterm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 6;
    }
    std::cerr << "no subcommand executed\n";
    return 2;
}
