#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fracterm/analysis.hpp"
#include "fracterm/constants.hpp"

namespace fracterm {

// ---------------------------------------------------------------------------
// experiment configuration (versioned JSON schema)
// ---------------------------------------------------------------------------

struct BasisConfig {
    std::string kind = "dirichlet_1d";  // dirichlet_1d | dirichlet_2d | spectrum_file
    double length = pi;
    double length_y = pi;
    int j_count = 16;
    std::string path;  // spectrum_file only
};

struct TerminalDataConfig {
    std::string preset = "single_mode";  // single_mode | power_law | file
    int mode = 1;                        // 1-based
    double value = 1.0;
    double exponent = 0.0;  // power_law: f_j = lambda_j^exponent (j)^{-offset}
    double offset = 0.0;
    std::string path;  // file preset: CSV j,value
};

struct NonlinearityConfig {
    std::string kind = "zero";  // zero | lipschitz | linear_inhomogeneous | ginzburg_landau | burgers
    double l1 = 0.0;
    std::vector<double> inhomogeneity;
    double s = 1.0;
    double c_rho = 0.0;
    double b = 0.0;
};

struct GridConfig {
    int n = 128;
    double gamma_mesh = 2.0;
};

struct SolverRunConfig {
    std::string mode = "picard";  // picard | contraction | forward | roundtrip
    double tol = 1e-10;
    int max_iter = 50;
    double roundtrip_tol = 1e-3;  // hard-check envelope in roundtrip mode
};

struct AnalysisConfig {
    std::vector<double> norms = {0.0};  // gammas reported in trajectory.csv
    bool constants = false;
    bool regularity = false;
    double nu_prime = 0.5;  // Holder target offset used by the regularity suite
};

struct RegularityConfig {
    double nu = 0.0;
    double theta = 0.8;
    double sigma = -0.8;
    double q = 1.0;
    double vartheta = 0.9;
};

struct ExperimentConfig {
    int schema_version = 1;
    double alpha = 1.5;
    double t_final = 2.0;
    BasisConfig basis;
    TerminalDataConfig f;
    NonlinearityConfig nonlinearity;
    GridConfig grid;
    SolverRunConfig solver;
    RegularityConfig regularity;
    AnalysisConfig analysis;
    std::string output_dir = "out";
};

namespace detail {

using ojson = nlohmann::ordered_json;

template <typename T>
T field(const ojson& j, const std::string& block, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const ojson::exception&) {
        throw ConfigError("config field " + block + "." + key + " has the wrong type");
    }
}

inline void require_cfg(bool ok, const std::string& what) {
    if (!ok) throw ConfigError("config field " + what);
}

}  // namespace detail

inline ExperimentConfig config_from_json(const detail::ojson& j) {
    using detail::field;
    using detail::require_cfg;
    ExperimentConfig c;
    c.schema_version = field(j, "", "schema_version", -1);
    require_cfg(c.schema_version == 1, "schema_version must be 1");

    auto p = j.value("problem", detail::ojson::object());
    c.alpha = field(p, "problem", "alpha", c.alpha);
    c.t_final = field(p, "problem", "t_final", c.t_final);
    require_cfg(c.alpha > 1.0 && c.alpha <= 2.0, "problem.alpha must lie in (1,2]");
    require_cfg(c.t_final > 0.0, "problem.t_final must be positive");

    auto b = p.value("basis", detail::ojson::object());
    c.basis.kind = field<std::string>(b, "problem.basis", "kind", c.basis.kind);
    c.basis.length = field(b, "problem.basis", "length", c.basis.length);
    c.basis.length_y = field(b, "problem.basis", "length_y", c.basis.length_y);
    c.basis.j_count = field(b, "problem.basis", "j_count", c.basis.j_count);
    c.basis.path = field<std::string>(b, "problem.basis", "path", c.basis.path);
    require_cfg(c.basis.kind == "dirichlet_1d" || c.basis.kind == "dirichlet_2d" ||
                    c.basis.kind == "spectrum_file",
                "problem.basis.kind is not a known basis kind");
    require_cfg(c.basis.j_count >= 1, "problem.basis.j_count must be at least 1");
    require_cfg(c.basis.kind != "spectrum_file" || !c.basis.path.empty(),
                "problem.basis.path is required for spectrum_file");

    auto f = p.value("f", detail::ojson::object());
    c.f.preset = field<std::string>(f, "problem.f", "preset", c.f.preset);
    c.f.mode = field(f, "problem.f", "mode", c.f.mode);
    c.f.value = field(f, "problem.f", "value", c.f.value);
    c.f.exponent = field(f, "problem.f", "exponent", c.f.exponent);
    c.f.offset = field(f, "problem.f", "offset", c.f.offset);
    c.f.path = field<std::string>(f, "problem.f", "path", c.f.path);
    require_cfg(c.f.preset == "single_mode" || c.f.preset == "power_law" || c.f.preset == "file",
                "problem.f.preset is not a known preset");
    require_cfg(c.f.preset != "file" || !c.f.path.empty(),
                "problem.f.path is required for the file preset");

    auto nl = j.value("nonlinearity", detail::ojson::object());
    c.nonlinearity.kind = field<std::string>(nl, "nonlinearity", "kind", c.nonlinearity.kind);
    c.nonlinearity.l1 = field(nl, "nonlinearity", "l1", c.nonlinearity.l1);
    c.nonlinearity.inhomogeneity = field(nl, "nonlinearity", "inhomogeneity",
                                         c.nonlinearity.inhomogeneity);
    c.nonlinearity.s = field(nl, "nonlinearity", "s", c.nonlinearity.s);
    c.nonlinearity.c_rho = field(nl, "nonlinearity", "c_rho", c.nonlinearity.c_rho);
    c.nonlinearity.b = field(nl, "nonlinearity", "b", c.nonlinearity.b);
    require_cfg(c.nonlinearity.kind == "zero" || c.nonlinearity.kind == "lipschitz" ||
                    c.nonlinearity.kind == "linear_inhomogeneous" ||
                    c.nonlinearity.kind == "ginzburg_landau" || c.nonlinearity.kind == "burgers",
                "nonlinearity.kind is not a known kind");

    auto g = j.value("grid", detail::ojson::object());
    c.grid.n = field(g, "grid", "n", c.grid.n);
    c.grid.gamma_mesh = field(g, "grid", "gamma_mesh", c.grid.gamma_mesh);
    require_cfg(c.grid.n >= 8, "grid.n must be at least 8");
    require_cfg(c.grid.gamma_mesh >= 1.0, "grid.gamma_mesh must be at least 1");

    auto s = j.value("solver", detail::ojson::object());
    c.solver.mode = field<std::string>(s, "solver", "mode", c.solver.mode);
    c.solver.tol = field(s, "solver", "tol", c.solver.tol);
    c.solver.max_iter = field(s, "solver", "max_iter", c.solver.max_iter);
    c.solver.roundtrip_tol = field(s, "solver", "roundtrip_tol", c.solver.roundtrip_tol);
    require_cfg(c.solver.mode == "picard" || c.solver.mode == "contraction" ||
                    c.solver.mode == "forward" || c.solver.mode == "roundtrip",
                "solver.mode is not a known mode");
    require_cfg(c.solver.tol > 0.0, "solver.tol must be positive");
    require_cfg(c.solver.max_iter >= 1, "solver.max_iter must be at least 1");

    auto r = j.value("regularity", detail::ojson::object());
    c.regularity.nu = field(r, "regularity", "nu", c.regularity.nu);
    c.regularity.theta = field(r, "regularity", "theta", c.regularity.theta);
    c.regularity.sigma = field(r, "regularity", "sigma", c.regularity.sigma);
    c.regularity.q = field(r, "regularity", "q", c.regularity.q);
    c.regularity.vartheta = field(r, "regularity", "vartheta", c.regularity.vartheta);

    auto a = j.value("analysis", detail::ojson::object());
    c.analysis.norms = field(a, "analysis", "norms", c.analysis.norms);
    c.analysis.constants = field(a, "analysis", "constants", c.analysis.constants);
    c.analysis.regularity = field(a, "analysis", "regularity", c.analysis.regularity);
    c.analysis.nu_prime = field(a, "analysis", "nu_prime", c.analysis.nu_prime);
    require_cfg(!c.analysis.norms.empty(), "analysis.norms must list at least one exponent");

    c.output_dir = field<std::string>(j, "", "output_dir", c.output_dir);
    return c;
}

inline detail::ojson config_to_json(const ExperimentConfig& c) {
    detail::ojson j;
    j["schema_version"] = c.schema_version;
    auto& p = j["problem"];
    p["alpha"] = c.alpha;
    p["t_final"] = c.t_final;
    auto& b = p["basis"];
    b["kind"] = c.basis.kind;
    b["length"] = c.basis.length;
    b["length_y"] = c.basis.length_y;
    b["j_count"] = c.basis.j_count;
    b["path"] = c.basis.path;
    auto& f = p["f"];
    f["preset"] = c.f.preset;
    f["mode"] = c.f.mode;
    f["value"] = c.f.value;
    f["exponent"] = c.f.exponent;
    f["offset"] = c.f.offset;
    f["path"] = c.f.path;
    auto& nl = j["nonlinearity"];
    nl["kind"] = c.nonlinearity.kind;
    nl["l1"] = c.nonlinearity.l1;
    nl["inhomogeneity"] = c.nonlinearity.inhomogeneity;
    nl["s"] = c.nonlinearity.s;
    nl["c_rho"] = c.nonlinearity.c_rho;
    nl["b"] = c.nonlinearity.b;
    auto& g = j["grid"];
    g["n"] = c.grid.n;
    g["gamma_mesh"] = c.grid.gamma_mesh;
    auto& s = j["solver"];
    s["mode"] = c.solver.mode;
    s["tol"] = c.solver.tol;
    s["max_iter"] = c.solver.max_iter;
    s["roundtrip_tol"] = c.solver.roundtrip_tol;
    auto& r = j["regularity"];
    r["nu"] = c.regularity.nu;
    r["theta"] = c.regularity.theta;
    r["sigma"] = c.regularity.sigma;
    r["q"] = c.regularity.q;
    r["vartheta"] = c.regularity.vartheta;
    auto& a = j["analysis"];
    a["norms"] = c.analysis.norms;
    a["constants"] = c.analysis.constants;
    a["regularity"] = c.analysis.regularity;
    a["nu_prime"] = c.analysis.nu_prime;
    j["output_dir"] = c.output_dir;
    return j;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    detail::ojson j;
    try {
        j = detail::ojson::parse(text);
    } catch (const detail::ojson::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return config_from_json(j);
}

inline std::string serialize_config(const ExperimentConfig& c) { return config_to_json(c).dump(2); }

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file cannot be opened: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// deterministic CSV emission
// ---------------------------------------------------------------------------

/// Shortest decimal representation that round-trips to the same double.
inline std::string format_number(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// Write-to-temp then rename, so readers never observe a partial file.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("output file cannot be opened: " + tmp);
        out << content;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ConfigError("output file cannot be renamed into place: " + path);
}

// ---------------------------------------------------------------------------
// pipeline
// ---------------------------------------------------------------------------

struct RunArtifacts {
    int exit_code = 0;
    std::string error_code;  // empty on success
    std::string trajectory_csv;
    std::string iterations_csv;
    std::string constants_csv;
    std::string report_csv;
};

namespace detail {

inline SpectralBasis build_basis(const BasisConfig& b) {
    if (b.kind == "dirichlet_1d") return SpectralBasis::dirichlet_laplacian_1d(b.length, b.j_count);
    if (b.kind == "dirichlet_2d")
        return SpectralBasis::dirichlet_laplacian_2d(b.length, b.length_y, b.j_count);
    std::ifstream in(b.path);
    if (!in) throw ConfigError("spectrum file cannot be opened: " + b.path);
    std::string line;
    std::vector<double> lambdas;
    while (std::getline(in, line)) {
        if (line.empty() || line.rfind("j,", 0) == 0) continue;
        int j;
        double lam;
        if (std::sscanf(line.c_str(), "%d,%lf", &j, &lam) != 2)
            throw ConfigError("spectrum file row is not 'j,lambda': " + line);
        lambdas.push_back(lam);
    }
    return SpectralBasis::from_spectrum(std::move(lambdas));
}

inline SpectralField build_terminal_data(const TerminalDataConfig& f, const SpectralBasis& basis) {
    if (f.preset == "single_mode") {
        if (f.mode < 1 || f.mode > basis.size())
            throw ConfigError("config field problem.f.mode is outside the truncation");
        return SpectralField::single_mode(basis, f.mode - 1, f.value);
    }
    if (f.preset == "power_law") {
        SpectralField out = SpectralField::zero(basis);
        for (int j = 0; j < basis.size(); ++j)
            out.coef[j] = f.value * std::pow(basis.lambda(j), f.exponent) *
                          std::pow(j + 1.0, -f.offset);
        return out;
    }
    std::ifstream in(f.path);
    if (!in) throw ConfigError("terminal data file cannot be opened: " + f.path);
    SpectralField out = SpectralField::zero(basis);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.rfind("j,", 0) == 0) continue;
        int j;
        double v;
        if (std::sscanf(line.c_str(), "%d,%lf", &j, &v) != 2)
            throw ConfigError("terminal data row is not 'j,value': " + line);
        if (j < 1 || j > basis.size())
            throw ConfigError("terminal data mode index outside the truncation: " + line);
        out.coef[j - 1] = v;
    }
    return out;
}

inline NonlinearitySpec build_nonlinearity(const NonlinearityConfig& nl) {
    if (nl.kind == "zero") return NonlinearitySpec::zero_source();
    if (nl.kind == "lipschitz") return NonlinearitySpec::lipschitz(nl.l1);
    if (nl.kind == "linear_inhomogeneous")
        return NonlinearitySpec::linear_inhomogeneous(nl.l1, nl.inhomogeneity);
    if (nl.kind == "ginzburg_landau") return NonlinearitySpec::ginzburg_landau(nl.s, nl.c_rho, nl.b);
    return NonlinearitySpec::burgers(nl.c_rho, nl.b);
}

struct ReportRow {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool pass = true;
};

inline std::string render_report(const std::vector<ReportRow>& rows) {
    std::string out = "estimate_id,lhs_max,rhs_envelope,ratio,pass\n";
    for (const auto& r : rows)
        out += r.id + "," + format_number(r.lhs) + "," + format_number(r.rhs) + "," +
               format_number(r.ratio) + "," + (r.pass ? "1" : "0") + "\n";
    return out;
}

}  // namespace detail

/// Executes the configured pipeline and renders the four artifact CSVs
/// in memory; exit code 0 iff every hard check passed. Solver failures
/// are mapped to a nonzero code plus an error row in the report.
inline RunArtifacts run_experiment(const ExperimentConfig& cfg) {
    RunArtifacts art;
    std::vector<detail::ReportRow> report;
    try {
        SpectralBasis basis = detail::build_basis(cfg.basis);
        TerminalSetup setup(cfg.alpha, cfg.t_final, basis);
        TimeGrid grid(cfg.t_final, cfg.grid.n, cfg.grid.gamma_mesh);
        SpectralField f = detail::build_terminal_data(cfg.f, basis);
        NonlinearitySpec nl = detail::build_nonlinearity(cfg.nonlinearity);

        ProblemSpec ps{&setup, f, nl, {}};
        ps.regularity.nu = cfg.regularity.nu;
        ps.regularity.theta = cfg.regularity.theta;
        ps.regularity.sigma = cfg.regularity.sigma;
        ps.regularity.q = cfg.regularity.q;
        ps.regularity.vartheta = cfg.regularity.vartheta;
        ps.regularity.nu_prime = cfg.analysis.nu_prime;

        Trajectory traj;
        if (cfg.solver.mode == "forward") {
            traj = solve_ivp_forward(setup, grid, f, nl);
        } else if (cfg.solver.mode == "contraction") {
            traj = solve_tvp_contraction(ps, grid, cfg.solver.tol, cfg.solver.max_iter);
        } else {
            traj = nl.cls == HypothesisClass::h3
                       ? solve_tvp_contraction(ps, grid, cfg.solver.tol, cfg.solver.max_iter)
                       : solve_tvp_picard(ps, grid, cfg.solver.tol, cfg.solver.max_iter);
        }

        // trajectory.csv
        std::string tcsv = "n,t";
        for (double g : cfg.analysis.norms) tcsv += ",norm_" + format_number(g);
        tcsv += "\n";
        for (int n = 0; n <= grid.node_count; ++n) {
            tcsv += std::to_string(n) + "," + format_number(grid.nodes[n]);
            for (double g : cfg.analysis.norms)
                tcsv += "," + format_number(norm_hs(traj.states[n], g));
            tcsv += "\n";
        }
        art.trajectory_csv = std::move(tcsv);

        // iterations.csv
        std::string icsv = "k,weighted_diff,ratio\n";
        for (std::size_t k = 0; k < traj.diff_norms.size(); ++k)
            icsv += std::to_string(k + 1) + "," + format_number(traj.diff_norms[k]) + "," +
                    format_number(k < traj.ratios.size() ? traj.ratios[k] : 0.0) + "\n";
        art.iterations_csv = std::move(icsv);

        // constants.csv
        std::string ccsv = "name,value\n";
        ccsv += "worst_amplification," + format_number(setup.worst_amplification()) + "\n";
        ccsv += "weyl_constant," + format_number(basis.weyl_constant()) + "\n";
        if (cfg.analysis.constants) {
            auto env = fit_bound_constants(cfg.alpha, cfg.alpha,
                                           basis.lambda(basis.size() - 1) *
                                               std::pow(cfg.t_final, cfg.alpha));
            ConstantsInput ci;
            ci.alpha = cfg.alpha;
            ci.theta = cfg.regularity.theta;
            ci.nu = cfg.regularity.nu;
            ci.sigma = cfg.regularity.sigma;
            ci.q = cfg.regularity.q;
            ci.vartheta = cfg.regularity.vartheta;
            ci.t_final = cfg.t_final;
            ci.lambda1 = basis.lambda_min();
            ci.m_alpha = env.m_alpha;
            ci.big_m_alpha = env.M_alpha;
            ci.l1_norm = cfg.nonlinearity.l1;
            ci.f_norm = norm_hs(f, cfg.regularity.nu + cfg.regularity.theta);
            auto cb = compute_constants(ci);
            auto put = [&](const char* name, double v) {
                ccsv += std::string(name) + "," + format_number(v) + "\n";
            };
            put("m_alpha", env.m_alpha);
            put("M_alpha", env.M_alpha);
            put("M1", cb.m1);
            put("M2", cb.m2);
            put("script_M1", cb.ms1);
            put("Mbar1", cb.mbar1);
            put("Mbar2", cb.mbar2);
            put("Mbar3", cb.mbar3);
            put("script_M2", cb.ms2);
            put("N2", cb.n2);
            put("script_N1", cb.ns1);
            put("script_N2", cb.ns2);
            put("script_N2_bar", cb.ns2_bar);
            put("N_f", cb.n_f);
            put("eta_glo", cb.eta_glo);
            put("eta_cri", cb.eta_cri);
            put("picard_ok", cb.picard_ok ? 1.0 : 0.0);
        }
        art.constants_csv = std::move(ccsv);

        // hard checks
        if (cfg.solver.mode != "forward") {
            double f0 = norm_hs(f, 0.0);
            SpectralField dT = traj.states[grid.node_count];
            for (std::size_t j = 0; j < dT.coef.size(); ++j) dT.coef[j] -= f.coef[j];
            double tc = norm_hs(dT, 0.0) / std::max(f0, 1e-300);
            report.push_back({"terminal_consistency", tc, 1e-10, tc / 1e-10, tc <= 1e-10});

            ConvolutionPlan plan(setup, grid);
            auto da = reconstruct_derivatives(ps, plan, traj, DerivOrder::alpha);
            auto res = equation_residual(ps, traj, da);
            double worst = 0.0;
            double w_exp = traj.weight_exponent;
            for (int n = 1; n <= grid.node_count; ++n)
                worst = std::max(worst, std::pow(grid.nodes[n], w_exp) * res[n]);
            double env = 10.0 * cfg.solver.tol;
            report.push_back({"equation_residual", worst, env, worst / env, worst <= env});
        }

        if (cfg.solver.mode == "roundtrip") {
            ConvolutionPlan plan(setup, grid);
            SpectralField u0 = reconstruct_initial(ps, plan, traj);
            auto fwd = solve_ivp_forward(setup, grid, u0, nl);
            SpectralField d = fwd.states[grid.node_count];
            for (std::size_t j = 0; j < d.coef.size(); ++j) d.coef[j] -= f.coef[j];
            double rel = norm_hs(d, 0.0) / norm_hs(f, 0.0);
            report.push_back({"roundtrip_error", rel, cfg.solver.roundtrip_tol,
                              rel / cfg.solver.roundtrip_tol, rel <= cfg.solver.roundtrip_tol});
        }

        if (cfg.analysis.regularity && cfg.solver.mode != "forward") {
            int N = grid.node_count;
            auto bf = fit_blowup_exponent(traj, cfg.regularity.nu, 4, std::max(9, N / 5));
            double lo = -1.15 * cfg.alpha * (1.0 - cfg.regularity.theta);
            report.push_back({"blowup_slope", bf.slope, lo, lo == 0.0 ? 0.0 : bf.slope / lo,
                              bf.slope >= lo && bf.slope <= 0.0});
            double eta = detail::eta_piecewise(
                cfg.alpha * (cfg.regularity.theta + cfg.analysis.nu_prime - 1.0), cfg.alpha);
            auto hf = fit_holder_modulus(traj, cfg.regularity.nu - cfg.analysis.nu_prime, eta, 3,
                                         std::min(40, N - 3));
            double floor = 0.85 * eta;
            report.push_back({"holder_slope", hf.slope, floor,
                              floor == 0.0 ? 0.0 : hf.slope / floor, hf.slope >= floor});
        }
    } catch (const ConfigError& e) {
        report.push_back({std::string("error:ConfigError:") + e.what(), 0, 0, 0, false});
        art.exit_code = 2;
        art.error_code = "ConfigError";
    } catch (const TerminalTimeInadmissible& e) {
        report.push_back({"error:TerminalTimeInadmissible:mode_j=" + std::to_string(e.mode_index),
                          static_cast<double>(e.mode_index), e.denominator, 0, false});
        art.exit_code = 3;
        art.error_code = "TerminalTimeInadmissible";
    } catch (const NonConvergence& e) {
        report.push_back({"error:NonConvergence:iterations=" + std::to_string(e.iterations),
                          static_cast<double>(e.iterations), e.last_ratio, 0, false});
        art.exit_code = 4;
        art.error_code = "NonConvergence";
    } catch (const AccuracyError& e) {
        report.push_back({"error:AccuracyError", e.best_estimate, e.error_bound, 0, false});
        art.exit_code = 5;
        art.error_code = "AccuracyError";
    } catch (const std::exception& e) {
        report.push_back({std::string("error:DomainError:") + e.what(), 0, 0, 0, false});
        art.exit_code = 6;
        art.error_code = "DomainError";
    }
    for (const auto& r : report)
        if (!r.pass && art.exit_code == 0) art.exit_code = 1;
    art.report_csv = detail::render_report(report);
    return art;
}

inline void write_artifacts(const RunArtifacts& art, const std::string& out_dir) {
    if (!art.trajectory_csv.empty())
        write_file_atomic(out_dir + "/trajectory.csv", art.trajectory_csv);
    if (!art.iterations_csv.empty())
        write_file_atomic(out_dir + "/iterations.csv", art.iterations_csv);
    if (!art.constants_csv.empty())
        write_file_atomic(out_dir + "/constants.csv", art.constants_csv);
    write_file_atomic(out_dir + "/report.csv", art.report_csv);
}

// ---------------------------------------------------------------------------
// dry-run hypothesis report
// ---------------------------------------------------------------------------

struct PredicateLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// No solve: evaluates every theorem-hypothesis predicate reachable from
/// the config and reports each with pass/fail.
inline std::vector<PredicateLine> validate_experiment(const ExperimentConfig& cfg) {
    std::vector<PredicateLine> lines;
    auto add = [&](const std::string& name, bool pass, const std::string& detail = "") {
        lines.push_back({name, pass, detail});
    };
    double a = cfg.alpha, th = cfg.regularity.theta;
    add("(alpha-1)/alpha < theta", th > (a - 1.0) / a,
        format_number((a - 1.0) / a) + " vs " + format_number(th));
    add("theta < 1", th < 1.0, format_number(th));
    add("tol > 0", cfg.solver.tol > 0.0, format_number(cfg.solver.tol));
    add("n >= 8", cfg.grid.n >= 8, std::to_string(cfg.grid.n));

    try {
        SpectralBasis basis = detail::build_basis(cfg.basis);
        try {
            TerminalSetup setup(cfg.alpha, cfg.t_final, basis);
            add("terminal time admissible (denominator guard)", true,
                "worst amplification " + format_number(setup.worst_amplification()));
        } catch (const TerminalTimeInadmissible& e) {
            add("terminal time admissible (denominator guard)", false,
                "first violating mode j=" + std::to_string(e.mode_index));
        }
        double mu = cfg.regularity.nu - cfg.regularity.sigma;
        add("vartheta in (mu, 1)", cfg.regularity.vartheta > mu && cfg.regularity.vartheta < 1.0,
            format_number(mu) + " < " + format_number(cfg.regularity.vartheta) + " < 1");

        if (cfg.nonlinearity.kind == "ginzburg_landau" || cfg.nonlinearity.kind == "burgers") {
            ApplicationParams p;
            p.n_dim = basis.dimension() == 2 ? 2 : 3;  // smallest covered dimension
            p.alpha = cfg.alpha;
            p.s = cfg.nonlinearity.s;
            p.varrho = 0.0;
            p.nu = cfg.regularity.nu;
            p.sigma = cfg.regularity.sigma;
            p.vartheta = cfg.regularity.vartheta;
            p.vartheta_prime = std::min(1.0 - 1e-6, cfg.regularity.vartheta + (4.0 - p.n_dim) / 8.0);
            p.b = cfg.nonlinearity.b;
            auto kind = cfg.nonlinearity.kind == "burgers" ? NonlinearityKind::burgers
                                                           : NonlinearityKind::ginzburg_landau;
            auto rep = validate_application_params(kind, p);
            add("application theorem route: " + rep.route, rep.pass,
                rep.violations.empty() ? "" : rep.violations.front());
        }
    } catch (const std::exception& e) {
        add("basis construction", false, e.what());
    }
    return lines;
}

}  // namespace fracterm
