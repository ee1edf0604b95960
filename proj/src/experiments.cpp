#include "parlab/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "parlab/fractional.hpp"
#include "parlab/hermite.hpp"
#include "parlab/riesz.hpp"
#include "parlab/simd.hpp"
#include "parlab/spectral.hpp"
#include "parlab/weights.hpp"

namespace parlab::experiments {

namespace {

using nlohmann::json;
using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

ExperimentKind parse_kind(const std::string& s) {
    if (s == "constants") return ExperimentKind::constants;
    if (s == "solve") return ExperimentKind::solve;
    if (s == "riesz-verify") return ExperimentKind::riesz_verify;
    if (s == "poisson-verify") return ExperimentKind::poisson_verify;
    if (s == "weights") return ExperimentKind::weights;
    if (s == "norm-ratios") return ExperimentKind::norm_ratios;
    if (s == "all") return ExperimentKind::all;
    throw std::invalid_argument("config: unknown experiment kind '" + s + "'");
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok)
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
    }
}

GridSpec parse_grid(const json& j) {
    reject_unknown_keys(j, {"n", "L", "N_x", "t_min", "t_max", "N_t"}, "grid");
    GridSpec g;
    g.n = j.value("n", 1);
    g.L = j.value("L", 2.0);
    g.N_x = j.value("N_x", 65);
    g.t_min = j.value("t_min", 0.0);
    g.t_max = j.value("t_max", 1.0);
    g.N_t = j.value("N_t", 65);
    g.validate();
    return g;
}

GridSpec default_grid() {
    GridSpec g;
    g.n = 1;
    g.L = 2.0;
    g.N_x = 65;
    g.t_min = 0.0;
    g.t_max = 1.0;
    g.N_t = 65;
    return g;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
    json j = json::parse(text);
    reject_unknown_keys(j,
                        {"experiment", "n", "operator", "grid", "p", "q", "s", "nu_exponent",
                         "omega_exponent", "seed", "family_size", "refinement_levels",
                         "operators", "tolerance", "output_dir"},
                        "top level");
    ExperimentConfig c;
    c.grid = default_grid();
    if (j.contains("experiment")) c.kind = parse_kind(j["experiment"].get<std::string>());
    c.n = j.value("n", 1);
    if (j.contains("operator")) {
        std::string op = j["operator"].get<std::string>();
        if (op == "heat") c.op = Evolution::heat;
        else if (op == "hermite") c.op = Evolution::hermite;
        else throw std::invalid_argument("config: unknown operator '" + op + "'");
    }
    if (j.contains("grid")) c.grid = parse_grid(j["grid"]);
    c.p = j.value("p", 2.0);
    c.q = j.value("q", 2.0);
    c.s = j.value("s", 0.5);
    c.nu_exponent = j.value("nu_exponent", 0.0);
    c.omega_exponent = j.value("omega_exponent", 0.0);
    c.seed = j.value("seed", 1ull);
    c.family_size = j.value("family_size", 6);
    c.refinement_levels = j.value("refinement_levels", 3);
    if (j.contains("operators")) {
        for (const auto& v : j["operators"]) c.operators.push_back(v.get<std::string>());
    }
    if (j.contains("tolerance")) c.tolerance_override = j["tolerance"].get<double>();
    c.output_dir = j.value("output_dir", std::string("."));
    if (c.tolerance_override && !(*c.tolerance_override > 0.0))
        throw std::invalid_argument("config: tolerance must be positive");
    return c;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

bool RunReport::all_pass() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

namespace {

void add_row(RunReport& rep, const std::string& experiment, const std::string& check,
             double computed, double expected, double tol, clock_type::time_point t0) {
    CheckRow row;
    row.experiment = experiment;
    row.check = check;
    row.computed = computed;
    row.expected = expected;
    row.tolerance = tol;
    row.pass = std::isfinite(computed) && std::abs(computed - expected) <= tol;
    row.seconds = seconds_since(t0);
    rep.rows.push_back(row);
}

void add_bound_row(RunReport& rep, const std::string& experiment, const std::string& check,
                   double computed, double bound, clock_type::time_point t0) {
    CheckRow row;
    row.experiment = experiment;
    row.check = check;
    row.computed = computed;
    row.expected = bound;
    row.tolerance = 0.0;
    row.pass = std::isfinite(computed) && computed <= bound;
    row.seconds = seconds_since(t0);
    rep.rows.push_back(row);
}

GridFunction family_field(const GridSpec& spec, std::uint64_t seed, int max_wavenumber = 2) {
    RandomFamilyParams params;
    params.max_wavenumber = max_wavenumber;
    params.mode_count = 6;
    params.support_fraction = 0.5;
    return sample(random_family_descriptor(spec, seed, params), spec);
}

void run_constants(const ExperimentConfig& cfg, RunReport& rep) {
    auto t0 = clock_type::now();
    riesz::Constants c1 = riesz::constants(1);
    add_row(rep, "constants", "A_1", c1.A_n, std::erfc(0.5), 1e-10, t0);
    t0 = clock_type::now();
    riesz::Constants c2 = riesz::constants(2);
    add_row(rep, "constants", "A_2", c2.A_n, 0.5 * std::exp(-0.25), 1e-10, t0);
    for (int n = 1; n <= 5; ++n) {
        t0 = clock_type::now();
        riesz::Constants c = riesz::constants(n);
        add_row(rep, "constants", "identity_n" + std::to_string(n), n * c.A_n + c.B_n, 1.0,
                1e-12, t0);
    }
    if (cfg.n >= 1 && cfg.n <= 5) {
        t0 = clock_type::now();
        riesz::Constants c = riesz::constants(cfg.n);
        add_bound_row(rep, "constants", "A_n_in_(0,1)_n" + std::to_string(cfg.n),
                      (c.A_n > 0.0 && c.A_n < 1.0) ? 0.0 : 1.0, 0.5, t0);
    }
}

void run_solve(const ExperimentConfig& cfg, RunReport& rep) {
    double tol = cfg.tolerance_override.value_or(5e-2);
    auto t0 = clock_type::now();
    GridFunction f = family_field(cfg.grid, cfg.seed);
    riesz::SolveReport sr = riesz::solve_global(cfg.op, f);
    std::string opname = cfg.op == Evolution::heat ? "heat" : "hermite";
    add_bound_row(rep, "solve", opname + "_residual", sr.interior_residual_rel, tol, t0);

    t0 = clock_type::now();
    GridSpec coarse = cfg.grid;
    coarse.N_x = (cfg.grid.N_x - 1) / 2 + 1;
    coarse.N_t = (cfg.grid.N_t - 1) / 2 + 1;
    GridFunction fc = family_field(coarse, cfg.seed);
    riesz::SolveReport src = riesz::solve_global(cfg.op, fc);
    add_bound_row(rep, "solve", opname + "_residual_decreases",
                  sr.interior_residual_rel / src.interior_residual_rel, 1.0, t0);
}

void run_riesz_verify(const ExperimentConfig& cfg, RunReport& rep) {
    double tol = cfg.tolerance_override.value_or(1e-2);
    const GridSpec& spec = cfg.grid;
    Mask interior = interior_mask(spec, 0.25 * (spec.t_max - spec.t_min), 0.25 * spec.L);
    riesz::TruncationSchedule sched = riesz::TruncationSchedule::geometric(
        8.0 * std::max(spec.h_x(), std::sqrt(spec.h_t())), 3);
    for (int m = 0; m < std::min(cfg.family_size, 4); ++m) {
        GridFunction f = family_field(spec, cfg.seed + m);
        auto t0 = clock_type::now();
        riesz::LimitResult rij =
            riesz::riesz_limit(cfg.op, f, sched, riesz::RieszKind::ij, 0, 0);
        GridFunction oij = cfg.op == Evolution::heat
                               ? spectral::derivative_oracle(f, false, 0, 0)
                               : GridFunction{};
        if (cfg.op == Evolution::heat) {
            add_bound_row(rep, "riesz-verify", "ij_seed" + std::to_string(cfg.seed + m),
                          rel_l2_error(rij.values, oij, interior), tol, t0);
            t0 = clock_type::now();
            riesz::LimitResult rt = riesz::riesz_limit(cfg.op, f, sched, riesz::RieszKind::t, 0, 0);
            GridFunction ot = spectral::derivative_oracle(f, true);
            add_bound_row(rep, "riesz-verify", "t_seed" + std::to_string(cfg.seed + m),
                          rel_l2_error(rt.values, ot, interior), tol, t0);
        }
    }
}

void run_poisson_verify(const ExperimentConfig& cfg, RunReport& rep) {
    auto t0 = clock_type::now();
    for (int k = 0; k <= 12; k += 4) {
        double y = std::pow(2.0, -k);
        t0 = clock_type::now();
        add_row(rep, "poisson-verify", "mass_y2e-" + std::to_string(k),
                fractional::poisson_total_mass(cfg.s, y), 1.0, 1e-10, t0);
    }
    t0 = clock_type::now();
    GridFunction u = family_field(cfg.grid, cfg.seed);
    double sup_u = sup_abs(u);
    GridFunction pu = fractional::poisson_apply(cfg.op, u, 0.5, cfg.s);
    add_bound_row(rep, "poisson-verify", "contraction", sup_abs(pu), sup_u + 1e-8, t0);
}

void run_weights(const ExperimentConfig& cfg, RunReport& rep) {
    weights::BallSampler sampler;
    sampler.seed = cfg.seed + 99;
    auto t0 = clock_type::now();
    auto cls1 = weights::classify(WeightSpec::power_x(0.5), 2.0,
                                  weights::Geometry::euclidean_space, 1, sampler);
    add_row(rep, "weights", "power_x_0.5_stable",
            cls1 == weights::Classification::stable ? 1.0 : 0.0, 1.0, 0.0, t0);
    t0 = clock_type::now();
    auto cls2 = weights::classify(WeightSpec::power_t(-2.0), 2.0,
                                  weights::Geometry::euclidean_time, 1, sampler);
    add_row(rep, "weights", "power_t_-2_divergent",
            cls2 == weights::Classification::divergent ? 1.0 : 0.0, 1.0, 0.0, t0);
    t0 = clock_type::now();
    auto probe = weights::tensor_parabolic_probe(WeightSpec::power_t(0.3),
                                                 WeightSpec::power_x(0.5), 2.0, 1, sampler);
    bool finite = std::isfinite(probe.nu_sqrt_metric.constant) &&
                  std::isfinite(probe.nu_euclidean.constant) &&
                  std::isfinite(probe.omega_euclidean.constant) &&
                  std::isfinite(probe.tensor_parabolic.constant);
    add_row(rep, "weights", "tensor_probe_finite", finite ? 1.0 : 0.0, 1.0, 0.0, t0);
}

void run_norm_ratios(const ExperimentConfig& cfg, RunReport& rep) {
    std::vector<std::string> ops = cfg.operators;
    if (ops.empty()) ops = {"heat_ij", "heat_t", "hermite_ij", "hermite_t", "poisson_maximal"};
    WeightSpec nu =
        cfg.nu_exponent == 0.0 ? WeightSpec::unit() : WeightSpec::power_t(cfg.nu_exponent);
    WeightSpec omega =
        cfg.omega_exponent == 0.0 ? WeightSpec::unit() : WeightSpec::power_x(cfg.omega_exponent);
    for (const std::string& op : ops) {
        auto t0 = clock_type::now();
        auto rows = norm_ratio_experiment(op, cfg.family_size, cfg.q, cfg.p, nu, omega,
                                          cfg.refinement_levels, cfg.seed);
        double lo = 1e300, hi = 0.0;
        for (const auto& r : rows) {
            lo = std::min(lo, r.max_ratio);
            hi = std::max(hi, r.max_ratio);
        }
        add_bound_row(rep, "norm-ratios", op + "_stability", hi / lo, 1.25, t0);
    }
}

}  // namespace

std::vector<NormRatioRow> norm_ratio_experiment(const std::string& op_name, int family_size,
                                                double q, double p, const WeightSpec& nu,
                                                const WeightSpec& omega, int levels,
                                                std::uint64_t seed) {
    std::vector<NormRatioRow> out;
    for (int level = 0; level < levels; ++level) {
        GridSpec spec;
        spec.n = 1;
        spec.L = 2.0;
        spec.t_min = 0.0;
        spec.t_max = 1.0;
        spec.N_x = 16 * (1 << level) + 1;
        spec.N_t = spec.N_x;
        double eps0 = 4.0 * std::max(spec.h_x(), std::sqrt(spec.h_t()));
        riesz::TruncationSchedule sched = riesz::TruncationSchedule::geometric(eps0, 2);

        NormRatioRow row;
        row.op_name = op_name;
        row.level = level;
        row.N = spec.N_x;
        for (int m = 0; m < family_size; ++m) {
            GridFunction f = family_field(spec, seed + 31 * m);
            double fnorm = (q == 1.0) ? mixed_norm(f, 1.0, p, nu, omega)
                                      : mixed_norm(f, q, p, nu, omega);
            if (fnorm == 0.0) continue;  // zero-input marker: row skipped
            GridFunction Rf;
            if (op_name == "heat_ij") {
                Rf = riesz::riesz_limit(Evolution::heat, f, sched, riesz::RieszKind::ij, 0, 0)
                         .values;
            } else if (op_name == "heat_t") {
                Rf = riesz::riesz_limit(Evolution::heat, f, sched, riesz::RieszKind::t, 0, 0)
                         .values;
            } else if (op_name == "hermite_ij") {
                Rf = riesz::riesz_limit(Evolution::hermite, f, sched, riesz::RieszKind::ij, 0, 0)
                         .values;
            } else if (op_name == "hermite_t") {
                Rf = riesz::riesz_limit(Evolution::hermite, f, sched, riesz::RieszKind::t, 0, 0)
                         .values;
            } else if (op_name == "poisson_maximal") {
                std::vector<double> ys;
                for (int k2 = 12; k2 >= 0; --k2) ys.push_back(std::pow(2.0, -k2));
                Rf = fractional::maximal_poisson(Evolution::heat, f, 0.5, ys);
            } else {
                throw std::invalid_argument("norm_ratio_experiment: unknown operator " + op_name);
            }
            double ratio;
            if (q == 1.0) {
                // weak-type ratio maximized over a lambda grid
                double lam_hi = sup_abs(Rf) * 2.0 + 1e-30;
                double best = 0.0;
                for (int g = 0; g < 24; ++g) {
                    double lam = lam_hi * std::pow(10.0, -3.0 * (23 - g) / 23.0);
                    double meas = weak_level_measure(Rf, p, omega, nu, lam);
                    best = std::max(best, lam * meas / fnorm);
                }
                ratio = best;
            } else {
                ratio = mixed_norm(Rf, q, p, nu, omega) / fnorm;
            }
            row.max_ratio = std::max(row.max_ratio, ratio);
        }
        out.push_back(row);
    }
    return out;
}

RunReport run(const ExperimentConfig& config) {
    auto t0 = clock_type::now();
    RunReport rep;
    std::ostringstream fp;
    fp << "parlab simd=" << simd::active_name() << " compiler=" <<
#if defined(__clang__)
        "clang " << __clang_major__
#elif defined(__GNUC__)
        "gcc " << __GNUC__
#else
        "unknown"
#endif
        ;
    rep.fingerprint = fp.str();

    switch (config.kind) {
        case ExperimentKind::constants: run_constants(config, rep); break;
        case ExperimentKind::solve: run_solve(config, rep); break;
        case ExperimentKind::riesz_verify: run_riesz_verify(config, rep); break;
        case ExperimentKind::poisson_verify: run_poisson_verify(config, rep); break;
        case ExperimentKind::weights: run_weights(config, rep); break;
        case ExperimentKind::norm_ratios: run_norm_ratios(config, rep); break;
        case ExperimentKind::all: {
            try {
                run_constants(config, rep);
                run_weights(config, rep);
                run_poisson_verify(config, rep);
                run_solve(config, rep);
                run_riesz_verify(config, rep);
            } catch (const std::exception& e) {
                CheckRow row;
                row.experiment = "all";
                row.check = std::string("error: ") + e.what();
                row.pass = false;
                rep.rows.push_back(row);
            }
            break;
        }
    }
    rep.wall_seconds = seconds_since(t0);
    return rep;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

void write_csv(const RunReport& report, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "# fingerprint: " << report.fingerprint << "\n";
    out << "experiment,check,computed,expected,tolerance,status,seconds\n";
    for (const auto& r : report.rows) {
        out << r.experiment << ',' << r.check << ',' << fmt(r.computed) << ',' << fmt(r.expected)
            << ',' << fmt(r.tolerance) << ',' << (r.pass ? "pass" : "fail") << ','
            << fmt(r.seconds) << "\n";
    }
    atomic_write(path, out.str());
}

void write_summary_json(const RunReport& report, const std::filesystem::path& path) {
    nlohmann::json j;
    j["fingerprint"] = report.fingerprint;
    j["wall_seconds"] = report.wall_seconds;
    j["all_pass"] = report.all_pass();
    j["rows"] = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json row;
        row["experiment"] = r.experiment;
        row["check"] = r.check;
        row["computed"] = r.computed;
        row["expected"] = r.expected;
        row["tolerance"] = r.tolerance;
        row["pass"] = r.pass;
        row["seconds"] = r.seconds;
        j["rows"].push_back(row);
    }
    atomic_write(path, j.dump(2) + "\n");
}

}  // namespace parlab::experiments
