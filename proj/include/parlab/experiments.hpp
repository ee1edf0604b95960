#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "parlab/grid.hpp"
#include "parlab/weight_spec.hpp"

namespace parlab::experiments {

enum class ExperimentKind {
    constants,
    solve,
    riesz_verify,
    poisson_verify,
    weights,
    norm_ratios,
    all
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::constants;
    int n = 1;
    Evolution op = Evolution::heat;
    GridSpec grid;
    double p = 2.0;
    double q = 2.0;
    double s = 0.5;
    double nu_exponent = 0.0;     // power weight |t|^a
    double omega_exponent = 0.0;  // power weight |x|^b
    std::uint64_t seed = 1;
    int family_size = 6;
    int refinement_levels = 3;
    std::vector<std::string> operators;  // norm-ratio operator names
    std::optional<double> tolerance_override;
    std::string output_dir = ".";

    static ExperimentConfig from_json_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text);
};

struct CheckRow {
    std::string experiment;
    std::string check;
    double computed = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    double seconds = 0.0;
};

struct RunReport {
    std::vector<CheckRow> rows;
    std::string fingerprint;
    double wall_seconds = 0.0;

    bool all_pass() const;
};

RunReport run(const ExperimentConfig& config);

// Norm-ratio experiment: per refinement level, the max over the seeded
// family of mixed_norm(R f)/mixed_norm(f) (or the weak-level ratio when
// q = 1). Operator names: heat_ij, heat_t, hermite_ij, hermite_t,
// poisson_maximal.
struct NormRatioRow {
    std::string op_name;
    int level = 0;
    int N = 0;
    double max_ratio = 0.0;
};
std::vector<NormRatioRow> norm_ratio_experiment(const std::string& op_name, int family_size,
                                                double q, double p, const WeightSpec& nu,
                                                const WeightSpec& omega, int levels,
                                                std::uint64_t seed);

void write_csv(const RunReport& report, const std::filesystem::path& path);
void write_summary_json(const RunReport& report, const std::filesystem::path& path);

}  // namespace parlab::experiments
