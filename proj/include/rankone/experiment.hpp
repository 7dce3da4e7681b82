#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rankone/matrix.hpp"
#include "rankone/maxvol.hpp"

namespace rankone {

enum class Variant { converge, fixed4, max_among_viewed };

std::string_view to_string(Variant v);
std::string_view to_string(StartPolicy p);
Variant          parse_variant(std::string_view s);
StartPolicy      parse_start_policy(std::string_view s);

struct ExperimentConfig {
    std::vector<double> ratios       = {1, 2, 4, 8, 16, 32, 64, 128};
    Index               rows         = 100;
    Index               cols         = 100;
    int                 trials       = 1000;
    Variant             variant      = Variant::converge;
    StartPolicy         start_policy = StartPolicy::verified_good;
    int                 k            = 4; // columns for scan-k, minimum moves for max-among-viewed
    Field               field        = Field::real;
    std::uint64_t       master_seed  = 0;
    std::string         output_path  = ".";

    /// Throws std::invalid_argument on an unusable configuration.
    void validate() const;

    /// Non-fatal remarks, e.g. verified-good requested where eps > 1/8.
    std::vector<std::string> warnings() const;
};

struct TrialRecord {
    double ratio       = 0.0;
    int    ratio_index = 0;
    int    trial_index = 0;

    double found_over_max = 0.0; // |a_found| / max |A_ij|
    double err_over_delta = 0.0; // ||A - c a^-1 r||_C / delta
    double epsilon        = 0.0;
    double lower_bound    = 0.0; // (sigma mu2^2 ||u|| ||v|| + delta) / max |A_ij|; 0 when eps > 1/8
    double err_bound      = 0.0; // error bound over delta (worst-case branch when eps > 1/8)

    std::optional<bool>   start_good;    // empty when eps > 1/8
    std::optional<bool>   final_good;    // result column good
    std::optional<double> bad_fraction;  // share of bad columns in this model

    int  steps        = 0;
    int  resamples    = 0; // rejected start columns under verified-good
    bool start_verified = false;
    bool degenerate   = false;

    // unnormalized quantities
    double found_abs     = 0.0;
    double max_abs       = 0.0;
    double residual_norm = 0.0;
    double delta         = 0.0;
    double sigma         = 0.0;
    double pivot_lower_bound = 0.0; // sigma mu2^2 ||u|| ||v|| + delta; 0 when eps > 1/8
};

struct SummaryRow {
    double                ratio              = 0.0;
    double                mean_found         = 0.0;
    double                min_found          = 0.0;
    double                mean_err           = 0.0;
    double                max_err            = 0.0;
    double                lower_bound_curve  = 0.0;
    double                err_bound_curve    = 0.0;
    std::optional<double> p_bad_random;
    std::optional<double> p_bad_algo;
    int                   degenerate         = 0;
    std::int64_t          resamples          = 0;
    double                max_err_over_bound = 0.0;
};

struct BoundCurveRow {
    double                ratio               = 0.0;
    double                epsilon             = 0.0;
    bool                  uses_worst_case     = false;
    double                err_bound_over_delta = 0.0;
    std::optional<double> worst_case_value;  // raw worst-case expression, eps > 1/8
    std::optional<double> lower_bound_unit;  // mu2^2 + eps, eps <= 1/8
};

struct ExperimentResult {
    std::vector<TrialRecord> trials; // ordered by (ratio index, trial index)
    std::vector<SummaryRow>  summary;
};

TrialRecord run_trial(const ExperimentConfig& config, int ratio_index, int trial_index);

/// Trials run in parallel; output does not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::vector<BoundCurveRow> bound_curves(const ExperimentConfig& config);
BoundCurveRow              bound_curve_at(double ratio);

std::vector<SummaryRow> summarize(const ExperimentConfig& config, const std::vector<TrialRecord>& trials);

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& trials);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);
void write_diagnostics_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

/// Checks that output_path accepts files, runs, then writes trials.csv,
/// summary.csv and diagnostics.csv there.
ExperimentResult run_experiment_to_files(const ExperimentConfig& config);

namespace serial {
ExperimentResult run_experiment(const ExperimentConfig& config);
}

} // namespace rankone
