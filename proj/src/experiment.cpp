#include "rankone/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "rankone/bounds.hpp"
#include "rankone/model.hpp"
#include "rankone/random.hpp"

namespace rankone {

std::string_view to_string(Variant v)
{
    switch (v) {
    case Variant::converge: return "converge";
    case Variant::fixed4: return "fixed4";
    case Variant::max_among_viewed: return "max-among-viewed";
    }
    return "?";
}

std::string_view to_string(StartPolicy p)
{
    switch (p) {
    case StartPolicy::given: return "given";
    case StartPolicy::random_column: return "random-column";
    case StartPolicy::verified_good: return "verified-good";
    case StartPolicy::scan_k: return "scan-k";
    }
    return "?";
}

Variant parse_variant(std::string_view s)
{
    for (auto v : {Variant::converge, Variant::fixed4, Variant::max_among_viewed})
        if (s == to_string(v))
            return v;
    throw std::invalid_argument("unknown variant '" + std::string(s) +
                                "' (expected converge|fixed4|max-among-viewed)");
}

StartPolicy parse_start_policy(std::string_view s)
{
    for (auto p : {StartPolicy::random_column, StartPolicy::verified_good, StartPolicy::scan_k})
        if (s == to_string(p))
            return p;
    throw std::invalid_argument("unknown start policy '" + std::string(s) +
                                "' (expected random-column|verified-good|scan-k)");
}

namespace {

constexpr double kMaxLabelEps = 0.125 + bounds::kEpsSlack;

bool labels_defined(double eps) { return eps <= kMaxLabelEps; }

// Below this modulus of |v_j| / ||v||_inf a start column is rejected.
double start_threshold(Variant variant, double eps)
{
    if (variant == Variant::fixed4)
        return 4.0 * eps;
    return bounds::mu_thresholds(eps).mu1;
}

template <typename T>
PivotTrace<T> run_variant(const ExperimentConfig& cfg, const Matrix<T>& a, Index start)
{
    switch (cfg.variant) {
    case Variant::converge: return maxvol_rank1(a, start);
    case Variant::fixed4: return maxvol_fixed_steps(a, start, 4);
    case Variant::max_among_viewed: return maxvol_max_among_viewed(a, start, cfg.k);
    }
    throw std::logic_error("unhandled variant");
}

template <typename T>
TrialRecord run_trial_typed(const ExperimentConfig& cfg, int ratio_index, int trial_index)
{
    const double ratio = cfg.ratios.at(static_cast<std::size_t>(ratio_index));
    Rng          rng   = make_rng(cfg.master_seed, {static_cast<std::uint64_t>(ratio_index),
                                                    static_cast<std::uint64_t>(trial_index)});

    const auto model = build_ratio_model<T>({ratio, cfg.rows, cfg.cols, cfg.field}, rng);
    const auto& a    = model.a();
    const double eps = model.epsilon();

    TrialRecord r;
    r.ratio       = ratio;
    r.ratio_index = ratio_index;
    r.trial_index = trial_index;
    r.epsilon     = eps;
    r.delta       = model.delta();
    r.sigma       = model.sigma();

    Index start = 0;
    switch (cfg.start_policy) {
    case StartPolicy::given:
    case StartPolicy::random_column:
        start = sample_index(a.cols(), rng);
        break;
    case StartPolicy::verified_good:
        start = sample_index(a.cols(), rng);
        if (labels_defined(eps)) {
            r.start_verified = true;
            const double cut = start_threshold(cfg.variant, eps) * model.v_inf();
            while (!(std::abs(model.v()(start)) > cut)) {
                ++r.resamples;
                start = sample_index(a.cols(), rng);
            }
        }
        break;
    case StartPolicy::scan_k: {
        std::vector<Index> cols(static_cast<std::size_t>(a.cols()));
        std::iota(cols.begin(), cols.end(), Index{0});
        std::shuffle(cols.begin(), cols.end(), rng);
        start = scan_start_column(a, std::span<const Index>(cols.data(), static_cast<std::size_t>(cfg.k)));
        break;
    }
    }

    auto trace = run_variant(cfg, a, start);
    trace.start_policy = cfg.start_policy;

    r.steps      = trace.steps;
    r.degenerate = trace.degenerate;
    r.found_abs  = trace.result.abs_value;
    r.max_abs    = cnorm(a);
    r.found_over_max = r.found_abs / r.max_abs;
    if (!r.degenerate) {
        r.residual_norm  = cross_residual_norm(a, trace.result);
        r.err_over_delta = r.residual_norm / r.delta;
    }

    if (labels_defined(eps)) {
        const auto q      = label_quality(model, trace);
        r.start_good      = q.start_col_good;
        r.final_good      = q.final_col_good;
        r.bad_fraction    = bounds::large_entry_fraction(model.v(), eps);
        r.pivot_lower_bound =
            bounds::theorem1_pivot_lower_bound(model.sigma(), model.u_inf(), model.v_inf(), model.delta(), eps);
        r.lower_bound = r.pivot_lower_bound / r.max_abs;
        r.err_bound   = bounds::theorem1_error_bound(1.0, eps);
    } else {
        r.err_bound = bounds::worst_case_bound(eps) / eps;
    }
    return r;
}

template <typename Exec>
ExperimentResult run_all(const ExperimentConfig& cfg, Exec&& exec)
{
    cfg.validate();
    const auto per   = static_cast<std::int64_t>(cfg.trials);
    const auto total = per * static_cast<std::int64_t>(cfg.ratios.size());

    ExperimentResult out;
    out.trials.resize(static_cast<std::size_t>(total));
    exec(total, [&](std::int64_t f) {
        out.trials[static_cast<std::size_t>(f)] =
            run_trial(cfg, static_cast<int>(f / per), static_cast<int>(f % per));
    });
    out.summary = summarize(cfg, out.trials);
    return out;
}

std::string fmt_real(double x)
{
    return fmt::format("{:.17g}", x);
}

std::string fmt_opt(const std::optional<double>& x)
{
    return x ? fmt_real(*x) : std::string("nan");
}

std::string fmt_flag(const std::optional<bool>& b)
{
    return b ? (*b ? "1" : "0") : "nan";
}

} // namespace

void ExperimentConfig::validate() const
{
    if (ratios.empty())
        throw std::invalid_argument("ratio grid must be nonempty");
    for (double x : ratios)
        if (!(x > 0.0) || !std::isfinite(x))
            throw std::invalid_argument("ratios must be positive and finite");
    if (trials < 1)
        throw std::invalid_argument("trials must be at least 1");
    if (std::min(rows, cols) < 2)
        throw std::invalid_argument("need m, n >= 2");
    if (k < 1)
        throw std::invalid_argument("k must be positive");
    if (start_policy == StartPolicy::scan_k && k > cols)
        throw std::invalid_argument("scan-k needs k <= n");
}

std::vector<std::string> ExperimentConfig::warnings() const
{
    std::vector<std::string> w;
    if (start_policy == StartPolicy::verified_good)
        for (double x : ratios)
            if (!labels_defined(1.0 / x))
                w.push_back(fmt::format("ratio {} has eps > 1/8: start column is not verified", x));
    return w;
}

TrialRecord run_trial(const ExperimentConfig& config, int ratio_index, int trial_index)
{
    if (config.field == Field::complex)
        return run_trial_typed<Complex>(config, ratio_index, trial_index);
    return run_trial_typed<double>(config, ratio_index, trial_index);
}

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    return run_all(config, [](std::int64_t total, auto&& body) {
        // exceptions cannot leave the parallel region; rethrow the one from the lowest trial
        std::exception_ptr first;
        std::int64_t       first_at = total;
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t f = 0; f < total; ++f) {
            try {
                body(f);
            } catch (...) {
#pragma omp critical(rankone_trial_error)
                if (f < first_at) {
                    first_at = f;
                    first    = std::current_exception();
                }
            }
        }
        if (first)
            std::rethrow_exception(first);
    });
}

namespace serial {

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    return run_all(config, [](std::int64_t total, auto&& body) {
        for (std::int64_t f = 0; f < total; ++f)
            body(f);
    });
}

} // namespace serial

BoundCurveRow bound_curve_at(double ratio)
{
    if (!(ratio > 0.0))
        throw std::invalid_argument("ratio must be positive");
    BoundCurveRow row;
    row.ratio   = ratio;
    row.epsilon = 1.0 / ratio;
    if (labels_defined(row.epsilon)) {
        const double mu2          = bounds::mu_thresholds(row.epsilon).mu2;
        row.err_bound_over_delta  = bounds::theorem1_error_bound(1.0, row.epsilon);
        row.lower_bound_unit      = mu2 * mu2 + row.epsilon;
    } else {
        row.uses_worst_case      = true;
        row.worst_case_value     = bounds::worst_case_bound(row.epsilon);
        row.err_bound_over_delta = *row.worst_case_value / row.epsilon;
    }
    return row;
}

std::vector<BoundCurveRow> bound_curves(const ExperimentConfig& config)
{
    std::vector<BoundCurveRow> rows;
    rows.reserve(config.ratios.size());
    for (double x : config.ratios)
        rows.push_back(bound_curve_at(x));
    return rows;
}

std::vector<SummaryRow> summarize(const ExperimentConfig& config, const std::vector<TrialRecord>& trials)
{
    std::vector<SummaryRow> rows;
    for (std::size_t ri = 0; ri < config.ratios.size(); ++ri) {
        SummaryRow s;
        s.ratio           = config.ratios[ri];
        s.err_bound_curve = bound_curve_at(s.ratio).err_bound_over_delta;
        s.min_found       = INFINITY;

        int    counted = 0, labelled = 0, bad_final = 0;
        double found_sum = 0.0, err_sum = 0.0, lb_sum = 0.0, bad_sum = 0.0;
        for (const auto& t : trials) {
            if (t.ratio_index != static_cast<int>(ri))
                continue;
            s.resamples += t.resamples;
            if (t.degenerate) {
                ++s.degenerate;
                continue;
            }
            ++counted;
            found_sum += t.found_over_max;
            s.min_found = std::min(s.min_found, t.found_over_max);
            err_sum += t.err_over_delta;
            s.max_err = std::max(s.max_err, t.err_over_delta);
            lb_sum += t.lower_bound;
            if (t.final_good && t.bad_fraction) {
                ++labelled;
                bad_final += *t.final_good ? 0 : 1;
                bad_sum += *t.bad_fraction;
            }
        }
        if (counted > 0) {
            s.mean_found        = found_sum / counted;
            s.mean_err          = err_sum / counted;
            s.lower_bound_curve = lb_sum / counted;
        } else {
            s.min_found = 0.0;
        }
        if (labelled > 0) {
            s.p_bad_random = bad_sum / labelled;
            s.p_bad_algo   = static_cast<double>(bad_final) / labelled;
        }
        s.max_err_over_bound = s.max_err / s.err_bound_curve;
        rows.push_back(s);
    }
    return rows;
}

void write_trials_csv(std::ostream& os, const std::vector<TrialRecord>& trials)
{
    os << "ratio,trial,found_over_max,err_over_delta,start_good,final_good,steps,epsilon,lower_bound,err_bound\n";
    for (const auto& t : trials)
        fmt::print(os, "{},{},{},{},{},{},{},{},{},{}\n", fmt_real(t.ratio), t.trial_index,
                   fmt_real(t.found_over_max), t.degenerate ? std::string("nan") : fmt_real(t.err_over_delta),
                   fmt_flag(t.start_good), fmt_flag(t.final_good), t.steps, fmt_real(t.epsilon),
                   fmt_real(t.lower_bound), fmt_real(t.err_bound));
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows)
{
    os << "ratio,mean_found,min_found,mean_err,max_err,lower_bound_curve,err_bound_curve,p_bad_random,p_bad_algo\n";
    for (const auto& s : rows)
        fmt::print(os, "{},{},{},{},{},{},{},{},{}\n", fmt_real(s.ratio), fmt_real(s.mean_found),
                   fmt_real(s.min_found), fmt_real(s.mean_err), fmt_real(s.max_err), fmt_real(s.lower_bound_curve),
                   fmt_real(s.err_bound_curve), fmt_opt(s.p_bad_random), fmt_opt(s.p_bad_algo));
}

void write_diagnostics_csv(std::ostream& os, const std::vector<SummaryRow>& rows)
{
    os << "ratio,degenerate,resamples,max_err_over_bound\n";
    for (const auto& s : rows)
        fmt::print(os, "{},{},{},{}\n", fmt_real(s.ratio), s.degenerate, s.resamples,
                   fmt_real(s.max_err_over_bound));
}

ExperimentResult run_experiment_to_files(const ExperimentConfig& config)
{
    config.validate();
    namespace fs = std::filesystem;
    const fs::path dir(config.output_path);
    const fs::path names[] = {dir / "trials.csv", dir / "summary.csv", dir / "diagnostics.csv"};

    std::ofstream files[3];
    for (int i = 0; i < 3; ++i) {
        files[i].open(names[i], std::ios::binary | std::ios::trunc);
        if (!files[i])
            throw IoError("cannot write " + names[i].string());
    }

    auto result = run_experiment(config);
    write_trials_csv(files[0], result.trials);
    write_summary_csv(files[1], result.summary);
    write_diagnostics_csv(files[2], result.summary);
    for (int i = 0; i < 3; ++i) {
        files[i].flush();
        if (!files[i])
            throw IoError("failed writing " + names[i].string());
    }
    return result;
}

} // namespace rankone
