#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <omp.h>

#include "rankone/bounds.hpp"
#include "rankone/experiment.hpp"

using namespace rankone;

namespace {

ExperimentConfig small(std::vector<double> ratios, int trials)
{
    ExperimentConfig c;
    c.ratios      = std::move(ratios);
    c.rows        = 30;
    c.cols        = 30;
    c.trials      = trials;
    c.master_seed = 99;
    return c;
}

std::string trials_text(const ExperimentResult& r)
{
    std::ostringstream os;
    write_trials_csv(os, r.trials);
    return os.str();
}

std::string summary_text(const ExperimentResult& r)
{
    std::ostringstream os;
    write_summary_csv(os, r.summary);
    return os.str();
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("variant and policy names")
{
    for (auto v : {Variant::converge, Variant::fixed4, Variant::max_among_viewed})
        CHECK(parse_variant(to_string(v)) == v);
    for (auto p : {StartPolicy::random_column, StartPolicy::verified_good, StartPolicy::scan_k})
        CHECK(parse_start_policy(to_string(p)) == p);
    CHECK(to_string(Variant::max_among_viewed) == "max-among-viewed");
    CHECK_THROWS(parse_variant("fast"));
    CHECK_THROWS(parse_start_policy("lucky"));
}

TEST_CASE("config validation")
{
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    auto bad = c;
    bad.trials = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad        = c;
    bad.ratios = {};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad        = c;
    bad.ratios = {8, -1};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad              = c;
    bad.start_policy = StartPolicy::scan_k;
    bad.k            = 101;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad      = c;
    bad.rows = 1;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    CHECK(c.warnings().size() == 3); // ratios 1, 2, 4 under verified-good
    c.start_policy = StartPolicy::random_column;
    CHECK(c.warnings().empty());
}

TEST_CASE("trials are deterministic")
{
    auto c = small({8, 16}, 5);
    for (auto v : {Variant::converge, Variant::fixed4, Variant::max_among_viewed})
        for (auto p : {StartPolicy::random_column, StartPolicy::verified_good, StartPolicy::scan_k}) {
            c.variant      = v;
            c.start_policy = p;
            auto a         = run_trial(c, 1, 3);
            auto b         = run_trial(c, 1, 3);
            CHECK(trials_text({{a}, {}}) == trials_text({{b}, {}}));
            CHECK(a.resamples == b.resamples);
        }
}

TEST_CASE("near rank one matrices")
{
    auto c = small({1e6}, 20);
    for (int t = 0; t < 20; ++t)
        CHECK(run_trial(c, 0, t).found_over_max >= 0.999);
}

TEST_CASE("ratio 8 with a verified good start")
{
    auto c = small({8}, 200);
    c.rows = c.cols = 100;
    for (int t = 0; t < 200; ++t) {
        const auto r = run_trial(c, 0, t);
        REQUIRE_FALSE(r.degenerate);
        CHECK(r.start_verified);
        CHECK(*r.start_good);
        CHECK(r.err_over_delta <= 12 + 1e-9);
        CHECK(r.found_abs >= r.pivot_lower_bound - 1e-9);
        CHECK(r.found_over_max >= r.lower_bound - 1e-12);
        CHECK(r.found_over_max <= 1);
    }
}

TEST_CASE("fixed four steps start above 4 eps")
{
    auto c    = small({8, 32}, 100);
    c.variant = Variant::fixed4;
    for (int ri = 0; ri < 2; ++ri)
        for (int t = 0; t < 100; ++t) {
            const auto r = run_trial(c, ri, t);
            CHECK(r.steps <= 4);
            CHECK(r.err_over_delta <= 4 * (1 + 16 * r.epsilon) + 1e-9);
        }
}

TEST_CASE("labels are empty when eps exceeds 1/8")
{
    auto       c = small({2}, 3);
    const auto r = run_trial(c, 0, 0);
    CHECK_FALSE(r.start_good);
    CHECK_FALSE(r.final_good);
    CHECK_FALSE(r.start_verified);
    CHECK(r.lower_bound == 0);
    CHECK(r.err_bound == doctest::Approx(bounds::worst_case_bound(0.5) / 0.5));
    const auto text = trials_text({{r}, {}});
    CHECK(text.find(",nan,nan,") != std::string::npos);
}

TEST_CASE("summary rows")
{
    SUBCASE("single trial")
    {
        auto c = small({16}, 1);
        auto r = run_experiment(c);
        REQUIRE(r.summary.size() == 1);
        const auto& s = r.summary[0];
        CHECK(s.mean_found == s.min_found);
        CHECK(s.mean_found == r.trials[0].found_over_max);
        CHECK(s.mean_err == s.max_err);
    }
    SUBCASE("random-start baseline is the mean bad-column share")
    {
        auto c         = small({8}, 300);
        c.start_policy = StartPolicy::random_column;
        auto   r       = run_experiment(c);
        double sum     = 0;
        for (const auto& t : r.trials)
            sum += *t.bad_fraction;
        CHECK(*r.summary[0].p_bad_random == doctest::Approx(sum / 300));
    }
    SUBCASE("algorithm lowers the bad-column rate")
    {
        auto c         = small({8, 16, 32, 64}, 300);
        c.rows = c.cols = 100;
        c.start_policy = StartPolicy::random_column;
        for (const auto& s : run_experiment(c).summary) {
            CHECK(*s.p_bad_algo <= *s.p_bad_random);
            CHECK(s.min_found <= s.mean_found);
            CHECK(s.max_err <= s.err_bound_curve);
        }
    }
}

TEST_CASE("bound curves")
{
    auto b8 = bound_curve_at(8);
    CHECK_FALSE(b8.uses_worst_case);
    CHECK(b8.err_bound_over_delta == doctest::Approx(12));
    CHECK(*b8.lower_bound_unit == doctest::Approx(0.25 + 0.125));
    CHECK(bound_curve_at(1e12).err_bound_over_delta == doctest::Approx(4).epsilon(1e-9));

    auto b4 = bound_curve_at(4);
    CHECK(b4.uses_worst_case);
    CHECK(*b4.worst_case_value == doctest::Approx((1 + 0.25 + std::sqrt(1.25 * (1 + 17 * 0.25))) / 2));
    CHECK(b4.err_bound_over_delta == doctest::Approx(*b4.worst_case_value * 4));
    CHECK(bound_curves(ExperimentConfig{}).size() == 8);
    CHECK_THROWS(bound_curve_at(0));
}

TEST_CASE("parallel runs equal the serial reference")
{
    auto c         = small({2, 8, 64}, 40);
    c.start_policy = StartPolicy::scan_k;
    const auto ref = serial::run_experiment(c);
    for (int threads : {1, 2, 5}) {
        omp_set_num_threads(threads);
        const auto par = run_experiment(c);
        CHECK(trials_text(par) == trials_text(ref));
        CHECK(summary_text(par) == summary_text(ref));
    }
}

TEST_CASE("complex field runs")
{
    auto c    = small({8, 32}, 20);
    c.field   = Field::complex;
    auto r    = run_experiment(c);
    CHECK(r.trials.size() == 40);
    for (const auto& t : r.trials)
        CHECK(t.err_over_delta <= bounds::theorem1_error_bound(1, t.epsilon) + 1e-9);
}

TEST_CASE("files")
{
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "rankone_test_files";
    fs::remove_all(dir);
    fs::create_directories(dir / "a");
    fs::create_directories(dir / "b");

    auto c        = small({4, 8}, 10);
    c.output_path = (dir / "a").string();
    run_experiment_to_files(c);
    c.output_path = (dir / "b").string();
    run_experiment_to_files(c);
    for (const char* f : {"trials.csv", "summary.csv", "diagnostics.csv"}) {
        const auto text = slurp(dir / "a" / f);
        CHECK(text == slurp(dir / "b" / f));
        CHECK(text.find('\r') == std::string::npos);
        CHECK(text.back() == '\n');
    }
    const auto trials = slurp(dir / "a" / "trials.csv");
    CHECK(trials.rfind("ratio,trial,found_over_max,err_over_delta,start_good,final_good,steps,epsilon,lower_bound,"
                       "err_bound\n",
                       0) == 0);
    const auto summary = slurp(dir / "a" / "summary.csv");
    CHECK(summary.rfind(
              "ratio,mean_found,min_found,mean_err,max_err,lower_bound_curve,err_bound_curve,p_bad_random,p_bad_algo\n",
              0) == 0);

    c.output_path = (dir / "missing" / "deeper").string();
    CHECK_THROWS_AS(run_experiment_to_files(c), IoError);
    fs::remove_all(dir);
}
