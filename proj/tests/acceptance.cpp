// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Tolerances and time budgets are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "anchor_values.hpp"
#include "cli.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "ydss/classification.hpp"
#include "ydss/evaluator.hpp"
#include "ydss/logit_model.hpp"
#include "ydss/roc.hpp"
#include "ydss/rule_tree.hpp"
#include "ydss/special_functions.hpp"
#include "ydss/stat_tests.hpp"
#include "ydss/stepwise.hpp"
#include "ydss/synth.hpp"

using namespace ydss;
using namespace ydss::testing;
namespace fs = std::filesystem;

namespace {

// Collects failed checks for one criterion.
class Check {
public:
    void expect(bool ok, const std::string& what)
    {
        ++total_;
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        failed_ += !ok;
    }
    void note(std::string s) { notes_.push_back(std::move(s)); }
    bool ok() const { return failed_ == 0; }
    std::string summary() const
    {
        std::ostringstream o;
        o << (total_ - failed_) << '/' << total_ << " checks";
        for (const auto& n : notes_) o << "; " << n;
        for (const auto& f : failures_) o << "\n      failed: " << f;
        return o.str();
    }

private:
    int total_ = 0;
    int failed_ = 0;
    std::vector<std::string> failures_;
    std::vector<std::string> notes_;
};

std::string fmt(double v)
{
    std::ostringstream o;
    o << std::setprecision(10) << v;
    return o.str();
}

double round_to(double v, int decimals)
{
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void chi_square_anchors(Check& c)
{
    constexpr double rel = anchors::kChiSquareRelTol;
    for (const auto& t : anchors::kChiSquareTriples) {
        const double p = chi_square_sf(t.statistic, t.df);
        c.expect(std::abs(p - t.p_value) / t.p_value < rel,
                 "sf(" + fmt(t.statistic) + ", " + std::to_string(t.df) + ") = " + fmt(p));
    }
    const struct {
        double x;
        int df;
        double p;
    } named[] = {{1089.527, 10, 9.5521e-228}, {207.5343, 4, 9.00999e-44}, {8.332, 4, 0.080146},
                 {162.7954, 4, 3.67573e-34}};
    for (const auto& t : named) {
        const double p = chi_square_sf(t.x, t.df);
        c.expect(std::abs(p - t.p) / t.p < rel, "named sf(" + fmt(t.x) + ") = " + fmt(p));
    }
    const double gof = chi_square_sf(anchors::kGoodnessOfFit.statistic, anchors::kGoodnessOfFit.df);
    c.expect(round_to(gof, 3) == 1.0, "sf(2145.881, 2930) = " + fmt(gof));
    c.note(std::to_string(anchors::kChiSquareTriples.size() + 5) + " triples at rel " + fmt(rel));
}

void classification_arithmetic(Check& c)
{
    std::vector<std::vector<std::uint64_t>> counts;
    for (const auto& row : anchors::kClassificationCounts) counts.emplace_back(row.begin(), row.end());
    const auto t = classification_table_from_counts(counts, {"No Desire", "Uni/Higher", "Tech/Voc"});
    for (std::size_t k = 0; k < 3; ++k) {
        c.expect(round_to(t.row_percent_correct[k], 1) == anchors::kRowPercentCorrect[k],
                 "row % " + std::to_string(k) + " = " + fmt(t.row_percent_correct[k]));
        c.expect(round_to(t.column_percent[k], 1) == anchors::kColumnPercent[k],
                 "column % " + std::to_string(k) + " = " + fmt(t.column_percent[k]));
    }
    c.expect(round_to(t.overall_percent, 1) == anchors::kOverallPercent,
             "overall % = " + fmt(t.overall_percent));
}

void evaluation_arithmetic(Check& c)
{
    std::vector<std::vector<MetricsRow>> per_set(4);
    for (std::size_t d = 0; d < 4; ++d) {
        const auto& want = anchors::kMeasures[d];
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& col = anchors::kCollapses[d][k];
            const auto m = metrics({"positive", col.tp, col.fn, col.fp, col.tn});
            const std::string at = " set " + std::to_string(d + 1) + " class " + std::to_string(k);
            c.expect(round_to(m.tpr, 6) == want.tpr[k], "tpr" + at + " = " + fmt(m.tpr));
            c.expect(round_to(m.fpr, 6) == want.fpr[k], "fpr" + at + " = " + fmt(m.fpr));
            c.expect(round_to(m.accuracy, 6) == want.accuracy[k], "accuracy" + at + " = " + fmt(m.accuracy));
            per_set[d].push_back(m);
        }
        // Averages are printed cut to four decimals.
        const auto avg = macro_average(per_set[d]);
        const std::string at = " set " + std::to_string(d + 1);
        c.expect(std::abs(avg.tpr - want.avg_tpr) < 1e-4, "avg tpr" + at + " = " + fmt(avg.tpr));
        c.expect(std::abs(avg.fpr - want.avg_fpr) < 1e-4, "avg fpr" + at + " = " + fmt(avg.fpr));
        c.expect(std::abs(avg.accuracy - want.avg_accuracy) < 1e-4, "avg accuracy" + at + " = " + fmt(avg.accuracy));
    }
    for (std::size_t k = 0; k < 3; ++k) {
        std::vector<MetricsRow> across;
        for (std::size_t d = 0; d < 4; ++d) across.push_back(per_set[d][k]);
        const auto overall = macro_average(across);
        const std::string at = " class " + std::to_string(k);
        c.expect(round_to(overall.tpr, 5) == anchors::kOverall.tpr[k], "overall tpr" + at + " = " + fmt(overall.tpr));
        c.expect(round_to(overall.fpr, 5) == anchors::kOverall.fpr[k], "overall fpr" + at + " = " + fmt(overall.fpr));
        c.expect(round_to(overall.accuracy, 5) == anchors::kOverall.accuracy[k],
                 "overall accuracy" + at + " = " + fmt(overall.accuracy));
    }
}

void roc_property(Check& c)
{
    std::vector<RocPoint> pts;
    for (std::size_t d = 0; d < 4; ++d) {
        for (std::size_t k = 0; k < 3; ++k) {
            const auto& col = anchors::kCollapses[d][k];
            const auto m = metrics({"positive", col.tp, col.fn, col.fp, col.tn});
            pts.push_back({"set " + std::to_string(d + 1) + " class " + std::to_string(k), m.fpr, m.tpr});
        }
    }
    const auto roc = roc_points(pts);
    c.expect(roc.points.size() == 12, "12 operating points");
    for (std::size_t i = 0; i < roc.points.size(); ++i) {
        c.expect(roc.points[i].tpr > roc.points[i].fpr, roc.points[i].label + " not above the diagonal");
    }
    c.note("fraction above diagonal " + fmt(roc.fraction_above));
}

void mle_correctness(Check& c)
{
    {
        const auto s = small_schema({2});
        const auto d = counts_dataset(s, {{10, 20, 70}});
        const auto m = fit(d, ModelSpec::intercept_only(s));
        const double dev = -2 * (10 * std::log(0.1) + 20 * std::log(0.2) + 70 * std::log(0.7));
        c.expect(m.converged, "intercept-only converged");
        c.expect(std::abs(m.coefficients(0, 0) - std::log(10.0 / 70.0)) < 1e-6, "alpha_1 = " + fmt(m.coefficients(0, 0)));
        c.expect(std::abs(m.coefficients(1, 0) - std::log(20.0 / 70.0)) < 1e-6, "alpha_2 = " + fmt(m.coefficients(1, 0)));
        c.expect(std::abs(m.deviance - dev) < 1e-6, "intercept-only deviance = " + fmt(m.deviance));
    }
    {
        const auto s = small_schema({2});
        const auto d = counts_dataset(s, {{30, 20, 10}, {10, 20, 30}});
        const auto m = fit(d, ModelSpec(s, {ModelTerm::main("A")}));
        const double want[2][2] = {{std::log(10.0 / 30.0), std::log(30.0 / 10.0) - std::log(10.0 / 30.0)},
                                   {std::log(20.0 / 30.0), std::log(20.0 / 10.0) - std::log(20.0 / 30.0)}};
        for (int f = 0; f < 2; ++f) {
            for (int col = 0; col < 2; ++col) {
                c.expect(std::abs(m.coefficients(f, col) - want[f][col]) < 1e-5,
                         "saturated coefficient " + std::to_string(f) + "," + std::to_string(col) + " = " +
                             fmt(m.coefficients(f, col)));
            }
        }
    }
    XorShift64Star rng(31337);
    int models = 0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::size_t> levels;
        const auto n_attr = 1 + rng.below(3);
        for (std::size_t a = 0; a < n_attr; ++a) levels.push_back(2 + rng.below(3));
        const auto s = small_schema(levels, 2 + rng.below(3));
        const auto d = random_dataset(s, 80 + rng.below(100), trial + 1);
        const auto spec = random_spec(s, rng);
        const LogitObjective obj(d, spec, s.baseline_class());
        Eigen::VectorXd theta(static_cast<Eigen::Index>(obj.n_params()));
        for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = rng.uniform() * 2 - 1;
        const auto g = obj.gradient(theta);
        const double h = 1e-5;
        double worst = 0;
        for (Eigen::Index i = 0; i < theta.size(); ++i) {
            auto up = theta, dn = theta;
            up[i] += h;
            dn[i] -= h;
            const double fd = (obj.log_likelihood(up) - obj.log_likelihood(dn)) / (2 * h);
            worst = std::max(worst, std::abs(g[i] - fd) / std::max(1.0, std::abs(fd)));
        }
        c.expect(worst <= 1e-4, "gradient vs finite difference, model " + std::to_string(trial) + ": " + fmt(worst));

        const auto m = fit(d, spec);
        bool monotone = true;
        for (std::size_t i = 1; i < m.deviance_history.size(); ++i) {
            monotone = monotone && m.deviance_history[i] <= m.deviance_history[i - 1] + 1e-9;
        }
        c.expect(monotone, "deviance not monotone, model " + std::to_string(trial));
        ++models;
    }
    c.note(std::to_string(models) + " random models");
}

void exact_test_oracles(Check& c)
{
    XorShift64Star rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t r = 2 + rng.below(4), cc = 2 + rng.below(4);
        const auto t = random_counts(rng, r, cc, 60);
        const double got = pearson_chi_square(ContingencyTable::from_counts(t)).statistic;
        const double want = pearson_oracle(t);
        c.expect(std::abs(got - want) <= 1e-10 * std::max(1.0, want), "pearson table " + std::to_string(trial));
    }
    int two_by_two = 0;
    for (std::uint64_t n = 2; n <= 30; ++n) {
        for (std::uint64_t a = 0; a <= n; ++a) {
            for (std::uint64_t b = 0; a + b <= n; ++b) {
                for (std::uint64_t cc = 0; a + b + cc <= n; ++cc) {
                    const std::uint64_t d = n - a - b - cc;
                    if (a + b == 0 || cc + d == 0 || a + cc == 0 || b + d == 0) continue;
                    const Counts t{{a, b}, {cc, d}};
                    const double p = fisher_exact(ContingencyTable::from_counts(t));
                    c.expect(std::abs(p - fisher_oracle(t)) <= 1e-9,
                             "fisher " + std::to_string(a) + "," + std::to_string(b) + "," +
                                 std::to_string(cc) + "," + std::to_string(d));
                    ++two_by_two;
                }
            }
        }
    }
    XorShift64Star rxc_rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t r = 2 + rxc_rng.below(2), cc = 2 + rxc_rng.below(3);
        const auto t = random_counts(rxc_rng, r, cc, 4);
        c.expect(std::abs(fisher_exact_rxc(ContingencyTable::from_counts(t)) - fisher_oracle(t)) <= 1e-9,
                 "fisher rxc table " + std::to_string(trial));
    }
    c.note(std::to_string(two_by_two) + " 2x2 tables");
}

void selection_recovery(Check& c)
{
    const int seeds = 100;
    int activity_first = 0, noise_entered = 0;
    for (int s = 0; s < seeds; ++s) {
        const auto data = generate(default_survey_spec(1000 + static_cast<std::uint64_t>(s), 10000));
        std::vector<std::string> pool;
        for (auto a : data.schema().predictor_indices()) pool.push_back(data.schema()[a].name);
        const auto trace = forward_select(data, pool, {});
        const auto accepted = trace.accepted_terms();
        activity_first += !accepted.empty() && accepted.front() == ModelTerm::main("Type of Activity");
        for (const auto& t : accepted) noise_entered += t == ModelTerm::main(std::string(kDefaultNoiseAttribute));
    }
    c.expect(activity_first >= 95, "activity first in " + std::to_string(activity_first) + "/100");
    c.expect(noise_entered <= 10, "noise entered in " + std::to_string(noise_entered) + "/100");
    c.note("activity first " + std::to_string(activity_first) + "/100, noise entered " +
           std::to_string(noise_entered) + "/100");
}

void end_to_end(Check& c)
{
    std::vector<fs::path> dirs{temp_dir("acceptance_pipeline_a"), temp_dir("acceptance_pipeline_b")};
    nlohmann::json eval;
    for (const auto& dir : dirs) {
        cli::PipelineConfig cfg;
        cfg.gen_default = true;
        cfg.seed = 7;
        cfg.out_dir = dir;
        std::ostringstream log;
        eval = cli::run_pipeline(cfg, log).at("evaluation");
    }
    const double base = eval.at("majority_baseline_accuracy").get<double>();
    const double rules = eval.at("rule_accuracy").get<double>();
    const double model = eval.at("model_accuracy").get<double>();
    c.expect(rules - base >= 0.10, "rule accuracy " + fmt(rules) + " vs baseline " + fmt(base));
    c.expect(model - base >= 0.10, "model accuracy " + fmt(model) + " vs baseline " + fmt(base));

    const auto manifest = slurp(dirs[0] / "manifest.json");
    c.expect(!manifest.empty() && manifest == slurp(dirs[1] / "manifest.json"), "manifests differ");
    const auto listing = nlohmann::json::parse(manifest);
    c.expect(listing.at("files").size() >= 15, "manifest lists too few files");
    for (const auto& f : listing.at("files")) {
        const auto name = f.at("file").get<std::string>();
        c.expect(slurp(dirs[0] / name) == slurp(dirs[1] / name), name + " differs between runs");
    }
    c.note("rules " + fmt(round_to(rules, 4)) + ", model " + fmt(round_to(model, 4)) + ", baseline " +
           fmt(round_to(base, 4)));
}

void rule_grammar(Check& c)
{
    const auto s = default_survey_schema();
    Dataset one(s);
    one.add(rule_one_record(s));
    TreeOptions chain;
    chain.stop_when_pure = false;
    const auto rules = extract_rules(build_tree(one, kRuleOneOrder, chain));
    c.expect(rules.size() == 1, "single chain rule");
    if (!rules.empty()) c.expect(render_rule(rules[0], 1) == kRuleOneText, "text: " + render_rule(rules[0], 1));
    c.expect(render_rules(parse_rules(kRuleOneText)) == kRuleOneText, "round trip of the chain rule");

    for (std::uint64_t seed : {5u, 6u, 7u}) {
        TreeOptions opt;
        opt.min_support = 30;
        const auto tree = build_tree(generate(default_survey_spec(seed, 3000)), kRuleOneOrder, opt);
        for (bool backoff : {false, true}) {
            const auto text = render_rules(extract_rules(tree, backoff));
            c.expect(render_rules(parse_rules(text)) == text, "round trip, seed " + std::to_string(seed));
        }
    }
}

struct Criterion {
    std::string name;
    double budget_seconds;
    std::function<void(Check&)> run;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {"chi-square tail anchors", 1, chi_square_anchors},
        {"classification-table arithmetic", 1, classification_arithmetic},
        {"evaluation arithmetic", 1, evaluation_arithmetic},
        {"ROC operating points above chance", 1, roc_property},
        {"MLE correctness", 10, mle_correctness},
        {"exact-test oracles", 30, exact_test_oracles},
        {"selection recovery", 600, selection_recovery},
        {"end-to-end pipeline", 300, end_to_end},
        {"rule grammar", 1, rule_grammar},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.run(check);
        } catch (const std::exception& e) {
            check.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        check.expect(secs < cr.budget_seconds, "over time budget of " + fmt(cr.budget_seconds) + " s");
        const bool ok = check.ok();
        failed += !ok;
        std::cout << (ok ? "PASS" : "FAIL") << "  " << cr.name << "  (" << std::fixed << std::setprecision(2)
                  << secs << " s)  " << std::defaultfloat << check.summary() << std::endl;
    }
    std::cout << (criteria.size() - failed) << '/' << criteria.size() << " criteria passed" << std::endl;
    return failed == 0 ? 0 : 1;
}
