#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "http_server.hpp"
#include "ydss/classification.hpp"
#include "ydss/csv.hpp"
#include "ydss/error.hpp"
#include "ydss/evaluator.hpp"
#include "ydss/hashing.hpp"
#include "ydss/roc.hpp"
#include "ydss/rule_tree.hpp"
#include "ydss/screening.hpp"
#include "ydss/stepwise.hpp"
#include "ydss/synth.hpp"

namespace ydss::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

template <typename Writer>
void write_with(const fs::path& path, Writer&& writer)
{
    std::ostringstream buf;
    writer(buf);
    write_file(path, buf.str());
}

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json read_json(const fs::path& path)
{
    json doc = json::parse(read_file(path), nullptr, false);
    if (doc.is_discarded()) throw ValidationError(path.string() + ": not valid JSON");
    return doc;
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, ',')) {
        const auto b = cur.find_first_not_of(' ');
        const auto e = cur.find_last_not_of(' ');
        if (b != std::string::npos) items.push_back(cur.substr(b, e - b + 1));
    }
    return items;
}

void check_alpha(double a, const char* flag)
{
    if (!(a > 0.0 && a <= 1.0)) {
        throw ValidationError(std::string(flag) + " must lie in (0, 1], got " + std::to_string(a));
    }
}

Dataset load_data(const std::string& data, const AttributeSchema& schema, bool skip_bad)
{
    auto r = load_csv(data, schema, skip_bad ? RowPolicy::skip : RowPolicy::fail);
    if (r.skipped_rows > 0) {
        std::cerr << "skipped " << r.skipped_rows << " invalid rows in " << data << '\n';
    }
    return std::move(r.data);
}

SelectionTrace select_terms(const Dataset& data, const std::vector<std::string>& pool,
                            bool interactions, double alpha, unsigned jobs)
{
    SelectionOptions opt;
    opt.alpha = alpha;
    opt.jobs = jobs;
    std::vector<ModelTerm> inter;
    if (interactions) inter = pairwise_interactions(data.schema(), pool);
    return forward_select(data, pool, inter, opt);
}

TreeOptions tree_options(std::size_t min_support, std::size_t max_depth)
{
    TreeOptions t;
    t.min_support = std::max<std::size_t>(min_support, 1);
    if (max_depth > 0) t.max_depth = max_depth;
    return t;
}

void write_rules(const RuleTree& tree, const fs::path& dir, bool include_backoff)
{
    const auto rules = extract_rules(tree, include_backoff);
    write_file(dir / "rules.txt", render_rules(rules));
    write_file(dir / "rules.json", rules_to_json(rules).dump(2) + "\n");
}

json gof_json(const GoodnessOfFit& g)
{
    return {{"deviance", g.deviance},
            {"residual_df", g.residual_df},
            {"p_value", g.p_value},
            {"lack_of_fit", g.lack_of_fit}};
}

json fit_and_save(const Dataset& train, const ModelSpec& spec, const fs::path& dir,
                  FittedLogitModel& model)
{
    model = fit(train, spec);
    model.save((dir / "model.json").string());
    std::vector<LevelIndex> obs, pred;
    obs.reserve(train.size());
    pred.reserve(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        obs.push_back(train.class_of(i));
        pred.push_back(classify(model, train.record(i)));
    }
    const auto table =
        classification_table(obs, pred, train.schema().class_attribute().levels);
    write_with(dir / "classification.csv",
               [&](std::ostream& o) { write_classification_csv(o, table); });
    json info{{"terms", json::array()},
              {"deviance", model.deviance},
              {"n_params", model.n_params},
              {"converged", model.converged},
              {"iterations", model.iterations},
              {"separation_warning", model.separation_warning},
              {"training_percent_correct", table.overall_percent}};
    for (const auto& t : spec.terms()) {
        if (t.kind != ModelTerm::Kind::intercept) info["terms"].push_back(t.label());
    }
    try {
        info["goodness_of_fit"] = gof_json(goodness_of_fit(model, train));
    } catch (const std::exception& e) {
        info["goodness_of_fit"] = {{"error", e.what()}};
    }
    return info;
}

double safe_ratio(std::uint64_t num, std::uint64_t den)
{
    return den == 0 ? std::nan("") : static_cast<double>(num) / static_cast<double>(den);
}

std::string fmt6(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

json predictions_csv(const Artifacts& art, const Dataset& data, const fs::path& path)
{
    const auto& classes = art.schema.class_attribute().levels;
    std::ostringstream o;
    o << "row,observed,rule_class,rule_backoff,model_class";
    for (const auto& c : classes) o << ",p(" << csv_escape(c) << ')';
    o << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto rec = data.record(i);
        const auto m = classify_rule(art.tree, rec);
        const auto probs = predict_proba(art.model, rec);
        o << i + 1 << ',' << csv_escape(classes[data.class_of(i)]) << ','
          << csv_escape(classes[m.predicted]) << ',' << (m.backoff ? "yes" : "no") << ','
          << csv_escape(classes[argmax(probs)]);
        for (double p : probs) o << ',' << fmt6(p);
        o << '\n';
    }
    write_file(path, o.str());
    return {{"rows", data.size()}};
}

} // namespace

fs::path output_dir(const std::string& flag)
{
    if (const char* env = std::getenv("DSS_OUTPUT_DIR"); env != nullptr && *env != '\0') {
        return fs::path(env);
    }
    return fs::path(flag);
}

void write_manifest(const fs::path& dir)
{
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().filename() != "manifest.json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    json list = json::array();
    for (const auto& f : files) {
        const auto bytes = read_file(f);
        list.push_back({{"file", f.filename().string()},
                        {"bytes", bytes.size()},
                        {"fnv1a64", to_hex(fnv1a64(bytes))}});
    }
    write_file(dir / "manifest.json", json{{"files", list}}.dump(2) + "\n");
}

json evaluate_artifacts(const Artifacts& art, const Dataset& data, const fs::path& dir)
{
    if (data.empty()) throw ValidationError("evaluation data is empty");
    const auto& classes = art.schema.class_attribute().levels;
    std::vector<LevelIndex> obs, rule_pred, model_pred;
    for (std::size_t i = 0; i < data.size(); ++i) {
        obs.push_back(data.class_of(i));
        rule_pred.push_back(classify_rule(art.tree, data.record(i)).predicted);
        model_pred.push_back(classify(art.model, data.record(i)));
    }

    // Majority class of the evaluation set's observed labels under a
    // constant predictor; callers that hold training data override it.
    std::vector<std::uint64_t> freq(classes.size(), 0);
    for (auto c : obs) ++freq[c];

    struct Predictor {
        std::string name;
        const std::vector<LevelIndex>* pred;
    };
    const Predictor predictors[] = {{"rules", &rule_pred}, {"model", &model_pred}};

    std::ostringstream eval;
    eval << "predictor,class,tp,fn,fp,tn,tpr,fpr,accuracy\n";
    std::vector<RocPoint> points;
    json accuracy = json::object();
    for (const auto& p : predictors) {
        const auto m = confusion(obs, *p.pred, classes);
        write_with(dir / ("confusion_" + p.name + ".csv"),
                   [&](std::ostream& o) { write_confusion_csv(o, m); });
        double sum_tpr = 0, sum_fpr = 0, sum_acc = 0;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            const auto b = collapse(m, c);
            const double tpr = safe_ratio(b.tp, b.tp + b.fn);
            const double fpr = safe_ratio(b.fp, b.fp + b.tn);
            const double acc = safe_ratio(b.tp + b.tn, b.total());
            sum_tpr += tpr;
            sum_fpr += fpr;
            sum_acc += acc;
            eval << p.name << ',' << csv_escape(classes[c]) << ',' << b.tp << ',' << b.fn << ','
                 << b.fp << ',' << b.tn << ',' << fmt6(tpr) << ',' << fmt6(fpr) << ','
                 << fmt6(acc) << '\n';
            if (!std::isnan(tpr) && !std::isnan(fpr)) {
                points.push_back({p.name + ": " + classes[c], fpr, tpr});
            }
        }
        const double k = static_cast<double>(classes.size());
        eval << p.name << ",Avg.,,,,," << fmt6(sum_tpr / k) << ',' << fmt6(sum_fpr / k) << ','
             << fmt6(sum_acc / k) << '\n';
        accuracy[p.name] = safe_ratio(m.trace(), m.total());
    }
    write_file(dir / "eval.csv", eval.str());
    const auto roc = roc_points(points);
    write_with(dir / "roc.csv", [&](std::ostream& o) { write_roc_csv(o, roc); });
    write_file(dir / "roc.svg", render_roc_svg(roc, "Held-out one-vs-rest operating points"));

    std::uint64_t agree = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) agree += rule_pred[i] == model_pred[i];
    return {{"n", data.size()},
            {"rule_accuracy", accuracy["rules"]},
            {"model_accuracy", accuracy["model"]},
            {"agreement", safe_ratio(agree, obs.size())},
            {"fraction_above_diagonal", roc.fraction_above},
            {"observed_class_counts", freq}};
}

json run_pipeline(const PipelineConfig& cfg, std::ostream& log)
{
    check_alpha(cfg.screen_alpha, "--screen-alpha");
    check_alpha(cfg.select_alpha, "--select-alpha");
    if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
        throw ValidationError("--test-fraction must lie in (0, 1)");
    }
    const fs::path dir = cfg.out_dir;
    fs::create_directories(dir);

    Dataset data;
    json source;
    if (cfg.gen_default) {
        auto spec = default_survey_spec(cfg.seed, cfg.n);
        data = generate(spec);
        save_csv((dir / "data.csv").string(), data);
        write_file(dir / "generator.json", spec.to_json().dump(2) + "\n");
        source = {{"generator", "default"}, {"seed", cfg.seed}, {"n", cfg.n}};
    } else {
        if (cfg.data_path.empty() || cfg.schema_path.empty()) {
            throw ValidationError("pipeline needs --gen-default or both --data and --schema");
        }
        auto schema = AttributeSchema::load(cfg.schema_path);
        data = load_data(cfg.data_path, schema, false);
        source = {{"data", cfg.data_path}, {"schema", cfg.schema_path}};
    }
    const auto& schema = data.schema();
    schema.save((dir / "schema.json").string());

    const auto split = train_test_split(data, cfg.test_fraction, cfg.seed);
    log << "records: " << data.size() << " (train " << split.train.size() << ", test "
        << split.test.size() << ")\n";

    const auto screening = screen_univariate(split.train, cfg.screen_alpha);
    write_with(dir / "screening.csv", [&](std::ostream& o) { write_screening_csv(o, screening); });
    const auto pool = screening.significant_attributes();
    log << "screened in: " << pool.size() << " attributes\n";
    if (pool.empty()) throw ValidationError("no attribute passed screening; raise --screen-alpha");

    const auto trace =
        select_terms(split.train, pool, cfg.interactions, cfg.select_alpha, cfg.jobs);
    write_file(dir / "trace.json", trace.to_json().dump(2) + "\n");
    write_with(dir / "trace.csv", [&](std::ostream& o) { write_trace_csv(o, trace); });
    json accepted = json::array();
    for (const auto& t : trace.accepted_terms()) accepted.push_back(t.label());
    log << "selected terms: " << accepted.dump() << '\n';

    FittedLogitModel model;
    auto fit_info = fit_and_save(split.train, trace.final_spec, dir, model);

    auto order = tree_attribute_order(trace);
    if (order.empty()) order = pool;
    auto tree = build_tree(split.train, order, tree_options(cfg.min_support, cfg.max_depth));
    tree.save((dir / "tree.json").string());
    write_rules(tree, dir, false);

    Artifacts art{schema, std::move(model), std::move(tree)};
    auto eval = evaluate_artifacts(art, split.test, dir);

    std::vector<std::uint64_t> train_freq(schema.class_count(), 0);
    for (std::size_t i = 0; i < split.train.size(); ++i) ++train_freq[split.train.class_of(i)];
    const auto majority = static_cast<LevelIndex>(argmax(std::vector<double>(
        train_freq.begin(), train_freq.end())));
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < split.test.size(); ++i) hits += split.test.class_of(i) == majority;
    const double baseline = safe_ratio(hits, split.test.size());
    eval["majority_class"] = schema.class_attribute().levels[majority];
    eval["majority_baseline_accuracy"] = baseline;

    json summary{{"source", source},
                 {"schema_hash", schema.hash()},
                 {"n_train", split.train.size()},
                 {"n_test", split.test.size()},
                 {"screen_alpha", cfg.screen_alpha},
                 {"select_alpha", cfg.select_alpha},
                 {"screened_attributes", pool},
                 {"selected_terms", accepted},
                 {"tree_order", order},
                 {"tree_nodes", art.tree.nodes().size()},
                 {"rules", extract_rules(art.tree).size()},
                 {"model", fit_info},
                 {"evaluation", eval}};
    write_file(dir / "summary.json", summary.dump(2) + "\n");
    write_manifest(dir);
    log << "held-out accuracy: rules " << fmt6(eval["rule_accuracy"].get<double>()) << ", model "
        << fmt6(eval["model_accuracy"].get<double>()) << ", majority baseline " << fmt6(baseline)
        << '\n';
    return summary;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Further-education desire analysis: screening, generalized logit selection, "
                 "rule trees, evaluation and a prediction service",
                 "ydss"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.set_version_flag("--version", "0.1.0");

    std::string out_flag = "out";
    std::string data_path, schema_path, trace_path, terms_text, order_text, tree_path,
        artifacts_dir, profile_path, spec_path;
    std::uint64_t seed = 7;
    std::size_t n = 10000;
    double alpha_screen = kDefaultScreenAlpha, alpha_select = kDefaultSelectAlpha;
    unsigned jobs = 0;
    bool skip_bad = false, no_interactions = false, include_backoff = false;
    std::size_t min_support = 1, max_depth = 0;

    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", out_flag, "Output directory (DSS_OUTPUT_DIR overrides)");
    };
    auto add_data = [&](CLI::App* sub, bool required) {
        auto* d = sub->add_option("--data", data_path, "Input data CSV")->check(CLI::ExistingFile);
        auto* s = sub->add_option("--schema", schema_path, "Attribute schema JSON")
                      ->check(CLI::ExistingFile);
        if (required) {
            d->required();
            s->required();
        }
        sub->add_flag("--skip-invalid-rows", skip_bad,
                      "Skip rows with missing or unknown levels instead of failing");
    };

    auto* gen = app.add_subcommand("gen", "Generate a synthetic survey dataset");
    gen->add_option("--spec", spec_path, "Generator spec JSON (default: built-in survey spec)")
        ->check(CLI::ExistingFile);
    gen->add_option("--seed", seed, "PRNG seed (ignored with --spec)");
    gen->add_option("--n", n, "Record count (ignored with --spec)");
    add_out(gen);

    auto* screen = app.add_subcommand("screen", "Univariate chi-square screening");
    add_data(screen, true);
    screen->add_option("--alpha", alpha_screen, "Screening tolerance");
    add_out(screen);

    auto* select = app.add_subcommand("select", "Forward selection by deviance tests");
    add_data(select, true);
    select->add_option("--alpha", alpha_select, "Selection significance level");
    select->add_option("--screen-alpha", alpha_screen, "Screening tolerance for the candidate pool");
    select->add_flag("--no-interactions", no_interactions, "Skip the pairwise interaction phase");
    select->add_option("--jobs", jobs, "Worker threads for candidate fits (0 = all cores)");
    add_out(select);

    auto* fitc = app.add_subcommand("fit", "Fit a generalized logit model");
    add_data(fitc, true);
    fitc->add_option("--terms", terms_text, "Comma-separated terms, e.g. \"A,B,A*B\"");
    fitc->add_option("--trace", trace_path, "Use the final model of a selection trace")
        ->check(CLI::ExistingFile);
    add_out(fitc);

    auto* treec = app.add_subcommand("tree", "Grow a fixed-order stratification tree");
    add_data(treec, true);
    treec->add_option("--order", order_text, "Comma-separated split order");
    treec->add_option("--trace", trace_path, "Take the split order from a selection trace")
        ->check(CLI::ExistingFile);
    treec->add_option("--min-support", min_support, "Do not split nodes with fewer records");
    treec->add_option("--max-depth", max_depth, "Depth limit (0 = length of the order)");
    treec->add_flag("--include-backoff", include_backoff, "Also emit rules for empty cells");
    add_out(treec);

    auto* rulesc = app.add_subcommand("rules", "Render the rule set of a tree");
    rulesc->add_option("--tree", tree_path, "Tree JSON")->required()->check(CLI::ExistingFile);
    rulesc->add_option("--schema", schema_path, "Attribute schema JSON")
        ->required()
        ->check(CLI::ExistingFile);
    rulesc->add_flag("--include-backoff", include_backoff, "Also emit rules for empty cells");
    add_out(rulesc);

    auto* predict = app.add_subcommand("predict", "Predict one profile or a whole CSV");
    predict->add_option("--artifacts", artifacts_dir, "Directory with schema/model/tree JSON")
        ->required()
        ->check(CLI::ExistingDirectory);
    auto* prof = predict->add_option("--profile", profile_path, "Profile JSON object")
                     ->check(CLI::ExistingFile);
    auto* pdata = predict->add_option("--data", data_path, "Data CSV to predict in batch")
                      ->check(CLI::ExistingFile);
    prof->excludes(pdata);
    add_out(predict);

    auto* evalc = app.add_subcommand("evaluate", "Confusion matrices, TPR/FPR and ROC points");
    evalc->add_option("--artifacts", artifacts_dir, "Directory with schema/model/tree JSON")
        ->required()
        ->check(CLI::ExistingDirectory);
    evalc->add_option("--data", data_path, "Held-out data CSV")->required()->check(CLI::ExistingFile);
    evalc->add_flag("--skip-invalid-rows", skip_bad,
                    "Skip rows with missing or unknown levels instead of failing");
    add_out(evalc);

    PipelineConfig pcfg;
    std::size_t pipe_min_support = pcfg.min_support;
    auto* pipe = app.add_subcommand("pipeline", "Run every stage end to end on a held-out split");
    pipe->add_flag("--gen-default", pcfg.gen_default, "Generate data from the built-in spec");
    pipe->add_option("--data", pcfg.data_path, "Input data CSV")->check(CLI::ExistingFile);
    pipe->add_option("--schema", pcfg.schema_path, "Attribute schema JSON")
        ->check(CLI::ExistingFile);
    pipe->add_option("--seed", pcfg.seed, "Seed for generation and the split");
    pipe->add_option("--n", pcfg.n, "Records to generate");
    pipe->add_option("--test-fraction", pcfg.test_fraction, "Held-out fraction");
    pipe->add_option("--screen-alpha", pcfg.screen_alpha, "Screening tolerance");
    pipe->add_option("--select-alpha", pcfg.select_alpha, "Selection significance level");
    pipe->add_option("--jobs", pcfg.jobs, "Worker threads for candidate fits (0 = all cores)");
    pipe->add_option("--min-support", pipe_min_support, "Do not split tree nodes with fewer records");
    pipe->add_option("--max-depth", pcfg.max_depth, "Tree depth limit (0 = length of the order)");
    bool pipe_no_inter = false;
    pipe->add_flag("--no-interactions", pipe_no_inter, "Skip the pairwise interaction phase");
    add_out(pipe);

    std::string host = "127.0.0.1";
    int port = 8080;
    std::string cors = "*";
    auto* serve = app.add_subcommand("serve", "Serve /schema, /predict and /whatif over HTTP");
    serve->add_option("--artifacts", artifacts_dir, "Directory with schema/model/tree JSON")
        ->required()
        ->check(CLI::ExistingDirectory);
    serve->add_option("--host", host, "Bind address");
    serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
    serve->add_option("--cors-origin", cors, "Value of Access-Control-Allow-Origin");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        const fs::path dir = output_dir(out_flag);
        auto prepare = [&] { fs::create_directories(dir); };

        if (*gen) {
            prepare();
            GeneratorSpec spec =
                spec_path.empty() ? default_survey_spec(seed, n) : GeneratorSpec::load(spec_path);
            const auto data = generate(spec);
            save_csv((dir / "data.csv").string(), data);
            spec.schema.save((dir / "schema.json").string());
            write_file(dir / "generator.json", spec.to_json().dump(2) + "\n");
            write_manifest(dir);
            out << "wrote " << data.size() << " records to " << (dir / "data.csv").string() << '\n';
            return 0;
        }
        if (*screen) {
            check_alpha(alpha_screen, "--alpha");
            const auto data = load_data(data_path, AttributeSchema::load(schema_path), skip_bad);
            prepare();
            const auto report = screen_univariate(data, alpha_screen);
            write_with(dir / "screening.csv",
                       [&](std::ostream& o) { write_screening_csv(o, report); });
            write_manifest(dir);
            write_screening_csv(out, report);
            return 0;
        }
        if (*select) {
            check_alpha(alpha_select, "--alpha");
            check_alpha(alpha_screen, "--screen-alpha");
            const auto data = load_data(data_path, AttributeSchema::load(schema_path), skip_bad);
            prepare();
            const auto report = screen_univariate(data, alpha_screen);
            const auto pool = report.significant_attributes();
            if (pool.empty()) throw ValidationError("no attribute passed screening");
            const auto trace = select_terms(data, pool, !no_interactions, alpha_select, jobs);
            write_file(dir / "trace.json", trace.to_json().dump(2) + "\n");
            write_with(dir / "trace.csv", [&](std::ostream& o) { write_trace_csv(o, trace); });
            write_manifest(dir);
            write_trace_csv(out, trace);
            return 0;
        }
        if (*fitc) {
            auto schema = AttributeSchema::load(schema_path);
            const auto data = load_data(data_path, schema, skip_bad);
            std::vector<ModelTerm> terms;
            if (!trace_path.empty()) {
                if (!terms_text.empty()) throw ValidationError("give --terms or --trace, not both");
                const auto trace = SelectionTrace::from_json(read_json(trace_path), schema);
                terms = trace.final_spec.terms();
            } else {
                for (const auto& t : split_list(terms_text)) terms.push_back(ModelTerm::parse(t));
            }
            std::erase_if(terms, [](const ModelTerm& t) {
                return t.kind == ModelTerm::Kind::intercept;
            });
            prepare();
            FittedLogitModel model;
            const auto info = fit_and_save(data, ModelSpec(schema, terms), dir, model);
            schema.save((dir / "schema.json").string());
            write_file(dir / "fit.json", info.dump(2) + "\n");
            write_manifest(dir);
            out << info.dump(2) << '\n';
            return 0;
        }
        if (*treec) {
            auto schema = AttributeSchema::load(schema_path);
            const auto data = load_data(data_path, schema, skip_bad);
            std::vector<std::string> order;
            if (!trace_path.empty()) {
                if (!order_text.empty()) throw ValidationError("give --order or --trace, not both");
                order = tree_attribute_order(SelectionTrace::from_json(read_json(trace_path), schema));
            } else {
                order = split_list(order_text);
            }
            if (order.empty()) throw ValidationError("tree needs a non-empty --order or --trace");
            prepare();
            const auto tree = build_tree(data, order, tree_options(min_support, max_depth));
            tree.save((dir / "tree.json").string());
            schema.save((dir / "schema.json").string());
            write_rules(tree, dir, include_backoff);
            write_manifest(dir);
            out << "tree: " << tree.nodes().size() << " nodes, " << extract_rules(tree).size()
                << " rules\n";
            return 0;
        }
        if (*rulesc) {
            const auto schema = AttributeSchema::load(schema_path);
            const auto tree = RuleTree::load(tree_path, schema);
            prepare();
            write_rules(tree, dir, include_backoff);
            write_manifest(dir);
            out << render_rules(extract_rules(tree, include_backoff));
            return 0;
        }
        if (*predict) {
            auto art = Artifacts::load(artifacts_dir);
            if (!profile_path.empty()) {
                const PredictionService service(std::move(art));
                const auto resp = service.predict(read_json(profile_path));
                if (resp.status != 200) {
                    err << resp.body.dump(2) << '\n';
                    return 2;
                }
                out << resp.body.dump(2) << '\n';
                return 0;
            }
            if (data_path.empty()) throw ValidationError("predict needs --profile or --data");
            const auto data = load_data(data_path, art.schema, skip_bad);
            prepare();
            predictions_csv(art, data, dir / "predictions.csv");
            write_manifest(dir);
            out << "wrote " << data.size() << " predictions to "
                << (dir / "predictions.csv").string() << '\n';
            return 0;
        }
        if (*evalc) {
            const auto art = Artifacts::load(artifacts_dir);
            const auto data = load_data(data_path, art.schema, skip_bad);
            prepare();
            const auto summary = evaluate_artifacts(art, data, dir);
            write_file(dir / "evaluation.json", summary.dump(2) + "\n");
            write_manifest(dir);
            out << summary.dump(2) << '\n';
            return 0;
        }
        if (*pipe) {
            pcfg.min_support = pipe_min_support;
            pcfg.interactions = !pipe_no_inter;
            pcfg.out_dir = dir;
            const auto summary = run_pipeline(pcfg, out);
            (void)summary;
            return 0;
        }
        if (*serve) {
            const PredictionService service(Artifacts::load(artifacts_dir));
            return serve_http(service, host, port, cors, out);
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "failed: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace ydss::cli
