#include "ydss/synth.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "ydss/error.hpp"
#include "ydss/rng.hpp"

namespace ydss {

using nlohmann::json;

namespace {

void check_probabilities(const std::vector<double>& p, std::size_t expected,
                         const std::string& what)
{
    if (p.size() != expected) {
        throw ValidationError(what + ": expected " + std::to_string(expected) +
                              " probabilities, got " + std::to_string(p.size()));
    }
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(what + ": probability outside [0, 1]");
        sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-9) throw ValidationError(what + ": probabilities do not sum to 1");
}

} // namespace

void GeneratorSpec::validate() const
{
    if (marginals.size() != schema.size()) {
        throw ValidationError("generator: one marginal per schema attribute required");
    }
    for (std::size_t a : schema.predictor_indices()) {
        check_probabilities(marginals[a], schema[a].level_count(),
                            "generator marginal for '" + schema[a].name + "'");
    }
    if (!(truth.spec.schema() == schema)) {
        throw ValidationError("generator: truth model does not use the generator schema");
    }
    if (static_cast<std::size_t>(truth.coefficients.rows()) + 1 != schema.class_count() ||
        static_cast<std::size_t>(truth.coefficients.cols()) != truth.spec.n_columns()) {
        throw ValidationError("generator: truth coefficient matrix has the wrong shape");
    }
    for (const auto& d : dependencies) {
        const auto a = schema.require_index(d.attribute);
        const auto g = schema.require_index(d.given);
        if (a == schema.class_index() || g == schema.class_index()) {
            throw ValidationError("generator: dependencies may not involve the class attribute");
        }
        if (g >= a) {
            throw ValidationError("generator: '" + d.given + "' must precede '" + d.attribute +
                                  "' in schema order");
        }
        if (d.table.size() != schema[g].level_count()) {
            throw ValidationError("generator: conditional table for '" + d.attribute +
                                  "' needs one row per level of '" + d.given + "'");
        }
        for (const auto& row : d.table) {
            check_probabilities(row, schema[a].level_count(),
                                "generator conditional table for '" + d.attribute + "'");
        }
    }
}

Dataset generate(const GeneratorSpec& spec)
{
    spec.validate();
    const auto& schema = spec.schema;
    std::vector<const ConditionalTable*> dependency(schema.size(), nullptr);
    std::vector<std::size_t> given(schema.size(), 0);
    for (const auto& d : spec.dependencies) {
        const auto a = schema.require_index(d.attribute);
        dependency[a] = &d;
        given[a] = schema.require_index(d.given);
    }

    XorShift64Star rng(spec.seed);
    Dataset out(schema);
    out.reserve(spec.n);
    std::vector<LevelIndex> record(schema.size(), 0);
    const auto predictors = schema.predictor_indices();
    const auto cls = schema.class_index();
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t a : predictors) {
            const auto& probs = dependency[a] ? dependency[a]->table[record[given[a]]]
                                              : spec.marginals[a];
            record[a] = static_cast<LevelIndex>(rng.categorical(probs));
        }
        record[cls] = 0;
        const auto probs = predict_proba(spec.truth, record);
        record[cls] = static_cast<LevelIndex>(rng.categorical(probs));
        out.add(record);
    }
    return out;
}

json GeneratorSpec::to_json() const
{
    json m = json::object();
    for (std::size_t a : schema.predictor_indices()) m[schema[a].name] = marginals[a];
    json deps = json::array();
    for (const auto& d : dependencies) {
        deps.push_back({{"attribute", d.attribute}, {"given", d.given}, {"table", d.table}});
    }
    const auto model = truth.to_json();
    return json{{"schema", schema.to_json()},
                {"marginals", std::move(m)},
                {"truth",
                 {{"terms", model["terms"]},
                  {"column_labels", model["column_labels"]},
                  {"coefficients", model["coefficients"]}}},
                {"dependencies", std::move(deps)},
                {"seed", seed},
                {"n", n}};
}

GeneratorSpec GeneratorSpec::from_json(const json& doc)
{
    try {
        GeneratorSpec g;
        g.schema = AttributeSchema::from_json(doc.at("schema"));
        g.marginals.assign(g.schema.size(), {});
        const auto& m = doc.at("marginals");
        for (std::size_t a : g.schema.predictor_indices()) {
            if (!m.contains(g.schema[a].name)) {
                throw ValidationError("generator: no marginal for '" + g.schema[a].name + "'");
            }
            g.marginals[a] = m.at(g.schema[a].name).get<std::vector<double>>();
        }
        const auto& t = doc.at("truth");
        json model{{"schema_hash", g.schema.hash()},
                   {"baseline_class",
                    g.schema.class_attribute().levels[g.schema.baseline_class()]},
                   {"terms", t.at("terms")},
                   {"coefficients", t.at("coefficients")},
                   {"deviance", 0.0},
                   {"converged", true}};
        std::size_t cols = ModelSpec(g.schema, [&] {
                               std::vector<ModelTerm> terms;
                               for (const auto& s : t.at("terms"))
                                   terms.push_back(ModelTerm::parse(s.get<std::string>()));
                               return terms;
                           }())
                               .n_columns();
        model["n_params"] = cols * (g.schema.class_count() - 1);
        g.truth = FittedLogitModel::from_json(model, g.schema);
        for (const auto& d : doc.value("dependencies", json::array())) {
            g.dependencies.push_back({d.at("attribute").get<std::string>(),
                                      d.at("given").get<std::string>(),
                                      d.at("table").get<std::vector<std::vector<double>>>()});
        }
        g.seed = doc.value("seed", std::uint64_t{0});
        g.n = doc.value("n", std::size_t{0});
        g.validate();
        return g;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("generator spec: ") + e.what());
    }
}

GeneratorSpec GeneratorSpec::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open generator spec '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("generator spec '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(doc);
}

GeneratorSpec default_survey_spec(std::uint64_t seed, std::size_t n)
{
    GeneratorSpec g;
    g.schema = default_survey_schema();
    g.seed = seed;
    g.n = n;

    const std::map<std::string, std::vector<double>> marginals{
        {"Type of Activity", {0.25, 0.12, 0.10, 0.20, 0.18, 0.10, 0.05}},
        {"Educational Level", {0.15, 0.55, 0.30}},
        {"Province", {0.28, 0.13, 0.12, 0.06, 0.08, 0.11, 0.06, 0.06, 0.10}},
        {"Gender", {0.48, 0.52}},
        {"Social Class", {0.05, 0.40, 0.40, 0.15}},
        {"Age Group", {0.35, 0.35, 0.30}},
        {"Financial Situation in Past", {0.25, 0.45, 0.30}},
        {"Major Problems with Education", {0.25, 0.15, 0.10, 0.10, 0.10, 0.05, 0.05, 0.20}},
    };
    g.marginals.assign(g.schema.size(), {});
    for (std::size_t a : g.schema.predictor_indices()) g.marginals[a] = marginals.at(g.schema[a].name);

    const ModelTerm finp_mprob =
        ModelTerm::interaction("Financial Situation in Past", "Major Problems with Education");
    g.truth.spec = ModelSpec(g.schema, {ModelTerm::main("Type of Activity"),
                                        ModelTerm::main("Educational Level"),
                                        ModelTerm::main("Province"),
                                        ModelTerm::main("Gender"),
                                        ModelTerm::main("Social Class"),
                                        ModelTerm::main("Financial Situation in Past"),
                                        finp_mprob});
    g.truth.baseline_class = g.schema.baseline_class();
    g.truth.n_params = g.truth.spec.n_columns() * (g.schema.class_count() - 1);
    g.truth.converged = true;

    // Rows: Technical/Vocational vs No Desire, University/Higher vs No Desire.
    const std::map<std::string, std::pair<double, double>> effects{
        {"(Intercept)", {0.20, 0.30}},
        {"Type of Activity=Permanently Employed", {-1.80, -2.10}},
        {"Type of Activity=Temporarily Employed", {0.30, -0.80}},
        {"Type of Activity=Self Employed", {-0.60, -1.20}},
        {"Type of Activity=Unemployed", {1.40, 0.20}},
        {"Type of Activity=Student", {1.00, 2.60}},
        {"Type of Activity=Housework", {-1.50, -1.80}},
        {"Educational Level=No Schooling/Grade 1-5", {-0.60, -2.80}},
        {"Educational Level=Grade 6-11", {0.40, -1.20}},
        {"Province=Western", {0.20, 0.50}},
        {"Province=Central", {0.10, 0.20}},
        {"Province=Southern", {0.30, 0.10}},
        {"Province=Northern", {-0.40, 0.30}},
        {"Province=Eastern", {-0.50, -0.20}},
        {"Province=North Western", {0.20, 0.00}},
        {"Province=North Central", {0.00, -0.30}},
        {"Province=Uva", {0.40, -0.40}},
        {"Gender=Male", {0.35, -0.30}},
        {"Social Class=Upper Class", {0.10, 0.50}},
        {"Social Class=Middle Class", {0.10, 0.30}},
        {"Social Class=Working Class", {0.20, -0.10}},
        {"Financial Situation in Past=Better", {0.10, 0.10}},
        {"Financial Situation in Past=Same", {0.05, 0.00}},
        {"Financial Situation in Past=Better\xC3\x97Major Problems with Education=Financial Difficulties",
         {0.60, 0.80}},
        {"Financial Situation in Past=Better\xC3\x97Major Problems with Education=Lack of Facilities",
         {-0.50, 0.30}},
        {"Financial Situation in Past=Same\xC3\x97Major Problems with Education=Financial Difficulties",
         {-0.40, -0.60}},
        {"Financial Situation in Past=Same\xC3\x97Major Problems with Education=Poor Teaching Quality",
         {0.50, -0.40}},
    };
    const auto labels = g.truth.spec.column_labels();
    g.truth.coefficients = Eigen::MatrixXd::Zero(2, static_cast<Eigen::Index>(labels.size()));
    std::size_t used = 0;
    for (std::size_t c = 0; c < labels.size(); ++c) {
        auto it = effects.find(labels[c]);
        if (it == effects.end()) continue;
        g.truth.coefficients(0, c) = it->second.first;
        g.truth.coefficients(1, c) = it->second.second;
        ++used;
    }
    if (used != effects.size()) throw std::logic_error("default generator: unmatched coefficient label");
    return g;
}

} // namespace ydss
