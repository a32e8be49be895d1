#include "ydss/logit_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "ydss/error.hpp"

namespace ydss {

using nlohmann::json;

PatternTable::PatternTable(const Dataset& data, const ModelSpec& spec)
    : classes_(data.schema().class_count())
{
    const auto attrs = spec.involved_attributes();
    std::map<std::vector<LevelIndex>, std::size_t> index;
    std::vector<std::size_t> representative;
    std::vector<std::size_t> pattern_of(data.size());
    std::vector<LevelIndex> key(attrs.size());
    for (std::size_t n = 0; n < data.size(); ++n) {
        for (std::size_t i = 0; i < attrs.size(); ++i) key[i] = data.value(n, attrs[i]);
        auto [it, inserted] = index.try_emplace(key, index.size());
        if (inserted) representative.push_back(n);
        pattern_of[n] = it->second;
    }

    // Renumber in key order.
    std::vector<std::size_t> rank(index.size());
    std::vector<std::size_t> first_record(index.size());
    std::size_t r = 0;
    for (const auto& [k, id] : index) {
        rank[id] = r;
        first_record[r] = representative[id];
        ++r;
    }

    counts_.assign(index.size() * classes_, 0.0);
    totals_.assign(index.size(), 0.0);
    for (std::size_t n = 0; n < data.size(); ++n) {
        const std::size_t p = rank[pattern_of[n]];
        counts_[p * classes_ + data.class_of(n)] += 1.0;
        totals_[p] += 1.0;
    }
    records_ = static_cast<double>(data.size());

    std::vector<std::uint32_t> active;
    for (std::size_t p = 0; p < index.size(); ++p) {
        spec.active_columns(data.record(first_record[p]), active);
        columns_.insert(columns_.end(), active.begin(), active.end());
        offsets_.push_back(columns_.size());
    }
}

LogitObjective::LogitObjective(const Dataset& data, const ModelSpec& spec, LevelIndex baseline)
    : patterns_(data, spec), n_columns_(spec.n_columns()),
      classes_(data.schema().class_count()), baseline_(baseline)
{
    if (baseline >= classes_) throw ValidationError("baseline class out of range");
    for (std::size_t k = 0; k < classes_; ++k) {
        if (k != baseline_) outcome_of_row_.push_back(k);
    }
}

void LogitObjective::linear_predictors(const Eigen::VectorXd& theta, std::size_t p,
                                       double* eta) const
{
    const auto cols = patterns_.columns(p);
    for (std::size_t f = 0; f + 1 < classes_; ++f) {
        double s = 0.0;
        const double* row = theta.data() + f * n_columns_;
        for (auto c : cols) s += row[c];
        eta[f] = s;
    }
}

double LogitObjective::evaluate(const Eigen::VectorXd& theta, Eigen::VectorXd* gradient,
                                Eigen::MatrixXd* information) const
{
    const std::size_t m = classes_ - 1;
    const std::size_t dim = n_params();
    if (static_cast<std::size_t>(theta.size()) != dim) {
        throw std::invalid_argument("parameter vector has the wrong length");
    }
    if (gradient) gradient->setZero(dim);
    if (information) information->setZero(dim, dim);

    std::vector<double> eta(m), pi(m);
    double loglik = 0.0;
    for (std::size_t p = 0; p < patterns_.size(); ++p) {
        linear_predictors(theta, p, eta.data());
        double mx = 0.0; // baseline logit is 0
        for (double e : eta) mx = std::max(mx, e);
        double denom = std::exp(-mx);
        for (std::size_t f = 0; f < m; ++f) denom += std::exp(eta[f] - mx);
        const double lse = mx + std::log(denom);

        const auto counts = patterns_.counts(p);
        const double total = patterns_.total(p);
        loglik += counts[baseline_] * (-lse);
        for (std::size_t f = 0; f < m; ++f) {
            loglik += counts[outcome_of_row_[f]] * (eta[f] - lse);
            pi[f] = std::exp(eta[f] - lse);
        }

        const auto cols = patterns_.columns(p);
        if (gradient) {
            for (std::size_t f = 0; f < m; ++f) {
                const double r = counts[outcome_of_row_[f]] - total * pi[f];
                double* g = gradient->data() + f * n_columns_;
                for (auto c : cols) g[c] += r;
            }
        }
        if (information) {
            for (std::size_t f = 0; f < m; ++f) {
                for (std::size_t g = 0; g < m; ++g) {
                    const double w = total * ((f == g ? pi[f] : 0.0) - pi[f] * pi[g]);
                    for (auto a : cols) {
                        for (auto b : cols) {
                            (*information)(f * n_columns_ + a, g * n_columns_ + b) += w;
                        }
                    }
                }
            }
        }
    }
    return loglik;
}

double LogitObjective::log_likelihood(const Eigen::VectorXd& theta) const
{
    return evaluate(theta, nullptr, nullptr);
}

Eigen::VectorXd LogitObjective::gradient(const Eigen::VectorXd& theta) const
{
    Eigen::VectorXd g;
    evaluate(theta, &g, nullptr);
    return g;
}

Eigen::MatrixXd LogitObjective::information(const Eigen::VectorXd& theta) const
{
    Eigen::MatrixXd h;
    evaluate(theta, nullptr, &h);
    return h;
}

namespace {

Eigen::VectorXd newton_direction(const Eigen::MatrixXd& info, const Eigen::VectorXd& grad,
                                 double ridge)
{
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    bool ok = ldlt.info() == Eigen::Success;
    if (ok) {
        const auto d = ldlt.vectorD();
        const double dmax = d.cwiseAbs().maxCoeff();
        ok = d.minCoeff() > 1e-12 * std::max(dmax, 1.0);
    }
    if (!ok) {
        const double scale = std::max(1.0, info.diagonal().mean());
        Eigen::MatrixXd reg = info;
        reg.diagonal().array() += ridge * scale;
        ldlt.compute(reg);
    }
    Eigen::VectorXd step = ldlt.solve(grad);
    if (!step.allFinite()) step.setZero();
    return step;
}

} // namespace

FittedLogitModel fit(const Dataset& data, const ModelSpec& spec, const FitOptions& options)
{
    if (data.empty()) throw ValidationError("cannot fit a model to an empty dataset");
    if (!(data.schema() == spec.schema())) {
        throw ValidationError("model spec and dataset use different schemas");
    }
    const std::size_t classes = data.schema().class_count();
    const std::size_t P = spec.n_columns();
    const std::size_t dim = P * (classes - 1);
    if (dim >= data.size()) {
        throw ValidationError("overparameterized model: " + std::to_string(dim) +
                              " parameters for " + std::to_string(data.size()) + " records");
    }

    FittedLogitModel model;
    model.spec = spec;
    model.baseline_class = data.schema().baseline_class();
    model.n_params = dim;

    const LogitObjective objective(data, spec, model.baseline_class);

    Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
    if (options.warm_start) {
        const auto& ws = *options.warm_start;
        const auto labels = spec.column_labels();
        const auto ws_labels = ws.spec.column_labels();
        std::unordered_map<std::string, std::size_t> where;
        for (std::size_t c = 0; c < ws_labels.size(); ++c) where.emplace(ws_labels[c], c);
        for (std::size_t c = 0; c < P; ++c) {
            auto it = where.find(labels[c]);
            if (it == where.end()) continue;
            for (std::size_t f = 0; f + 1 < classes; ++f) {
                theta[f * P + c] = ws.coefficients(f, it->second);
            }
        }
    } else {
        // Intercepts at the marginal log-odds (the exact intercept-only MLE
        // when every class is observed).
        std::vector<double> n(classes, 0.5);
        for (std::size_t i = 0; i < data.size(); ++i) n[data.class_of(i)] += 1.0;
        for (std::size_t f = 0; f + 1 < classes; ++f) {
            theta[f * P] = std::log(n[model.outcome_of_row(f)] / n[model.baseline_class]);
        }
    }

    Eigen::VectorXd grad;
    Eigen::MatrixXd info;
    double loglik = objective.evaluate(theta, &grad, &info);
    double deviance = -2.0 * loglik;
    double last_change = std::numeric_limits<double>::infinity();
    model.deviance_history.push_back(deviance);

    int it = 0;
    for (; it < options.max_iterations; ++it) {
        const double gnorm = grad.cwiseAbs().maxCoeff();
        if (gnorm < options.gradient_tolerance && last_change < options.deviance_tolerance) break;

        const Eigen::VectorXd step = newton_direction(info, grad, options.ridge);
        double t = 1.0;
        Eigen::VectorXd candidate;
        double cand_dev = 0.0;
        bool improved = false;
        for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
            candidate = theta + t * step;
            cand_dev = -2.0 * objective.log_likelihood(candidate);
            if (std::isfinite(cand_dev) && cand_dev <= deviance) {
                improved = true;
                break;
            }
        }
        if (!improved) break;

        last_change = deviance - cand_dev;
        theta = std::move(candidate);
        loglik = objective.evaluate(theta, &grad, &info);
        deviance = -2.0 * loglik;
        model.deviance_history.push_back(deviance);
    }

    model.iterations = it;
    model.gradient_norm = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
    model.converged =
        model.gradient_norm < options.gradient_tolerance && last_change < options.deviance_tolerance;
    model.deviance = std::max(deviance, 0.0);
    model.coefficients = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                        Eigen::RowMajor>>(theta.data(),
                                                                          classes - 1, P);
    model.separation_warning =
        model.coefficients.size() > 0 &&
        model.coefficients.cwiseAbs().maxCoeff() > kSeparationCoefficient;
    return model;
}

std::size_t argmax(std::span<const double> values)
{
    std::size_t best = 0;
    for (std::size_t k = 1; k < values.size(); ++k) {
        if (values[k] > values[best]) best = k;
    }
    return best;
}

std::vector<double> predict_proba(const FittedLogitModel& model, RecordView record)
{
    const auto& schema = model.spec.schema();
    check_record(schema, record);
    std::vector<std::uint32_t> active;
    model.spec.active_columns(record, active);

    const std::size_t classes = schema.class_count();
    std::vector<double> eta(classes, 0.0);
    for (std::size_t f = 0; f + 1 < classes; ++f) {
        double s = 0.0;
        for (auto c : active) s += model.coefficients(f, c);
        eta[model.outcome_of_row(f)] = s;
    }
    const double mx = *std::max_element(eta.begin(), eta.end());
    double denom = 0.0;
    for (double& e : eta) {
        e = std::exp(e - mx);
        denom += e;
    }
    for (double& e : eta) e /= denom;
    return eta;
}

LevelIndex classify(const FittedLogitModel& model, RecordView record)
{
    return static_cast<LevelIndex>(argmax(predict_proba(model, record)));
}

json FittedLogitModel::to_json() const
{
    const auto& schema = spec.schema();
    json terms = json::array();
    for (const auto& t : spec.terms()) terms.push_back(t.label());
    json outcomes = json::array();
    json coefs = json::array();
    for (Eigen::Index f = 0; f < coefficients.rows(); ++f) {
        outcomes.push_back(schema.class_attribute().levels[outcome_of_row(f)]);
        json row = json::array();
        for (Eigen::Index c = 0; c < coefficients.cols(); ++c) row.push_back(coefficients(f, c));
        coefs.push_back(std::move(row));
    }
    return json{{"schema_hash", schema.hash()},
                {"baseline_class", schema.class_attribute().levels[baseline_class]},
                {"terms", std::move(terms)},
                {"column_labels", spec.column_labels()},
                {"outcomes", std::move(outcomes)},
                {"coefficients", std::move(coefs)},
                {"deviance", deviance},
                {"n_params", n_params},
                {"converged", converged},
                {"iterations", iterations},
                {"separation_warning", separation_warning}};
}

FittedLogitModel FittedLogitModel::from_json(const json& doc, const AttributeSchema& schema)
{
    try {
        if (doc.at("schema_hash").get<std::string>() != schema.hash()) {
            throw ValidationError("model artifact was fitted against a different schema");
        }
        std::vector<ModelTerm> terms;
        for (const auto& t : doc.at("terms")) terms.push_back(ModelTerm::parse(t.get<std::string>()));
        FittedLogitModel m;
        m.spec = ModelSpec(schema, std::move(terms));
        const auto baseline = schema.class_attribute().level_index(
            doc.at("baseline_class").get<std::string>());
        if (!baseline) throw ValidationError("model artifact: unknown baseline class");
        m.baseline_class = *baseline;

        const auto& rows = doc.at("coefficients");
        const std::size_t P = m.spec.n_columns();
        if (rows.size() + 1 != schema.class_count()) {
            throw ValidationError("model artifact: expected one coefficient row per non-baseline class");
        }
        m.coefficients.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(P));
        for (std::size_t f = 0; f < rows.size(); ++f) {
            if (rows[f].size() != P) {
                throw ValidationError("model artifact: coefficient row has the wrong length");
            }
            for (std::size_t c = 0; c < P; ++c) m.coefficients(f, c) = rows[f][c].get<double>();
        }
        m.deviance = doc.at("deviance").get<double>();
        m.n_params = doc.at("n_params").get<std::size_t>();
        m.converged = doc.at("converged").get<bool>();
        m.iterations = doc.value("iterations", 0);
        m.separation_warning = doc.value("separation_warning", false);
        if (m.n_params != P * rows.size()) {
            throw ValidationError("model artifact: n_params does not match the terms");
        }
        return m;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("model artifact: ") + e.what());
    }
}

FittedLogitModel FittedLogitModel::load(const std::string& path, const AttributeSchema& schema)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("model file '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(doc, schema);
}

void FittedLogitModel::save(const std::string& path) const
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file '" + path + "'");
    out << to_json().dump(2) << '\n';
}

} // namespace ydss
