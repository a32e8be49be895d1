#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "ydss/dataset.hpp"
#include "ydss/model_spec.hpp"

namespace ydss {

/// Records grouped by covariate pattern (the levels of every attribute the
/// spec touches), with per-class counts. Patterns are kept in sorted key
/// order, so results do not depend on record order.
class PatternTable {
public:
    PatternTable(const Dataset& data, const ModelSpec& spec);

    std::size_t size() const { return offsets_.size() - 1; }
    std::size_t classes() const { return classes_; }
    std::span<const std::uint32_t> columns(std::size_t p) const
    {
        return {columns_.data() + offsets_[p], offsets_[p + 1] - offsets_[p]};
    }
    std::span<const double> counts(std::size_t p) const
    {
        return {counts_.data() + p * classes_, classes_};
    }
    double total(std::size_t p) const { return totals_[p]; }
    double records() const { return records_; }

private:
    std::size_t classes_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::uint32_t> columns_;
    std::vector<double> counts_;
    std::vector<double> totals_;
    double records_ = 0.0;
};

/// Multinomial log-likelihood of a baseline-category logit model as a
/// function of the stacked parameter vector theta, where
/// theta[f * P + p] is the coefficient of design column p in the logit of
/// the f-th non-baseline outcome (outcomes in class order, baseline skipped).
class LogitObjective {
public:
    LogitObjective(const Dataset& data, const ModelSpec& spec, LevelIndex baseline);

    std::size_t n_columns() const { return n_columns_; }
    std::size_t n_params() const { return n_columns_ * (classes_ - 1); }
    const PatternTable& patterns() const { return patterns_; }

    double log_likelihood(const Eigen::VectorXd& theta) const;
    /// d loglik / d theta.
    Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const;
    /// Fisher information (negative Hessian of the log-likelihood).
    Eigen::MatrixXd information(const Eigen::VectorXd& theta) const;

    /// One pass computing all three; gradient/information may be null.
    double evaluate(const Eigen::VectorXd& theta, Eigen::VectorXd* gradient,
                    Eigen::MatrixXd* information) const;

private:
    void linear_predictors(const Eigen::VectorXd& theta, std::size_t p, double* eta) const;

    PatternTable patterns_;
    std::size_t n_columns_;
    std::size_t classes_;
    LevelIndex baseline_;
    std::vector<std::size_t> outcome_of_row_; // non-baseline row f -> class index
};

struct FittedLogitModel {
    ModelSpec spec;
    LevelIndex baseline_class = 0;
    /// (K-1) x P; row f belongs to the f-th non-baseline outcome in class
    /// order. Column 0 is the intercept alpha_f, the rest beta_f.
    Eigen::MatrixXd coefficients;
    double deviance = 0.0;
    std::size_t n_params = 0;
    bool converged = false;
    int iterations = 0;
    double gradient_norm = 0.0;
    /// Set when some |coefficient| exceeds kSeparationCoefficient, the
    /// signature of (quasi-)complete separation; estimates are kept as capped.
    bool separation_warning = false;
    /// Deviance after every accepted Newton step, starting with the initial point.
    std::vector<double> deviance_history;

    /// Class index of the outcome that row f of `coefficients` models.
    std::size_t outcome_of_row(std::size_t f) const { return f < baseline_class ? f : f + 1; }

    nlohmann::json to_json() const;
    static FittedLogitModel from_json(const nlohmann::json& doc, const AttributeSchema& schema);
    static FittedLogitModel load(const std::string& path, const AttributeSchema& schema);
    void save(const std::string& path) const;
};

inline constexpr double kSeparationCoefficient = 15.0;

struct FitOptions {
    int max_iterations = 100;
    double deviance_tolerance = 1e-8;
    double gradient_tolerance = 1e-6;
    /// Ridge added to the information diagonal (scaled by its mean diagonal)
    /// when the factorization is near-singular.
    double ridge = 1e-10;
    /// Optional starting point; coefficients are matched by column label and
    /// missing columns start at zero.
    const FittedLogitModel* warm_start = nullptr;
};

/// Maximum-likelihood fit by Newton-Raphson with step-halving.
/// Throws ValidationError on an empty dataset or when (K-1) * P is not
/// smaller than the number of records.
FittedLogitModel fit(const Dataset& data, const ModelSpec& spec, const FitOptions& options = {});

/// Class probabilities in class order; sums to 1.
std::vector<double> predict_proba(const FittedLogitModel& model, RecordView record);

/// argmax of predict_proba; ties go to the lowest class index.
LevelIndex classify(const FittedLogitModel& model, RecordView record);

/// Index of the largest value; ties go to the lowest index.
std::size_t argmax(std::span<const double> values);

} // namespace ydss
