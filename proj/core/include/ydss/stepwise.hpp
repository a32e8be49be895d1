#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ydss/logit_model.hpp"

namespace ydss {

inline constexpr double kDefaultSelectAlpha = 0.05;
/// Candidates whose log p-values differ by at most this much are tied.
inline constexpr double kTieTolerance = 1e-12;

/// Deviance-difference test of one candidate term against a base model.
struct CandidateEvaluation {
    ModelTerm term;
    double deviance = 0.0;
    double delta_deviance = 0.0;
    int delta_df = 0;
    double p_value = 1.0;
    /// log p, finite where p itself underflows; used for ranking.
    double log_p_value = 0.0;
    bool converged = true;
    /// Negative deviance difference (non-convergence) clamped to zero.
    bool clamped = false;
    bool fit_failed = false;
    std::string error;
};

struct SelectionOptions {
    double alpha = kDefaultSelectAlpha;
    /// Worker threads for candidate fits; 0 means hardware concurrency.
    unsigned jobs = 0;
    FitOptions fit;
};

/// Refits base + term for every candidate, in input order. Candidate fits run
/// concurrently on `jobs` threads; a failing fit is recorded (p = 1,
/// fit_failed) rather than thrown.
std::vector<CandidateEvaluation> evaluate_candidates(const Dataset& data,
                                                     const FittedLogitModel& base,
                                                     std::span<const ModelTerm> candidates,
                                                     const SelectionOptions& options = {});

enum class SelectionPhase { main_effects, interactions };

struct SelectionStep {
    SelectionPhase phase = SelectionPhase::main_effects;
    std::vector<ModelTerm> base_terms;
    double base_deviance = 0.0;
    std::vector<CandidateEvaluation> evaluations;
    std::optional<ModelTerm> winner;
    /// Another candidate's p-value tied with the winner's.
    bool tie = false;
};

struct SelectionTrace {
    std::vector<SelectionStep> steps;
    double alpha = kDefaultSelectAlpha;
    ModelSpec final_spec;
    double final_deviance = 0.0;

    /// Accepted terms in acceptance order.
    std::vector<ModelTerm> accepted_terms() const;

    nlohmann::json to_json() const;
    static SelectionTrace from_json(const nlohmann::json& doc, const AttributeSchema& schema);
};

/// Forward selection: main effects from `main_pool` first, then interactions
/// from `interaction_pool`, each step adding the minimum-p candidate while
/// p < alpha (alpha >= 1 accepts every step until the pool is exhausted).
/// Pools are put in canonical order; ties go to the canonically earlier term.
SelectionTrace forward_select(const Dataset& data, const std::vector<std::string>& main_pool,
                              const std::vector<ModelTerm>& interaction_pool,
                              const SelectionOptions& options = {});

/// Every two-way interaction among `attributes`, in canonical order.
std::vector<ModelTerm> pairwise_interactions(const AttributeSchema& schema,
                                             const std::vector<std::string>& attributes);

/// Attribute order for the rule tree: selected main effects in acceptance
/// order, then parents of accepted interactions not already listed.
std::vector<std::string> tree_attribute_order(const SelectionTrace& trace);

struct GoodnessOfFit {
    double deviance = 0.0;
    long residual_df = 0;
    double p_value = 1.0;
    bool lack_of_fit = false;
};

/// Deviance test against the saturated model over observed covariate
/// patterns: residual_df = (K-1) * patterns - n_params.
/// Throws ValidationError when residual_df <= 0.
GoodnessOfFit goodness_of_fit(const FittedLogitModel& model, const Dataset& data,
                              double alpha = 0.05);

/// The same decision from a known deviance and residual df.
GoodnessOfFit deviance_test(double deviance, long residual_df, double alpha = 0.05);

/// One block per step: base model row, then one row per candidate.
void write_trace_csv(std::ostream& out, const SelectionTrace& trace);

} // namespace ydss
