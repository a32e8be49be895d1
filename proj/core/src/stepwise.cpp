#include "ydss/stepwise.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ydss/csv.hpp"
#include "ydss/error.hpp"
#include "ydss/special_functions.hpp"

namespace ydss {

using nlohmann::json;

namespace {

struct Evaluated {
    CandidateEvaluation eval;
    std::optional<FittedLogitModel> model;
};

CandidateEvaluation score(const ModelTerm& term, const FittedLogitModel& base,
                          const FittedLogitModel& refit)
{
    CandidateEvaluation e;
    e.term = term;
    e.deviance = refit.deviance;
    e.converged = refit.converged;
    e.delta_df = static_cast<int>(refit.n_params) - static_cast<int>(base.n_params);
    double delta = base.deviance - refit.deviance;
    if (delta < 0.0) {
        e.clamped = true;
        delta = 0.0;
    }
    e.delta_deviance = delta;
    if (e.delta_df < 1) {
        e.fit_failed = true;
        e.error = "candidate adds no parameters";
        e.log_p_value = 0.0;
        e.p_value = 1.0;
        return e;
    }
    e.log_p_value = chi_square_log_sf(delta, e.delta_df);
    e.p_value = chi_square_sf(delta, e.delta_df);
    return e;
}

std::vector<Evaluated> evaluate_with_models(const Dataset& data, const FittedLogitModel& base,
                                            std::span<const ModelTerm> candidates,
                                            const SelectionOptions& options)
{
    std::vector<Evaluated> out(candidates.size());
    FitOptions fit_opts = options.fit;
    fit_opts.warm_start = &base;

    auto work = [&](std::size_t i) {
        const auto& term = candidates[i];
        try {
            if (base.spec.contains(term)) {
                throw ValidationError("term '" + term.label() + "' is already in the model");
            }
            auto model = fit(data, base.spec.with(term), fit_opts);
            out[i].eval = score(term, base, model);
            out[i].model = std::move(model);
        } catch (const std::exception& ex) {
            auto& e = out[i].eval;
            e.term = term;
            e.fit_failed = true;
            e.error = ex.what();
            e.deviance = base.deviance;
            e.p_value = 1.0;
            e.log_p_value = 0.0;
            e.converged = false;
        }
    };

    unsigned jobs = options.jobs ? options.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, candidates.size()));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < candidates.size(); ++i) work(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < jobs; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < candidates.size(); i = next++) work(i);
            });
        }
    }
    return out;
}

bool accepts(double log_p, double alpha)
{
    if (alpha >= 1.0) return true;
    if (alpha <= 0.0) return false;
    return log_p < std::log(alpha);
}

std::string phase_name(SelectionPhase p)
{
    return p == SelectionPhase::main_effects ? "main_effects" : "interactions";
}

// One phase of forward selection. Returns the final fitted model.
FittedLogitModel run_phase(const Dataset& data, FittedLogitModel current,
                           std::vector<ModelTerm> pool, SelectionPhase phase,
                           const SelectionOptions& options, SelectionTrace& trace)
{
    const auto& schema = data.schema();
    std::sort(pool.begin(), pool.end(),
              [&](const ModelTerm& a, const ModelTerm& b) { return canonical_less(schema, a, b); });
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    while (true) {
        std::vector<ModelTerm> candidates;
        for (const auto& t : pool) {
            if (!current.spec.contains(t)) candidates.push_back(t);
        }
        if (candidates.empty()) break;

        auto evaluated = evaluate_with_models(data, current, candidates, options);

        SelectionStep step;
        step.phase = phase;
        step.base_terms = current.spec.terms();
        step.base_deviance = current.deviance;

        std::optional<std::size_t> best;
        for (std::size_t i = 0; i < evaluated.size(); ++i) {
            const auto& e = evaluated[i].eval;
            if (e.fit_failed) continue;
            if (!best || e.log_p_value < evaluated[*best].eval.log_p_value - kTieTolerance) {
                best = i;
            }
        }
        if (best) {
            const double lp = evaluated[*best].eval.log_p_value;
            for (std::size_t i = 0; i < evaluated.size(); ++i) {
                const auto& e = evaluated[i].eval;
                if (i != *best && !e.fit_failed && std::fabs(e.log_p_value - lp) <= kTieTolerance) {
                    step.tie = true;
                }
            }
        }
        for (auto& ev : evaluated) step.evaluations.push_back(ev.eval);

        const bool accept = best && accepts(evaluated[*best].eval.log_p_value, options.alpha);
        if (accept) step.winner = evaluated[*best].eval.term;
        trace.steps.push_back(std::move(step));
        if (!accept) break;
        current = std::move(*evaluated[*best].model);
    }
    return current;
}

} // namespace

std::vector<CandidateEvaluation> evaluate_candidates(const Dataset& data,
                                                     const FittedLogitModel& base,
                                                     std::span<const ModelTerm> candidates,
                                                     const SelectionOptions& options)
{
    auto evaluated = evaluate_with_models(data, base, candidates, options);
    std::vector<CandidateEvaluation> out;
    out.reserve(evaluated.size());
    for (auto& e : evaluated) out.push_back(std::move(e.eval));
    return out;
}

SelectionTrace forward_select(const Dataset& data, const std::vector<std::string>& main_pool,
                              const std::vector<ModelTerm>& interaction_pool,
                              const SelectionOptions& options)
{
    if (options.alpha < 0.0 || options.alpha > 1.0) {
        throw ValidationError("selection alpha must lie in [0, 1]");
    }
    const auto& schema = data.schema();
    std::vector<ModelTerm> mains;
    for (const auto& name : main_pool) {
        const auto idx = schema.require_index(name);
        if (idx == schema.class_index()) {
            throw ValidationError("the class attribute cannot be a candidate");
        }
        mains.push_back(ModelTerm::main(name));
    }
    for (const auto& t : interaction_pool) {
        if (t.kind != ModelTerm::Kind::interaction) {
            throw ValidationError("interaction pool contains non-interaction term '" + t.label() + "'");
        }
    }

    SelectionTrace trace;
    trace.alpha = options.alpha;
    auto model = fit(data, ModelSpec::intercept_only(schema), options.fit);
    model = run_phase(data, std::move(model), mains, SelectionPhase::main_effects, options, trace);
    model = run_phase(data, std::move(model), interaction_pool, SelectionPhase::interactions,
                      options, trace);
    trace.final_spec = model.spec;
    trace.final_deviance = model.deviance;
    return trace;
}

std::vector<ModelTerm> SelectionTrace::accepted_terms() const
{
    std::vector<ModelTerm> out;
    for (const auto& s : steps) {
        if (s.winner) out.push_back(*s.winner);
    }
    return out;
}

std::vector<ModelTerm> pairwise_interactions(const AttributeSchema& schema,
                                             const std::vector<std::string>& attributes)
{
    std::vector<std::size_t> idx;
    for (const auto& a : attributes) idx.push_back(schema.require_index(a));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    std::vector<ModelTerm> out;
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = i + 1; j < idx.size(); ++j)
            out.push_back(ModelTerm::interaction(schema[idx[i]].name, schema[idx[j]].name));
    std::sort(out.begin(), out.end(),
              [&](const ModelTerm& a, const ModelTerm& b) { return canonical_less(schema, a, b); });
    return out;
}

std::vector<std::string> tree_attribute_order(const SelectionTrace& trace)
{
    std::vector<std::string> order;
    auto add = [&](const std::string& a) {
        if (std::find(order.begin(), order.end(), a) == order.end()) order.push_back(a);
    };
    const auto accepted = trace.accepted_terms();
    for (const auto& t : accepted) {
        if (t.kind == ModelTerm::Kind::main) add(t.first);
    }
    for (const auto& t : accepted) {
        if (t.kind == ModelTerm::Kind::interaction) {
            add(t.first);
            add(t.second);
        }
    }
    return order;
}

GoodnessOfFit deviance_test(double deviance, long residual_df, double alpha)
{
    if (residual_df <= 0) {
        throw ValidationError("goodness of fit undefined: residual df is " +
                              std::to_string(residual_df) + " (saturated model)");
    }
    GoodnessOfFit g;
    g.deviance = deviance;
    g.residual_df = residual_df;
    g.p_value = chi_square_sf(std::max(deviance, 0.0), static_cast<int>(residual_df));
    g.lack_of_fit = g.p_value < alpha;
    return g;
}

GoodnessOfFit goodness_of_fit(const FittedLogitModel& model, const Dataset& data, double alpha)
{
    const LogitObjective objective(data, model.spec, model.baseline_class);
    const auto& patterns = objective.patterns();
    const std::size_t classes = patterns.classes();

    double saturated = 0.0;
    for (std::size_t p = 0; p < patterns.size(); ++p) {
        const auto counts = patterns.counts(p);
        for (double n : counts) {
            if (n > 0) saturated += n * std::log(n / patterns.total(p));
        }
    }
    Eigen::VectorXd theta(model.coefficients.size());
    const auto P = model.coefficients.cols();
    for (Eigen::Index f = 0; f < model.coefficients.rows(); ++f)
        for (Eigen::Index c = 0; c < P; ++c) theta[f * P + c] = model.coefficients(f, c);
    const double loglik = objective.log_likelihood(theta);

    const long residual_df = static_cast<long>((classes - 1) * patterns.size()) -
                             static_cast<long>(model.n_params);
    return deviance_test(std::max(0.0, 2.0 * (saturated - loglik)), residual_df, alpha);
}

json SelectionTrace::to_json() const
{
    json steps_json = json::array();
    for (const auto& s : steps) {
        json evals = json::array();
        for (const auto& e : s.evaluations) {
            json j{{"term", e.term.label()},
                   {"deviance", e.deviance},
                   {"delta_deviance", e.delta_deviance},
                   {"delta_df", e.delta_df},
                   {"p_value", e.p_value},
                   {"log_p_value", e.log_p_value},
                   {"converged", e.converged},
                   {"clamped", e.clamped},
                   {"fit_failed", e.fit_failed}};
            if (!e.error.empty()) j["error"] = e.error;
            evals.push_back(std::move(j));
        }
        json base = json::array();
        for (const auto& t : s.base_terms) base.push_back(t.label());
        steps_json.push_back({{"phase", phase_name(s.phase)},
                              {"base_terms", std::move(base)},
                              {"base_deviance", s.base_deviance},
                              {"evaluations", std::move(evals)},
                              {"winner", s.winner ? json(s.winner->label()) : json(nullptr)},
                              {"tie", s.tie}});
    }
    json final_terms = json::array();
    for (const auto& t : final_spec.terms()) final_terms.push_back(t.label());
    return json{{"alpha", alpha},
                {"steps", std::move(steps_json)},
                {"final_terms", std::move(final_terms)},
                {"final_deviance", final_deviance}};
}

SelectionTrace SelectionTrace::from_json(const json& doc, const AttributeSchema& schema)
{
    try {
        SelectionTrace t;
        t.alpha = doc.at("alpha").get<double>();
        for (const auto& s : doc.at("steps")) {
            SelectionStep step;
            step.phase = s.at("phase").get<std::string>() == "interactions"
                             ? SelectionPhase::interactions
                             : SelectionPhase::main_effects;
            for (const auto& b : s.at("base_terms")) {
                step.base_terms.push_back(ModelTerm::parse(b.get<std::string>()));
            }
            step.base_deviance = s.at("base_deviance").get<double>();
            for (const auto& e : s.at("evaluations")) {
                CandidateEvaluation ce;
                ce.term = ModelTerm::parse(e.at("term").get<std::string>());
                ce.deviance = e.at("deviance").get<double>();
                ce.delta_deviance = e.at("delta_deviance").get<double>();
                ce.delta_df = e.at("delta_df").get<int>();
                ce.p_value = e.at("p_value").get<double>();
                ce.log_p_value = e.at("log_p_value").get<double>();
                ce.converged = e.value("converged", true);
                ce.clamped = e.value("clamped", false);
                ce.fit_failed = e.value("fit_failed", false);
                ce.error = e.value("error", std::string());
                step.evaluations.push_back(std::move(ce));
            }
            if (!s.at("winner").is_null()) {
                step.winner = ModelTerm::parse(s.at("winner").get<std::string>());
            }
            step.tie = s.value("tie", false);
            t.steps.push_back(std::move(step));
        }
        std::vector<ModelTerm> terms;
        for (const auto& ft : doc.at("final_terms")) {
            terms.push_back(ModelTerm::parse(ft.get<std::string>()));
        }
        t.final_spec = ModelSpec(schema, std::move(terms));
        t.final_deviance = doc.at("final_deviance").get<double>();
        return t;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("selection trace: ") + e.what());
    }
}

void write_trace_csv(std::ostream& out, const SelectionTrace& trace)
{
    out << "step,phase,term,raw_deviance,difference_in_deviance,difference_in_df,p_value,selected\n";
    char buf[128];
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        const auto& s = trace.steps[i];
        const std::string base_label = i == 0 ? "Null Model" : "Model " + std::to_string(i);
        std::snprintf(buf, sizeof buf, "%.6f", s.base_deviance);
        out << (i + 1) << ',' << phase_name(s.phase) << ',' << csv_escape(base_label) << ',' << buf
            << ",0,-,-,\n";
        for (const auto& e : s.evaluations) {
            std::snprintf(buf, sizeof buf, "%.6f,%.6g,%d,%.6g", e.deviance, e.delta_deviance,
                          e.delta_df, e.p_value);
            const bool selected = s.winner && *s.winner == e.term;
            out << (i + 1) << ',' << phase_name(s.phase) << ',' << csv_escape(e.term.label()) << ','
                << buf << ',' << (selected ? "yes" : "") << '\n';
        }
    }
}

} // namespace ydss
