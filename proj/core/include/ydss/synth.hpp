#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ydss/logit_model.hpp"

namespace ydss {

/// Optional dependency: `attribute` is drawn from table[level of `given`]
/// instead of its marginal. `given` must precede `attribute` in schema order.
struct ConditionalTable {
    std::string attribute;
    std::string given;
    std::vector<std::vector<double>> table;
};

/// Ground truth for a synthetic survey: independent predictor marginals (plus
/// any conditional tables) and a baseline-category logit model for the class.
struct GeneratorSpec {
    AttributeSchema schema;
    /// One probability vector per schema attribute; the class entry is unused
    /// and may be empty.
    std::vector<std::vector<double>> marginals;
    FittedLogitModel truth;
    std::vector<ConditionalTable> dependencies;
    std::uint64_t seed = 0;
    std::size_t n = 0;

    /// Throws ValidationError unless marginals and tables are probability
    /// vectors (sum within 1e-9) of the right length and the truth model
    /// matches the schema.
    void validate() const;

    nlohmann::json to_json() const;
    static GeneratorSpec from_json(const nlohmann::json& doc);
    static GeneratorSpec load(const std::string& path);
};

/// Draws spec.n records with XorShift64Star(spec.seed). Per record, predictors
/// are drawn in schema order by inverse CDF, then the class is drawn from the
/// truth model's probabilities. Bit-identical for a fixed spec.
Dataset generate(const GeneratorSpec& spec);

/// Truth over the default survey schema. Type of Activity and Educational
/// Level carry the largest effects, Province, Gender and Social Class smaller
/// ones, Financial Situation in Past a weak main effect plus an interaction
/// with Major Problems with Education (which has no main effect). Age Group
/// has all-zero coefficients.
GeneratorSpec default_survey_spec(std::uint64_t seed = 7, std::size_t n = 10000);

/// Name of the attribute with all-zero truth coefficients in default_survey_spec.
inline constexpr std::string_view kDefaultNoiseAttribute = "Age Group";

} // namespace ydss
