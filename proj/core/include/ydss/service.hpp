#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ydss/logit_model.hpp"
#include "ydss/rule_tree.hpp"

namespace ydss {

/// The three files a finished analysis hands to the decision-support service.
struct Artifacts {
    AttributeSchema schema;
    FittedLogitModel model;
    RuleTree tree;

    /// Reads schema.json, model.json and tree.json from `dir`.
    static Artifacts load(const std::string& dir);
    void save(const std::string& dir) const;
};

struct FieldError {
    std::string field;
    std::string message;
};

struct ServiceResponse {
    int status = 200;
    nlohmann::json body;
};

/// Transport-independent request handling for GET /schema, POST /predict and
/// POST /whatif. Artifacts are fixed at construction; every handler is const
/// and safe to call concurrently.
class PredictionService {
public:
    /// A service without artifacts answers 503 everywhere.
    PredictionService() = default;
    explicit PredictionService(Artifacts artifacts);

    bool loaded() const { return state_.has_value(); }

    ServiceResponse schema() const;
    ServiceResponse predict(const nlohmann::json& body) const;
    ServiceResponse whatif(const nlohmann::json& body) const;

    /// Routes a raw request; malformed JSON bodies yield 400.
    ServiceResponse handle(std::string_view method, std::string_view path,
                           std::string_view body) const;

    /// PredictionResponse for an already validated profile.
    nlohmann::json prediction(const std::vector<LevelIndex>& record,
                              const nlohmann::json& input) const;

    /// Profile object -> record (class slot 0), or per-field errors.
    std::vector<LevelIndex> parse_profile(const nlohmann::json& profile,
                                          std::vector<FieldError>& errors) const;

private:
    struct State {
        Artifacts artifacts;
        std::map<std::string, std::size_t> rule_numbers; // rendered conditions -> number
        std::string schema_hash;
    };
    std::optional<State> state_;
};

nlohmann::json errors_json(const std::vector<FieldError>& errors);

} // namespace ydss
