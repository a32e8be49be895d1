#include "ydss/service.hpp"

#include <filesystem>

#include "ydss/error.hpp"

namespace ydss {

using nlohmann::json;

namespace {

std::string conditions_key(const std::vector<Condition>& conditions)
{
    std::string key;
    for (const auto& c : conditions) {
        key += c.attribute;
        key += '\x1f';
        key += c.level;
        key += '\x1e';
    }
    return key;
}

ServiceResponse unavailable()
{
    return {503, errors_json({{"service", "artifacts not loaded"}})};
}

} // namespace

json errors_json(const std::vector<FieldError>& errors)
{
    json list = json::array();
    for (const auto& e : errors) list.push_back({{"field", e.field}, {"message", e.message}});
    return json{{"errors", std::move(list)}};
}

Artifacts Artifacts::load(const std::string& dir)
{
    const std::filesystem::path root(dir);
    auto schema = AttributeSchema::load((root / "schema.json").string());
    auto model = FittedLogitModel::load((root / "model.json").string(), schema);
    auto tree = RuleTree::load((root / "tree.json").string(), schema);
    return {std::move(schema), std::move(model), std::move(tree)};
}

void Artifacts::save(const std::string& dir) const
{
    const std::filesystem::path root(dir);
    std::filesystem::create_directories(root);
    schema.save((root / "schema.json").string());
    model.save((root / "model.json").string());
    tree.save((root / "tree.json").string());
}

PredictionService::PredictionService(Artifacts artifacts)
{
    State s{std::move(artifacts), {}, {}};
    s.schema_hash = s.artifacts.schema.hash();
    const auto rules = extract_rules(s.artifacts.tree);
    for (std::size_t i = 0; i < rules.size(); ++i) {
        s.rule_numbers.emplace(conditions_key(rules[i].conditions), i + 1);
    }
    state_ = std::move(s);
}

ServiceResponse PredictionService::schema() const
{
    if (!state_) return unavailable();
    json body = state_->artifacts.schema.to_json();
    body["schema_hash"] = state_->schema_hash;
    return {200, std::move(body)};
}

std::vector<LevelIndex> PredictionService::parse_profile(const json& profile,
                                                         std::vector<FieldError>& errors) const
{
    const auto& schema = state_->artifacts.schema;
    std::vector<LevelIndex> record(schema.size(), 0);
    if (!profile.is_object()) {
        errors.push_back({"profile", "expected an object mapping attribute names to levels"});
        return record;
    }
    for (const auto& [name, value] : profile.items()) {
        const auto idx = schema.index_of(name);
        if (!idx) {
            errors.push_back({name, "unknown attribute"});
        } else if (*idx == schema.class_index()) {
            errors.push_back({name, "the class attribute cannot be an input"});
        }
    }
    for (std::size_t a : schema.predictor_indices()) {
        const auto& attr = schema[a];
        if (!profile.contains(attr.name)) {
            errors.push_back({attr.name, "missing value"});
            continue;
        }
        const auto& v = profile.at(attr.name);
        if (!v.is_string()) {
            errors.push_back({attr.name, "level must be a string"});
            continue;
        }
        const auto level = attr.level_index(v.get<std::string>());
        if (!level) {
            errors.push_back({attr.name, "unknown level '" + v.get<std::string>() + "'"});
            continue;
        }
        record[a] = *level;
    }
    return record;
}

json PredictionService::prediction(const std::vector<LevelIndex>& record, const json& input) const
{
    const auto& art = state_->artifacts;
    const auto& classes = art.schema.class_attribute().levels;

    const auto match = classify_rule(art.tree, record);
    std::optional<std::size_t> number;
    if (!match.backoff) {
        auto it = state_->rule_numbers.find(conditions_key(match.rule.conditions));
        if (it != state_->rule_numbers.end()) number = it->second;
    }
    std::string text;
    if (number) {
        text = render_rule(match.rule, *number);
        text.pop_back(); // trailing newline
    } else {
        text = render_rule(match.rule, 0);
        text = "Backoff" + text.substr(text.find(':'));
        text.pop_back();
    }

    const auto probs = predict_proba(art.model, record);
    const auto model_class = argmax(probs);

    return json{
        {"input", input},
        {"rule_prediction",
         {{"class", classes[match.predicted]},
          {"rule_number", number ? json(*number) : json(nullptr)},
          {"rule", text},
          {"backoff", match.backoff},
          {"support", match.rule.support},
          {"confidence", match.rule.confidence}}},
        {"model_prediction",
         {{"class", classes[model_class]}, {"classes", classes}, {"probabilities", probs}}},
        {"agreement", match.predicted == model_class},
        {"model_info",
         {{"deviance", art.model.deviance},
          {"n_params", art.model.n_params},
          {"schema_hash", state_->schema_hash}}}};
}

ServiceResponse PredictionService::predict(const json& body) const
{
    if (!state_) return unavailable();
    std::vector<FieldError> errors;
    const auto record = parse_profile(body, errors);
    if (!errors.empty()) return {400, errors_json(errors)};
    return {200, prediction(record, body)};
}

ServiceResponse PredictionService::whatif(const json& body) const
{
    if (!state_) return unavailable();
    if (!body.is_object() || !body.contains("base")) {
        return {400, errors_json({{"base", "missing base profile"}})};
    }
    const auto& schema = state_->artifacts.schema;
    std::vector<FieldError> errors;
    const auto base = parse_profile(body.at("base"), errors);
    for (auto& e : errors) e.field = "base." + e.field;
    json overrides = body.value("overrides", json::array());
    if (!overrides.is_array()) errors.push_back({"overrides", "expected an array"});
    if (!errors.empty()) return {400, errors_json(errors)};

    const auto base_probs = predict_proba(state_->artifacts.model, base);
    json results = json::array();
    for (std::size_t i = 0; i < overrides.size(); ++i) {
        const auto& ov = overrides[i];
        const std::string field = "overrides[" + std::to_string(i) + "]";
        json item{{"override", ov}};
        std::vector<FieldError> item_errors;
        std::optional<std::size_t> attr;
        std::optional<LevelIndex> level;
        if (!ov.is_object() || !ov.contains("attribute") || !ov.contains("level") ||
            !ov["attribute"].is_string() || !ov["level"].is_string()) {
            item_errors.push_back({field, "expected {attribute, level} strings"});
        } else {
            const auto name = ov["attribute"].get<std::string>();
            attr = schema.index_of(name);
            if (!attr) {
                item_errors.push_back({field + ".attribute", "unknown attribute '" + name + "'"});
            } else if (*attr == schema.class_index()) {
                item_errors.push_back({field + ".attribute", "the class attribute cannot be overridden"});
            } else {
                level = schema[*attr].level_index(ov["level"].get<std::string>());
                if (!level) {
                    item_errors.push_back({field + ".level", "unknown level '" +
                                                                 ov["level"].get<std::string>() +
                                                                 "' for '" + name + "'"});
                }
            }
        }
        if (!item_errors.empty()) {
            item["status"] = 400;
            item["errors"] = errors_json(item_errors)["errors"];
            results.push_back(std::move(item));
            continue;
        }
        auto record = base;
        record[*attr] = *level;
        json profile = body.at("base");
        profile[schema[*attr].name] = schema[*attr].levels[*level];
        auto response = prediction(record, profile);
        const auto probs = response["model_prediction"]["probabilities"].get<std::vector<double>>();
        std::vector<double> delta(probs.size());
        for (std::size_t k = 0; k < probs.size(); ++k) delta[k] = probs[k] - base_probs[k];
        item["status"] = 200;
        item["response"] = std::move(response);
        item["delta"] = delta;
        results.push_back(std::move(item));
    }
    return {200, json{{"results", std::move(results)}}};
}

ServiceResponse PredictionService::handle(std::string_view method, std::string_view path,
                                          std::string_view body) const
{
    if (method == "GET" && path == "/schema") return schema();
    if (method == "POST" && (path == "/predict" || path == "/whatif")) {
        json doc = json::parse(body, nullptr, false);
        if (doc.is_discarded()) return {400, errors_json({{"body", "request body is not valid JSON"}})};
        return path == "/predict" ? predict(doc) : whatif(doc);
    }
    return {404, errors_json({{"path", "no route for " + std::string(method) + " " + std::string(path)}})};
}

} // namespace ydss
