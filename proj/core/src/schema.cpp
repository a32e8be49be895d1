#include "ydss/schema.hpp"

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "ydss/error.hpp"
#include "ydss/hashing.hpp"

namespace ydss {

using nlohmann::json;

std::optional<LevelIndex> Attribute::level_index(std::string_view level) const
{
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i] == level) return static_cast<LevelIndex>(i);
    }
    return std::nullopt;
}

AttributeSchema::AttributeSchema(std::vector<Attribute> attributes)
    : attributes_(std::move(attributes))
{
    std::set<std::string_view> names;
    std::size_t n_class = 0;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        const auto& a = attributes_[i];
        if (a.name.empty()) throw ValidationError("schema: attribute name must not be empty");
        if (!names.insert(a.name).second) {
            throw ValidationError("schema: duplicate attribute name '" + a.name + "'");
        }
        if (a.levels.size() < 2) {
            throw ValidationError("schema: attribute '" + a.name + "' needs at least 2 levels");
        }
        if (a.levels.size() > 0xffff) {
            throw ValidationError("schema: attribute '" + a.name + "' has too many levels");
        }
        std::set<std::string_view> levels;
        for (const auto& l : a.levels) {
            if (!levels.insert(l).second) {
                throw ValidationError("schema: duplicate level '" + l + "' in attribute '" +
                                      a.name + "'");
            }
        }
        if (a.role == Role::target) {
            ++n_class;
            class_index_ = i;
        }
    }
    if (n_class != 1) {
        throw ValidationError("schema: exactly one attribute must have role 'class' (found " +
                              std::to_string(n_class) + ")");
    }
}

std::optional<std::size_t> AttributeSchema::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (attributes_[i].name == name) return i;
    }
    return std::nullopt;
}

std::size_t AttributeSchema::require_index(std::string_view name) const
{
    if (auto i = index_of(name)) return *i;
    throw ValidationError("unknown attribute '" + std::string(name) + "'");
}

std::vector<std::size_t> AttributeSchema::predictor_indices() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (i != class_index_) out.push_back(i);
    }
    return out;
}

LevelIndex AttributeSchema::baseline_class() const
{
    const auto& cls = class_attribute();
    if (auto i = cls.level_index(kNoDesire)) return *i;
    return static_cast<LevelIndex>(cls.level_count() - 1);
}

std::string AttributeSchema::hash() const
{
    return to_hex(fnv1a64(to_json().dump()));
}

json AttributeSchema::to_json() const
{
    json attrs = json::array();
    for (const auto& a : attributes_) {
        attrs.push_back({{"name", a.name},
                         {"levels", a.levels},
                         {"role", a.role == Role::target ? "class" : "predictor"}});
    }
    return json{{"attributes", std::move(attrs)}};
}

AttributeSchema AttributeSchema::from_json(const json& doc)
{
    if (!doc.is_object() || !doc.contains("attributes") || !doc["attributes"].is_array()) {
        throw ValidationError("schema: expected an object with an 'attributes' array");
    }
    std::vector<Attribute> attrs;
    for (const auto& a : doc["attributes"]) {
        if (!a.is_object() || !a.contains("name") || !a.contains("levels")) {
            throw ValidationError("schema: every attribute needs 'name' and 'levels'");
        }
        Attribute attr;
        try {
            attr.name = a.at("name").get<std::string>();
            attr.levels = a.at("levels").get<std::vector<std::string>>();
        } catch (const json::exception& e) {
            throw ValidationError(std::string("schema: ") + e.what());
        }
        const std::string role = a.value("role", std::string("predictor"));
        if (role == "class") {
            attr.role = Role::target;
        } else if (role == "predictor") {
            attr.role = Role::predictor;
        } else {
            throw ValidationError("schema: attribute '" + attr.name + "' has unknown role '" +
                                  role + "'");
        }
        attrs.push_back(std::move(attr));
    }
    return AttributeSchema(std::move(attrs));
}

AttributeSchema AttributeSchema::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open schema file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("schema file '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(doc);
}

void AttributeSchema::save(const std::string& path) const
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write schema file '" + path + "'");
    out << to_json().dump(2) << '\n';
}

bool operator==(const AttributeSchema& a, const AttributeSchema& b)
{
    if (a.attributes_.size() != b.attributes_.size()) return false;
    for (std::size_t i = 0; i < a.attributes_.size(); ++i) {
        const auto& x = a.attributes_[i];
        const auto& y = b.attributes_[i];
        if (x.name != y.name || x.levels != y.levels || x.role != y.role) return false;
    }
    return true;
}

AttributeSchema default_survey_schema()
{
    return AttributeSchema({
        {"Type of Activity",
         {"Permanently Employed", "Temporarily Employed", "Self Employed", "Unemployed",
          "Student", "Housework", "Other Activity"},
         Role::predictor},
        {"Educational Level",
         {"No Schooling/Grade 1-5", "Grade 6-11", "GCE A/L and Above"},
         Role::predictor},
        {"Province",
         {"Western", "Central", "Southern", "Northern", "Eastern", "North Western",
          "North Central", "Uva", "Sabaragamuwa"},
         Role::predictor},
        {"Gender", {"Male", "Female"}, Role::predictor},
        {"Social Class",
         {"Upper Class", "Middle Class", "Working Class", "Lower Class"},
         Role::predictor},
        {"Age Group", {"15-19 yrs", "20-24 yrs", "24-29 yrs"}, Role::predictor},
        {"Financial Situation in Past", {"Better", "Same", "Worse"}, Role::predictor},
        {"Major Problems with Education",
         {"Financial Difficulties", "Lack of Facilities", "Distance to School",
          "Poor Teaching Quality", "Family Responsibilities", "Health Problems",
          "Other Problems", "No Problems"},
         Role::predictor},
        {"Type of Further Education Desire",
         {"Technical/Vocational Education", "University/Higher Education", "No Desire"},
         Role::target},
    });
}

} // namespace ydss
