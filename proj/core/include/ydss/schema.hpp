#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ydss {

using LevelIndex = std::uint16_t;

enum class Role { predictor, target };

struct Attribute {
    std::string name;
    std::vector<std::string> levels;
    Role role = Role::predictor;

    std::size_t level_count() const { return levels.size(); }
    std::optional<LevelIndex> level_index(std::string_view level) const;
};

/// Ordered set of categorical attributes, exactly one of which is the class.
///
/// Immutable once constructed; the constructor rejects duplicate names,
/// duplicate levels, attributes with fewer than two levels and schemas
/// without exactly one class attribute.
class AttributeSchema {
public:
    AttributeSchema() = default;
    explicit AttributeSchema(std::vector<Attribute> attributes);

    const std::vector<Attribute>& attributes() const { return attributes_; }
    std::size_t size() const { return attributes_.size(); }
    const Attribute& operator[](std::size_t i) const { return attributes_[i]; }

    std::optional<std::size_t> index_of(std::string_view name) const;
    /// Like index_of but throws ValidationError naming the attribute.
    std::size_t require_index(std::string_view name) const;

    std::size_t class_index() const { return class_index_; }
    const Attribute& class_attribute() const { return attributes_[class_index_]; }
    std::size_t class_count() const { return class_attribute().level_count(); }
    std::vector<std::size_t> predictor_indices() const;

    /// Outcome used as the logit denominator: "No Desire" when present,
    /// otherwise the last class level.
    LevelIndex baseline_class() const;

    /// Stable 16-hex-digit fingerprint of the canonical JSON form.
    std::string hash() const;

    nlohmann::json to_json() const;
    static AttributeSchema from_json(const nlohmann::json& doc);
    static AttributeSchema load(const std::string& path);
    void save(const std::string& path) const;

    friend bool operator==(const AttributeSchema& a, const AttributeSchema& b);

private:
    std::vector<Attribute> attributes_;
    std::size_t class_index_ = 0;
};

/// The eight survey predictors plus the class attribute, with level counts
/// 7, 3, 9, 2, 4, 3, 3, 8 and 3.
AttributeSchema default_survey_schema();

inline constexpr std::string_view kNoDesire = "No Desire";

} // namespace ydss
