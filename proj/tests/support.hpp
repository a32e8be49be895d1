#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ydss/dataset.hpp"
#include "ydss/rng.hpp"
#include "ydss/schema.hpp"

namespace ydss::testing {

/// Predictors with the given level counts named A, B, C, ..., plus a class
/// attribute "Y" with `classes` levels (the last named "No Desire").
inline AttributeSchema small_schema(const std::vector<std::size_t>& levels, std::size_t classes = 3)
{
    std::vector<Attribute> attrs;
    for (std::size_t a = 0; a < levels.size(); ++a) {
        Attribute at{std::string(1, static_cast<char>('A' + a)), {}, Role::predictor};
        for (std::size_t l = 0; l < levels[a]; ++l) at.levels.push_back("l" + std::to_string(l));
        attrs.push_back(std::move(at));
    }
    Attribute y{"Y", {}, Role::target};
    for (std::size_t k = 0; k + 1 < classes; ++k) y.levels.push_back("c" + std::to_string(k));
    y.levels.push_back("No Desire");
    attrs.push_back(std::move(y));
    return AttributeSchema(std::move(attrs));
}

/// Uniformly random records over every attribute, class included.
inline Dataset random_dataset(const AttributeSchema& schema, std::size_t n, std::uint64_t seed)
{
    XorShift64Star rng(seed);
    Dataset d(schema);
    d.reserve(n);
    std::vector<LevelIndex> rec(schema.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < schema.size(); ++a) {
            rec[a] = static_cast<LevelIndex>(rng.below(schema[a].level_count()));
        }
        d.add(rec);
    }
    return d;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name)
{
    auto dir = std::filesystem::temp_directory_path() / ("ydss_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace ydss::testing
