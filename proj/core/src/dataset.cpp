#include "ydss/dataset.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "ydss/error.hpp"
#include "ydss/rng.hpp"

namespace ydss {

Dataset::Dataset(AttributeSchema schema) : schema_(std::move(schema)) {}

void check_record(const AttributeSchema& schema, RecordView record)
{
    if (record.size() != schema.size()) {
        throw ValidationError("record has " + std::to_string(record.size()) +
                              " values but the schema has " + std::to_string(schema.size()) +
                              " attributes");
    }
    for (std::size_t a = 0; a < record.size(); ++a) {
        if (record[a] >= schema[a].level_count()) {
            throw ValidationError("level index " + std::to_string(record[a]) +
                                  " out of range for attribute '" + schema[a].name + "'");
        }
    }
}

void Dataset::add(RecordView record)
{
    check_record(schema_, record);
    cells_.insert(cells_.end(), record.begin(), record.end());
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const
{
    Dataset out(schema_);
    out.reserve(rows.size());
    for (std::size_t r : rows) {
        auto rec = record(r);
        out.cells_.insert(out.cells_.end(), rec.begin(), rec.end());
    }
    return out;
}

Split train_test_split(const Dataset& data, double test_fraction, std::uint64_t seed)
{
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw ValidationError("test fraction must lie in (0, 1)");
    }
    std::vector<std::size_t> idx(data.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    XorShift64Star rng(seed);
    // Fisher-Yates, drawing from the documented generator so splits are portable.
    for (std::size_t i = idx.size(); i > 1; --i) {
        std::size_t j = rng.below(i);
        std::swap(idx[i - 1], idx[j]);
    }
    const auto n_test =
        static_cast<std::size_t>(std::llround(static_cast<double>(idx.size()) * test_fraction));
    std::span<const std::size_t> all(idx);
    return {data.subset(all.subspan(n_test)), data.subset(all.first(n_test))};
}

} // namespace ydss
