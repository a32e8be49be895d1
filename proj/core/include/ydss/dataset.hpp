#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ydss/schema.hpp"

namespace ydss {

using RecordView = std::span<const LevelIndex>;

/// Records of level indices, one entry per schema attribute, stored row-major.
class Dataset {
public:
    Dataset() = default;
    explicit Dataset(AttributeSchema schema);

    const AttributeSchema& schema() const { return schema_; }
    std::size_t size() const { return width() == 0 ? 0 : cells_.size() / width(); }
    bool empty() const { return cells_.empty(); }
    std::size_t width() const { return schema_.size(); }

    RecordView record(std::size_t i) const { return {cells_.data() + i * width(), width()}; }
    LevelIndex value(std::size_t i, std::size_t attr) const { return cells_[i * width() + attr]; }
    LevelIndex class_of(std::size_t i) const { return value(i, schema_.class_index()); }

    /// Appends a record; throws ValidationError on arity or level-range mismatch.
    void add(RecordView record);
    void reserve(std::size_t n) { cells_.reserve(n * width()); }

    Dataset subset(std::span<const std::size_t> rows) const;

    friend bool operator==(const Dataset& a, const Dataset& b)
    {
        return a.schema_ == b.schema_ && a.cells_ == b.cells_;
    }

private:
    AttributeSchema schema_;
    std::vector<LevelIndex> cells_;
};

/// Throws ValidationError unless `record` has one in-range index per attribute.
void check_record(const AttributeSchema& schema, RecordView record);

/// Deterministic train/test split: shuffles row indices with the seeded
/// generator and puts the first round(n * test_fraction) rows in the test set.
struct Split {
    Dataset train;
    Dataset test;
};
Split train_test_split(const Dataset& data, double test_fraction, std::uint64_t seed);

} // namespace ydss
