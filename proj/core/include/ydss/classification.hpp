#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ydss/schema.hpp"

namespace ydss {

/// Observed-by-predicted counts with the usual percentage margins.
/// Percentages are on a 0-100 scale; a row with no observations gets NaN.
struct ClassificationTable {
    std::vector<std::string> labels;
    std::vector<std::vector<std::uint64_t>> counts;
    std::vector<double> row_percent_correct;
    std::vector<double> column_percent;
    double overall_percent = 0.0;

    std::uint64_t total() const;
};

ClassificationTable classification_table(std::span<const LevelIndex> observed,
                                         std::span<const LevelIndex> predicted,
                                         std::vector<std::string> labels);

ClassificationTable classification_table_from_counts(std::vector<std::vector<std::uint64_t>> counts,
                                                     std::vector<std::string> labels);

void write_classification_csv(std::ostream& out, const ClassificationTable& table);

} // namespace ydss
