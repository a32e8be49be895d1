#include "ydss/classification.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "ydss/csv.hpp"
#include "ydss/error.hpp"

namespace ydss {

std::uint64_t ClassificationTable::total() const
{
    std::uint64_t s = 0;
    for (const auto& row : counts)
        for (auto c : row) s += c;
    return s;
}

ClassificationTable classification_table_from_counts(std::vector<std::vector<std::uint64_t>> counts,
                                                     std::vector<std::string> labels)
{
    const std::size_t k = labels.size();
    if (counts.size() != k) throw ValidationError("classification table: counts/labels mismatch");
    for (const auto& row : counts) {
        if (row.size() != k) throw ValidationError("classification table must be square");
    }
    ClassificationTable t{std::move(labels), std::move(counts), {}, {}, 0.0};
    const double n = static_cast<double>(t.total());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t trace = 0;
    t.column_percent.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t row_total = 0;
        for (std::size_t j = 0; j < k; ++j) {
            row_total += t.counts[i][j];
            t.column_percent[j] += static_cast<double>(t.counts[i][j]);
        }
        trace += t.counts[i][i];
        t.row_percent_correct.push_back(
            row_total ? 100.0 * static_cast<double>(t.counts[i][i]) / static_cast<double>(row_total)
                      : nan);
    }
    for (auto& c : t.column_percent) c = n > 0 ? 100.0 * c / n : nan;
    t.overall_percent = n > 0 ? 100.0 * static_cast<double>(trace) / n : nan;
    return t;
}

ClassificationTable classification_table(std::span<const LevelIndex> observed,
                                         std::span<const LevelIndex> predicted,
                                         std::vector<std::string> labels)
{
    if (observed.size() != predicted.size()) {
        throw ValidationError("observed and predicted label sequences differ in length");
    }
    const std::size_t k = labels.size();
    std::vector<std::vector<std::uint64_t>> counts(k, std::vector<std::uint64_t>(k, 0));
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (observed[i] >= k || predicted[i] >= k) {
            throw ValidationError("unknown class label at position " + std::to_string(i));
        }
        ++counts[observed[i]][predicted[i]];
    }
    return classification_table_from_counts(std::move(counts), std::move(labels));
}

void write_classification_csv(std::ostream& out, const ClassificationTable& t)
{
    char buf[32];
    auto pct = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.1f%%", v);
        return std::string(buf);
    };
    out << "observed";
    for (const auto& l : t.labels) out << ',' << csv_escape(l);
    out << ",percent_correct\n";
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
        out << csv_escape(t.labels[i]);
        for (auto c : t.counts[i]) out << ',' << c;
        out << ',' << pct(t.row_percent_correct[i]) << '\n';
    }
    out << "overall_percentage";
    for (double c : t.column_percent) out << ',' << pct(c);
    out << ',' << pct(t.overall_percent) << '\n';
}

} // namespace ydss
