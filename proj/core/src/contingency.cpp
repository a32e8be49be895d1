#include "ydss/contingency.hpp"

#include <numeric>

#include "ydss/error.hpp"

namespace ydss {

ContingencyTable::ContingencyTable(std::string row_attr, std::string col_attr,
                                   std::vector<std::string> row_labels,
                                   std::vector<std::string> col_labels)
    : row_attr_(std::move(row_attr)), col_attr_(std::move(col_attr)),
      row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)),
      counts_(row_labels_.size() * col_labels_.size(), 0)
{}

ContingencyTable
ContingencyTable::from_counts(const std::vector<std::vector<std::uint64_t>>& counts)
{
    const std::size_t r = counts.size();
    const std::size_t c = r == 0 ? 0 : counts.front().size();
    std::vector<std::string> rl(r), cl(c);
    for (std::size_t i = 0; i < r; ++i) rl[i] = std::to_string(i);
    for (std::size_t j = 0; j < c; ++j) cl[j] = std::to_string(j);
    ContingencyTable t("row", "col", std::move(rl), std::move(cl));
    for (std::size_t i = 0; i < r; ++i) {
        if (counts[i].size() != c) throw ValidationError("contingency table rows differ in length");
        for (std::size_t j = 0; j < c; ++j) t.at(i, j) = counts[i][j];
    }
    return t;
}

std::uint64_t ContingencyTable::row_total(std::size_t i) const
{
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < cols(); ++j) s += at(i, j);
    return s;
}

std::uint64_t ContingencyTable::col_total(std::size_t j) const
{
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < rows(); ++i) s += at(i, j);
    return s;
}

std::uint64_t ContingencyTable::total() const
{
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

ContingencyTable ContingencyTable::transposed() const
{
    ContingencyTable t(col_attr_, row_attr_, col_labels_, row_labels_);
    for (std::size_t i = 0; i < rows(); ++i)
        for (std::size_t j = 0; j < cols(); ++j) t.at(j, i) = at(i, j);
    return t;
}

ContingencyTable cross_tab(const Dataset& data, std::string_view row_attr,
                           std::string_view col_attr)
{
    const auto& schema = data.schema();
    const std::size_t ri = schema.require_index(row_attr);
    const std::size_t ci = schema.require_index(col_attr);
    ContingencyTable t(schema[ri].name, schema[ci].name, schema[ri].levels, schema[ci].levels);
    for (std::size_t n = 0; n < data.size(); ++n) ++t.at(data.value(n, ri), data.value(n, ci));
    return t;
}

} // namespace ydss
