#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ydss/dataset.hpp"

namespace ydss {

/// r x c table of non-negative counts with row/column labels.
class ContingencyTable {
public:
    ContingencyTable() = default;
    ContingencyTable(std::string row_attr, std::string col_attr,
                     std::vector<std::string> row_labels, std::vector<std::string> col_labels);

    /// Unlabelled table from nested counts; rows must be equal length.
    static ContingencyTable from_counts(const std::vector<std::vector<std::uint64_t>>& counts);

    std::size_t rows() const { return row_labels_.size(); }
    std::size_t cols() const { return col_labels_.size(); }

    std::uint64_t& at(std::size_t i, std::size_t j) { return counts_[i * cols() + j]; }
    std::uint64_t at(std::size_t i, std::size_t j) const { return counts_[i * cols() + j]; }

    std::uint64_t row_total(std::size_t i) const;
    std::uint64_t col_total(std::size_t j) const;
    std::uint64_t total() const;

    const std::string& row_attr() const { return row_attr_; }
    const std::string& col_attr() const { return col_attr_; }
    const std::vector<std::string>& row_labels() const { return row_labels_; }
    const std::vector<std::string>& col_labels() const { return col_labels_; }

    ContingencyTable transposed() const;

    friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;

private:
    std::string row_attr_;
    std::string col_attr_;
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
    std::vector<std::uint64_t> counts_;
};

ContingencyTable cross_tab(const Dataset& data, std::string_view row_attr,
                           std::string_view col_attr);

} // namespace ydss
