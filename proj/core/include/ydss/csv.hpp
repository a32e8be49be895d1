#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "ydss/dataset.hpp"
#include "ydss/error.hpp"

namespace ydss {

/// What to do with a data row that has a missing cell or an unknown level.
enum class RowPolicy { fail, skip };

struct LoadResult {
    Dataset data;
    std::size_t skipped_rows = 0;
};

/// Row/column-located CSV problem. `row` is 1-based over data rows (the
/// header is row 0).
class CsvError : public ValidationError {
public:
    CsvError(std::size_t row, std::string column, const std::string& message);
    std::size_t row() const { return row_; }
    const std::string& column() const { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

/// Splits RFC 4180 text into records of fields. Handles quoted fields with
/// embedded commas, doubled quotes and line breaks, and CRLF endings.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

LoadResult read_csv(std::istream& in, const AttributeSchema& schema,
                    RowPolicy policy = RowPolicy::fail);
LoadResult load_csv(const std::string& path, const AttributeSchema& schema,
                    RowPolicy policy = RowPolicy::fail);

/// Writes the header in schema order followed by level labels, quoting
/// fields only where RFC 4180 requires it.
void write_csv(std::ostream& out, const Dataset& data);
void save_csv(const std::string& path, const Dataset& data);

std::string csv_escape(const std::string& field);

} // namespace ydss
