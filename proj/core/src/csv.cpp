#include "ydss/csv.hpp"

#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

namespace ydss {

CsvError::CsvError(std::size_t row, std::string column, const std::string& message)
    : ValidationError("row " + std::to_string(row) + ", column \"" + column + "\": " + message),
      row_(row), column_(std::move(column))
{}

std::vector<std::vector<std::string>> parse_csv(std::istream& in)
{
    std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (text.starts_with("\xEF\xBB\xBF")) text.erase(0, 3);

    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        // A bare blank line is not a record.
        if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field_started && field.empty()) {
                in_quotes = true;
                field_started = true;
            } else {
                field.push_back(c);
            }
            break;
        case ',':
            end_field();
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_row();
            break;
        case '\n':
            end_row();
            break;
        default:
            field.push_back(c);
            field_started = true;
        }
    }
    if (in_quotes) throw ValidationError("csv: unterminated quoted field");
    if (!field.empty() || field_started || !row.empty()) end_row();
    return rows;
}

LoadResult read_csv(std::istream& in, const AttributeSchema& schema, RowPolicy policy)
{
    auto rows = parse_csv(in);
    if (rows.empty()) throw ValidationError("csv: missing header row");

    const auto& header = rows.front();
    // column position -> schema attribute index
    std::vector<std::size_t> column_attr(header.size());
    std::vector<bool> seen(schema.size(), false);
    for (std::size_t c = 0; c < header.size(); ++c) {
        auto idx = schema.index_of(header[c]);
        if (!idx) throw CsvError(0, header[c], "unknown column");
        if (seen[*idx]) throw CsvError(0, header[c], "duplicate column");
        seen[*idx] = true;
        column_attr[c] = *idx;
    }
    for (std::size_t a = 0; a < schema.size(); ++a) {
        if (!seen[a]) throw CsvError(0, schema[a].name, "column missing from header");
    }

    LoadResult result{Dataset(schema), 0};
    result.data.reserve(rows.size() - 1);
    std::vector<LevelIndex> record(schema.size());
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& fields = rows[r];
        try {
            if (fields.size() > header.size()) {
                throw CsvError(r, header.back(), "row has more fields than the header");
            }
            for (std::size_t c = 0; c < header.size(); ++c) {
                const auto& attr = schema[column_attr[c]];
                if (c >= fields.size() || fields[c].empty()) {
                    throw CsvError(r, attr.name, "missing value");
                }
                auto level = attr.level_index(fields[c]);
                if (!level) throw CsvError(r, attr.name, "unknown level '" + fields[c] + "'");
                record[column_attr[c]] = *level;
            }
        } catch (const CsvError&) {
            if (policy == RowPolicy::fail) throw;
            ++result.skipped_rows;
            continue;
        }
        result.data.add(record);
    }
    return result;
}

LoadResult load_csv(const std::string& path, const AttributeSchema& schema, RowPolicy policy)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open data file '" + path + "'");
    return read_csv(in, schema, policy);
}

std::string csv_escape(const std::string& field)
{
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_csv(std::ostream& out, const Dataset& data)
{
    const auto& schema = data.schema();
    for (std::size_t a = 0; a < schema.size(); ++a) {
        if (a) out << ',';
        out << csv_escape(schema[a].name);
    }
    out << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto rec = data.record(i);
        for (std::size_t a = 0; a < schema.size(); ++a) {
            if (a) out << ',';
            out << csv_escape(schema[a].levels[rec[a]]);
        }
        out << '\n';
    }
}

void save_csv(const std::string& path, const Dataset& data)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write data file '" + path + "'");
    write_csv(out, data);
}

} // namespace ydss
