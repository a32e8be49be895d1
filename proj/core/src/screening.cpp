#include "ydss/screening.hpp"

#include <cstdio>
#include <ostream>

#include "ydss/csv.hpp"
#include "ydss/error.hpp"

namespace ydss {

std::vector<std::string> ScreeningReport::significant_attributes() const
{
    std::vector<std::string> out;
    for (const auto& r : rows) {
        if (r.significant) out.push_back(r.attribute);
    }
    return out;
}

ScreeningReport screen_univariate(const Dataset& data, double tolerance)
{
    if (data.empty()) throw ValidationError("cannot screen an empty dataset");
    if (!(tolerance > 0.0 && tolerance <= 1.0)) {
        throw ValidationError("screening tolerance must lie in (0, 1]");
    }
    const auto& schema = data.schema();
    const auto& class_name = schema.class_attribute().name;

    ScreeningReport report;
    report.tolerance = tolerance;
    for (std::size_t a : schema.predictor_indices()) {
        ScreeningRow row;
        row.attribute = schema[a].name;
        try {
            row.result = pearson_chi_square(cross_tab(data, schema[a].name, class_name));
            row.significant = is_significant(row.result->p_value, tolerance);
        } catch (const ValidationError& e) {
            row.error = e.what();
        }
        report.rows.push_back(std::move(row));
    }
    return report;
}

void write_screening_csv(std::ostream& out, const ScreeningReport& report)
{
    out << "attribute,chi_square,df,p_value,significant\n";
    char buf[64];
    for (const auto& r : report.rows) {
        out << csv_escape(r.attribute) << ',';
        if (r.result) {
            std::snprintf(buf, sizeof buf, "%.6g,%d,%.6g,", r.result->statistic, r.result->df,
                          r.result->p_value);
            out << buf << (r.significant ? "yes" : "no") << '\n';
        } else {
            out << ",,," << csv_escape("error: " + r.error) << '\n';
        }
    }
}

} // namespace ydss
