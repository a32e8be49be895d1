#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ydss/dataset.hpp"
#include "ydss/stat_tests.hpp"

namespace ydss {

inline constexpr double kDefaultScreenAlpha = 0.20;

struct ScreeningRow {
    std::string attribute;
    /// Empty when the cross-tabulation was degenerate; `error` then explains why.
    std::optional<ChiSquareResult> result;
    bool significant = false;
    std::string error;
};

struct ScreeningReport {
    std::vector<ScreeningRow> rows;
    double tolerance = kDefaultScreenAlpha;

    std::vector<std::string> significant_attributes() const;
};

/// Significance at a given tolerance. Strict: p equal to the tolerance is rejected.
inline bool is_significant(double p_value, double tolerance) { return p_value < tolerance; }

/// Cross-tabulates every predictor against the class and runs Pearson's test.
/// Rows follow schema order; a degenerate table is reported on its row
/// instead of aborting the screen.
ScreeningReport screen_univariate(const Dataset& data, double tolerance = kDefaultScreenAlpha);

/// CSV with columns attribute,chi_square,df,p_value,significant.
void write_screening_csv(std::ostream& out, const ScreeningReport& report);

} // namespace ydss
