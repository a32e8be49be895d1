#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ydss {

/// One discrete classifier operating point.
struct RocPoint {
    std::string label;
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocSummary {
    std::vector<RocPoint> points;
    /// Per point: tpr > fpr.
    std::vector<bool> above_diagonal;
    /// Per point: |tpr - fpr| <= 1e-12.
    std::vector<bool> chance_level;
    double fraction_above = 0.0;
};

/// Validates the points (coordinates in [0, 1]) and classifies each against
/// the chance diagonal.
RocSummary roc_points(std::vector<RocPoint> points);

/// columns: label,fpr,tpr,above_diagonal
void write_roc_csv(std::ostream& out, const RocSummary& summary);

/// Standalone SVG scatter of the points with the chance diagonal.
std::string render_roc_svg(const RocSummary& summary, const std::string& title = "ROC operating points");

} // namespace ydss
