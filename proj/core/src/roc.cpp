#include "ydss/roc.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "ydss/csv.hpp"
#include "ydss/error.hpp"

namespace ydss {

RocSummary roc_points(std::vector<RocPoint> points)
{
    RocSummary s;
    std::size_t above = 0;
    for (const auto& p : points) {
        if (!(p.fpr >= 0.0 && p.fpr <= 1.0 && p.tpr >= 0.0 && p.tpr <= 1.0)) {
            throw ValidationError("ROC point '" + p.label + "' lies outside the unit square");
        }
        const bool chance = std::fabs(p.tpr - p.fpr) <= 1e-12;
        const bool up = !chance && p.tpr > p.fpr;
        s.above_diagonal.push_back(up);
        s.chance_level.push_back(chance);
        above += up;
    }
    s.fraction_above =
        points.empty() ? 0.0 : static_cast<double>(above) / static_cast<double>(points.size());
    s.points = std::move(points);
    return s;
}

void write_roc_csv(std::ostream& out, const RocSummary& s)
{
    out << "label,fpr,tpr,above_diagonal\n";
    char buf[64];
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6g,%.6g", s.points[i].fpr, s.points[i].tpr);
        out << csv_escape(s.points[i].label) << ',' << buf << ','
            << (s.above_diagonal[i] ? "yes" : "no") << '\n';
    }
}

namespace {

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

} // namespace

std::string render_roc_svg(const RocSummary& s, const std::string& title)
{
    constexpr double size = 400.0;
    constexpr double margin = 50.0;
    auto x = [&](double fpr) { return margin + fpr * size; };
    auto y = [&](double tpr) { return margin + (1.0 - tpr) * size; };

    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                  "viewBox=\"0 0 %.0f %.0f\">\n",
                  size + 2 * margin, size + 2 * margin, size + 2 * margin, size + 2 * margin);
    out += buf;
    out += "<title>" + xml_escape(title) + "</title>\n";
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"black\"/>\n",
                  margin, margin, size, size);
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"gray\" "
                  "stroke-dasharray=\"6 4\"/>\n",
                  x(0), y(0), x(1), y(1));
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"14\">False "
                  "positive rate</text>\n",
                  margin + size / 2, size + 2 * margin - 12);
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"14\" y=\"%.1f\" text-anchor=\"middle\" font-size=\"14\" "
                  "transform=\"rotate(-90 14 %.1f)\">True positive rate</text>\n",
                  margin + size / 2, margin + size / 2);
    out += buf;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        const auto& p = s.points[i];
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"4\" fill=\"%s\"><title>",
                      x(p.fpr), y(p.tpr), s.above_diagonal[i] ? "steelblue" : "firebrick");
        out += buf;
        std::snprintf(buf, sizeof buf, " (%.6g, %.6g)", p.fpr, p.tpr);
        out += xml_escape(p.label) + buf + "</title></circle>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace ydss
