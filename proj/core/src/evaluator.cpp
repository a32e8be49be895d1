#include "ydss/evaluator.hpp"

#include <cstdio>
#include <ostream>

#include "ydss/csv.hpp"
#include "ydss/error.hpp"

namespace ydss {

std::uint64_t ConfusionMatrix::total() const
{
    std::uint64_t s = 0;
    for (const auto& row : counts)
        for (auto c : row) s += c;
    return s;
}

std::uint64_t ConfusionMatrix::trace() const
{
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) s += counts[i][i];
    return s;
}

ConfusionMatrix confusion(std::span<const LevelIndex> observed,
                          std::span<const LevelIndex> predicted, std::vector<std::string> labels)
{
    if (observed.size() != predicted.size()) {
        throw ValidationError("observed and predicted label sequences differ in length");
    }
    const std::size_t k = labels.size();
    ConfusionMatrix m{std::move(labels), std::vector<std::vector<std::uint64_t>>(
                                             k, std::vector<std::uint64_t>(k, 0))};
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (observed[i] >= k || predicted[i] >= k) {
            throw ValidationError("unknown class label at position " + std::to_string(i));
        }
        ++m.counts[observed[i]][predicted[i]];
    }
    return m;
}

BinaryCollapse collapse(const ConfusionMatrix& m, std::size_t p)
{
    if (p >= m.labels.size()) throw ValidationError("positive class index out of range");
    BinaryCollapse b;
    b.positive = m.labels[p];
    const std::size_t k = m.labels.size();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            const auto c = m.counts[i][j];
            if (i == p && j == p) {
                b.tp += c;
            } else if (i == p) {
                b.fn += c;
            } else if (j == p) {
                b.fp += c;
            } else {
                b.tn += c;
            }
        }
    }
    return b;
}

BinaryCollapse collapse(const ConfusionMatrix& m, const std::string& positive)
{
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        if (m.labels[i] == positive) return collapse(m, i);
    }
    throw ValidationError("unknown positive class '" + positive + "'");
}

MetricsRow metrics(const BinaryCollapse& b)
{
    if (b.tp + b.fn == 0) {
        throw ValidationError("TPR undefined for '" + b.positive + "': no positive observations");
    }
    if (b.fp + b.tn == 0) {
        throw ValidationError("FPR undefined for '" + b.positive + "': no negative observations");
    }
    const auto d = [](std::uint64_t x) { return static_cast<double>(x); };
    return {d(b.tp) / d(b.tp + b.fn), d(b.fp) / d(b.fp + b.tn), d(b.tp + b.tn) / d(b.total())};
}

MetricsRow macro_average(std::span<const MetricsRow> rows)
{
    if (rows.empty()) throw ValidationError("cannot average an empty list of metrics");
    MetricsRow avg;
    for (const auto& r : rows) {
        avg.tpr += r.tpr;
        avg.fpr += r.fpr;
        avg.accuracy += r.accuracy;
    }
    const double n = static_cast<double>(rows.size());
    avg.tpr /= n;
    avg.fpr /= n;
    avg.accuracy /= n;
    return avg;
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m)
{
    out << "observed";
    for (const auto& l : m.labels) out << ',' << csv_escape(l);
    out << '\n';
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
        out << csv_escape(m.labels[i]);
        for (auto c : m.counts[i]) out << ',' << c;
        out << '\n';
    }
}

void write_collapse_csv(std::ostream& out, const std::vector<std::string>& dataset_names,
                        const std::vector<std::vector<BinaryCollapse>>& collapses)
{
    out << "dataset,positive,tp,fn,fp,tn\n";
    for (std::size_t d = 0; d < collapses.size(); ++d) {
        for (const auto& b : collapses[d]) {
            out << csv_escape(dataset_names[d]) << ',' << csv_escape(b.positive) << ',' << b.tp
                << ',' << b.fn << ',' << b.fp << ',' << b.tn << '\n';
        }
    }
}

void write_metrics_csv(std::ostream& out, const std::vector<std::string>& dataset_names,
                       const std::vector<std::vector<std::string>>& class_names,
                       const std::vector<std::vector<MetricsRow>>& rows)
{
    out << "dataset,class,tpr,fpr,accuracy\n";
    char buf[96];
    for (std::size_t d = 0; d < rows.size(); ++d) {
        for (std::size_t c = 0; c < rows[d].size(); ++c) {
            const auto& r = rows[d][c];
            std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g", r.tpr, r.fpr, r.accuracy);
            out << csv_escape(dataset_names[d]) << ',' << csv_escape(class_names[d][c]) << ','
                << buf << '\n';
        }
    }
}

} // namespace ydss
