#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ydss/schema.hpp"

namespace ydss {

/// Rows are observed classes, columns predicted classes.
struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::uint64_t>> counts;

    std::uint64_t total() const;
    std::uint64_t trace() const;
};

/// One-vs-rest reduction of a confusion matrix.
struct BinaryCollapse {
    std::string positive;
    std::uint64_t tp = 0;
    std::uint64_t fn = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;

    std::uint64_t total() const { return tp + fn + fp + tn; }
};

struct MetricsRow {
    double tpr = 0.0;
    double fpr = 0.0;
    double accuracy = 0.0;
};

ConfusionMatrix confusion(std::span<const LevelIndex> observed,
                          std::span<const LevelIndex> predicted, std::vector<std::string> labels);

BinaryCollapse collapse(const ConfusionMatrix& matrix, std::size_t positive);
BinaryCollapse collapse(const ConfusionMatrix& matrix, const std::string& positive);

/// Throws ValidationError when tp + fn or fp + tn is zero.
MetricsRow metrics(const BinaryCollapse& b);

/// Unweighted mean of each field. Throws ValidationError on an empty list.
MetricsRow macro_average(std::span<const MetricsRow> rows);

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& m);
/// columns: dataset,positive,tp,fn,fp,tn
void write_collapse_csv(std::ostream& out, const std::vector<std::string>& dataset_names,
                        const std::vector<std::vector<BinaryCollapse>>& collapses);
/// columns: dataset,class,tpr,fpr,accuracy (6 significant digits)
void write_metrics_csv(std::ostream& out, const std::vector<std::string>& dataset_names,
                       const std::vector<std::vector<std::string>>& class_names,
                       const std::vector<std::vector<MetricsRow>>& rows);

} // namespace ydss
