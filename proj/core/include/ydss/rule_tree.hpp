#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ydss/dataset.hpp"

namespace ydss {

struct TreeNode {
    std::size_t depth = 0;
    /// Schema index of the split attribute; empty for a leaf.
    std::optional<std::size_t> split;
    /// Child node per level of the split attribute; -1 marks an empty cell.
    std::vector<std::int32_t> children;
    std::vector<std::uint64_t> class_counts;
    std::uint64_t support = 0;
    /// Majority class, ties to the lowest index.
    LevelIndex majority = 0;

    bool is_leaf() const { return !split.has_value(); }
};

/// Fixed-order stratification tree: every internal node at depth d splits on
/// the d-th attribute of the given order, one child per level. No
/// impurity-driven reordering or pruning.
class RuleTree {
public:
    RuleTree() = default;
    RuleTree(AttributeSchema schema, std::vector<std::string> ordered_attrs,
             std::vector<TreeNode> nodes);

    const AttributeSchema& schema() const { return schema_; }
    const std::vector<std::string>& ordered_attrs() const { return ordered_attrs_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }
    const TreeNode& root() const { return nodes_.front(); }

    nlohmann::json to_json() const;
    static RuleTree from_json(const nlohmann::json& doc, const AttributeSchema& schema);
    static RuleTree load(const std::string& path, const AttributeSchema& schema);
    void save(const std::string& path) const;

private:
    AttributeSchema schema_;
    std::vector<std::string> ordered_attrs_;
    std::vector<TreeNode> nodes_;
};

struct TreeOptions {
    /// Nodes with fewer records than this are not split further.
    std::size_t min_support = 1;
    /// Defaults to the length of the attribute order.
    std::optional<std::size_t> max_depth;
    /// Stop at nodes whose records all share one class.
    bool stop_when_pure = true;
};

/// Throws ValidationError on an empty dataset, duplicate or unknown
/// attributes, or the class attribute appearing in the order.
RuleTree build_tree(const Dataset& data, const std::vector<std::string>& ordered_attrs,
                    const TreeOptions& options = {});

struct Condition {
    std::string attribute;
    std::string level;

    friend bool operator==(const Condition&, const Condition&) = default;
};

struct Rule {
    std::vector<Condition> conditions;
    std::string consequent;
    std::uint64_t support = 0;
    double confidence = 0.0;
    /// Rule for an empty cell: the consequent is the parent's majority.
    bool backoff = false;
};

/// One rule per leaf with support > 0, depth-first in level order. With
/// `include_backoff`, empty cells yield backoff rules at their position.
std::vector<Rule> extract_rules(const RuleTree& tree, bool include_backoff = false);

/// "Rule N: A=x ^ B=y" on one line and the consequent on the next, indented
/// by one space. A rule without conditions renders as "Rule N: (any)".
std::string render_rule(const Rule& rule, std::size_t number);
/// Rules numbered from 1, separated by blank lines, newline-terminated.
std::string render_rules(const std::vector<Rule>& rules);
/// Inverse of render_rules for conditions and consequents (support and
/// confidence are not part of the text format).
std::vector<Rule> parse_rules(std::string_view text);

nlohmann::json rules_to_json(const std::vector<Rule>& rules);

struct RuleMatch {
    LevelIndex predicted = 0;
    Rule rule;
    bool backoff = false;
};

/// Descends by the record's levels. Landing in an empty cell returns the
/// parent's majority with `backoff` set.
RuleMatch classify_rule(const RuleTree& tree, RecordView record);

/// Whether every condition of `rule` holds for `record`.
bool rule_matches(const AttributeSchema& schema, const Rule& rule, RecordView record);

} // namespace ydss
