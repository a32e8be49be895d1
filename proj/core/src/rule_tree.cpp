#include "ydss/rule_tree.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ydss/error.hpp"

namespace ydss {

using nlohmann::json;

namespace {

constexpr std::string_view kJoiner = " ^ ";
constexpr std::string_view kAnyCondition = "(any)";

LevelIndex majority_of(const std::vector<std::uint64_t>& counts)
{
    std::size_t best = 0;
    for (std::size_t k = 1; k < counts.size(); ++k) {
        if (counts[k] > counts[best]) best = k;
    }
    return static_cast<LevelIndex>(best);
}

std::vector<std::size_t> resolve_order(const AttributeSchema& schema,
                                       const std::vector<std::string>& ordered_attrs)
{
    std::vector<std::size_t> idx;
    std::set<std::size_t> seen;
    for (const auto& name : ordered_attrs) {
        const auto i = schema.require_index(name);
        if (i == schema.class_index()) {
            throw ValidationError("the class attribute '" + name + "' cannot be a tree split");
        }
        if (!seen.insert(i).second) {
            throw ValidationError("attribute '" + name + "' listed twice in the tree order");
        }
        idx.push_back(i);
    }
    return idx;
}

} // namespace

RuleTree::RuleTree(AttributeSchema schema, std::vector<std::string> ordered_attrs,
                   std::vector<TreeNode> nodes)
    : schema_(std::move(schema)), ordered_attrs_(std::move(ordered_attrs)), nodes_(std::move(nodes))
{
    resolve_order(schema_, ordered_attrs_);
    if (nodes_.empty()) throw ValidationError("rule tree has no nodes");
}

RuleTree build_tree(const Dataset& data, const std::vector<std::string>& ordered_attrs,
                    const TreeOptions& options)
{
    if (data.empty()) throw ValidationError("cannot build a tree from an empty dataset");
    const auto& schema = data.schema();
    const auto order = resolve_order(schema, ordered_attrs);
    const std::size_t max_depth = std::min(options.max_depth.value_or(order.size()), order.size());
    const std::size_t classes = schema.class_count();

    std::vector<TreeNode> nodes;
    std::function<std::int32_t(std::vector<std::size_t>&&, std::size_t)> grow =
        [&](std::vector<std::size_t>&& rows, std::size_t depth) -> std::int32_t {
        const auto id = static_cast<std::int32_t>(nodes.size());
        nodes.emplace_back();
        {
            auto& node = nodes.back();
            node.depth = depth;
            node.class_counts.assign(classes, 0);
            for (auto r : rows) ++node.class_counts[data.class_of(r)];
            node.support = rows.size();
            node.majority = majority_of(node.class_counts);
        }
        const auto& counts = nodes[id].class_counts;
        const bool pure =
            std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
        if (depth >= max_depth || rows.size() < options.min_support ||
            (options.stop_when_pure && pure)) {
            return id;
        }

        const std::size_t attr = order[depth];
        const std::size_t levels = schema[attr].level_count();
        std::vector<std::vector<std::size_t>> parts(levels);
        for (auto r : rows) parts[data.value(r, attr)].push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        nodes[id].split = attr;
        nodes[id].children.assign(levels, -1);
        for (std::size_t l = 0; l < levels; ++l) {
            if (parts[l].empty()) continue;
            const auto child = grow(std::move(parts[l]), depth + 1);
            nodes[id].children[l] = child;
        }
        return id;
    };

    std::vector<std::size_t> all(data.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    grow(std::move(all), 0);
    return RuleTree(schema, ordered_attrs, std::move(nodes));
}

std::vector<Rule> extract_rules(const RuleTree& tree, bool include_backoff)
{
    const auto& schema = tree.schema();
    const auto& cls = schema.class_attribute();
    const auto& nodes = tree.nodes();
    std::vector<Rule> rules;
    std::vector<Condition> path;

    std::function<void(std::int32_t)> walk = [&](std::int32_t id) {
        const auto& node = nodes[id];
        if (node.is_leaf()) {
            if (node.support == 0 && !include_backoff) return;
            Rule r;
            r.conditions = path;
            r.consequent = cls.levels[node.majority];
            r.support = node.support;
            r.confidence = node.support ? static_cast<double>(node.class_counts[node.majority]) /
                                              static_cast<double>(node.support)
                                        : 0.0;
            rules.push_back(std::move(r));
            return;
        }
        const auto& attr = schema[*node.split];
        for (std::size_t l = 0; l < node.children.size(); ++l) {
            path.push_back({attr.name, attr.levels[l]});
            if (node.children[l] >= 0) {
                walk(node.children[l]);
            } else if (include_backoff) {
                Rule r;
                r.conditions = path;
                r.consequent = cls.levels[node.majority];
                r.backoff = true;
                rules.push_back(std::move(r));
            }
            path.pop_back();
        }
    };
    walk(0);
    return rules;
}

std::string render_rule(const Rule& rule, std::size_t number)
{
    std::string out = "Rule " + std::to_string(number) + ": ";
    if (rule.conditions.empty()) {
        out += kAnyCondition;
    } else {
        for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
            if (i) out += kJoiner;
            out += rule.conditions[i].attribute + "=" + rule.conditions[i].level;
        }
    }
    out += "\n " + rule.consequent + "\n";
    return out;
}

std::string render_rules(const std::vector<Rule>& rules)
{
    std::string out;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (i) out += "\n";
        out += render_rule(rules[i], i + 1);
    }
    return out;
}

std::vector<Rule> parse_rules(std::string_view text)
{
    std::vector<std::string> lines;
    {
        std::string s(text);
        std::istringstream in(s);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            lines.push_back(line);
        }
    }

    std::vector<Rule> rules;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.empty()) continue;
        if (!line.starts_with("Rule ")) {
            throw ValidationError("rules: expected 'Rule N:' header at line " + std::to_string(i + 1));
        }
        const auto colon = line.find(": ");
        if (colon == std::string::npos) {
            throw ValidationError("rules: malformed header at line " + std::to_string(i + 1));
        }
        if (line.substr(5, colon - 5) != std::to_string(rules.size() + 1)) {
            throw ValidationError("rules: expected 'Rule " + std::to_string(rules.size() + 1) +
                                  ":' at line " + std::to_string(i + 1));
        }
        Rule r;
        std::string_view body = std::string_view(line).substr(colon + 2);
        if (body != kAnyCondition) {
            while (true) {
                const auto j = body.find(kJoiner);
                const auto cond = body.substr(0, j);
                const auto eq = cond.find('=');
                if (eq == std::string_view::npos) {
                    throw ValidationError("rules: condition without '=' at line " +
                                          std::to_string(i + 1));
                }
                r.conditions.push_back({std::string(cond.substr(0, eq)), std::string(cond.substr(eq + 1))});
                if (j == std::string_view::npos) break;
                body.remove_prefix(j + kJoiner.size());
            }
        }
        if (i + 1 >= lines.size() || !lines[i + 1].starts_with(" ")) {
            throw ValidationError("rules: missing consequent after line " + std::to_string(i + 1));
        }
        r.consequent = lines[i + 1].substr(1);
        ++i;
        rules.push_back(std::move(r));
    }
    return rules;
}

json rules_to_json(const std::vector<Rule>& rules)
{
    json out = json::array();
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const auto& r = rules[i];
        json conds = json::array();
        for (const auto& c : r.conditions) conds.push_back({{"attribute", c.attribute}, {"level", c.level}});
        out.push_back({{"number", i + 1},
                       {"conditions", std::move(conds)},
                       {"consequent", r.consequent},
                       {"support", r.support},
                       {"confidence", r.confidence},
                       {"backoff", r.backoff}});
    }
    return out;
}

RuleMatch classify_rule(const RuleTree& tree, RecordView record)
{
    const auto& schema = tree.schema();
    check_record(schema, record);
    const auto& nodes = tree.nodes();
    const auto& cls = schema.class_attribute();

    RuleMatch m;
    std::int32_t id = 0;
    while (true) {
        const auto& node = nodes[id];
        if (node.is_leaf()) {
            m.predicted = node.majority;
            m.rule.support = node.support;
            m.rule.confidence = node.support ? static_cast<double>(node.class_counts[node.majority]) /
                                                   static_cast<double>(node.support)
                                             : 0.0;
            break;
        }
        const auto& attr = schema[*node.split];
        const auto level = record[*node.split];
        m.rule.conditions.push_back({attr.name, attr.levels[level]});
        const auto child = node.children[level];
        if (child < 0) {
            m.predicted = node.majority;
            m.backoff = true;
            m.rule.backoff = true;
            break;
        }
        id = child;
    }
    m.rule.consequent = cls.levels[m.predicted];
    return m;
}

bool rule_matches(const AttributeSchema& schema, const Rule& rule, RecordView record)
{
    for (const auto& c : rule.conditions) {
        const auto a = schema.require_index(c.attribute);
        if (schema[a].levels[record[a]] != c.level) return false;
    }
    return true;
}

json RuleTree::to_json() const
{
    const auto& cls = schema_.class_attribute();
    std::function<json(std::int32_t)> node_json = [&](std::int32_t id) {
        const auto& n = nodes_[id];
        json j{{"support", n.support},
               {"class_counts", n.class_counts},
               {"class", cls.levels[n.majority]}};
        if (n.is_leaf()) {
            j["split"] = nullptr;
            return j;
        }
        const auto& attr = schema_[*n.split];
        j["split"] = attr.name;
        json children = json::array();
        for (std::size_t l = 0; l < n.children.size(); ++l) {
            if (n.children[l] < 0) continue;
            json c = node_json(n.children[l]);
            c["level"] = attr.levels[l];
            children.push_back(std::move(c));
        }
        j["children"] = std::move(children);
        return j;
    };
    return json{{"schema_hash", schema_.hash()},
                {"ordered_attrs", ordered_attrs_},
                {"root", node_json(0)}};
}

RuleTree RuleTree::from_json(const json& doc, const AttributeSchema& schema)
{
    try {
        if (doc.at("schema_hash").get<std::string>() != schema.hash()) {
            throw ValidationError("tree artifact was built against a different schema");
        }
        auto order = doc.at("ordered_attrs").get<std::vector<std::string>>();
        const auto& cls = schema.class_attribute();
        std::vector<TreeNode> nodes;
        std::function<std::int32_t(const json&, std::size_t)> read = [&](const json& j,
                                                                         std::size_t depth) {
            const auto id = static_cast<std::int32_t>(nodes.size());
            nodes.emplace_back();
            TreeNode n;
            n.depth = depth;
            n.support = j.at("support").get<std::uint64_t>();
            n.class_counts = j.at("class_counts").get<std::vector<std::uint64_t>>();
            if (n.class_counts.size() != cls.level_count()) {
                throw ValidationError("tree artifact: class_counts has the wrong length");
            }
            const auto majority = cls.level_index(j.at("class").get<std::string>());
            if (!majority) throw ValidationError("tree artifact: unknown class label");
            n.majority = *majority;
            if (!j.at("split").is_null()) {
                const auto a = schema.require_index(j.at("split").get<std::string>());
                if (depth >= order.size() || schema[a].name != order[depth]) {
                    throw ValidationError("tree artifact: split does not follow the attribute order");
                }
                n.split = a;
                n.children.assign(schema[a].level_count(), -1);
                for (const auto& c : j.at("children")) {
                    const auto level = schema[a].level_index(c.at("level").get<std::string>());
                    if (!level) throw ValidationError("tree artifact: unknown level in child");
                    const auto child = read(c, depth + 1);
                    n.children[*level] = child;
                }
            }
            nodes[id] = std::move(n);
            return id;
        };
        read(doc.at("root"), 0);
        return RuleTree(schema, std::move(order), std::move(nodes));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("tree artifact: ") + e.what());
    }
}

RuleTree RuleTree::load(const std::string& path, const AttributeSchema& schema)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open tree file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("tree file '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(doc, schema);
}

void RuleTree::save(const std::string& path) const
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write tree file '" + path + "'");
    out << to_json().dump() << '\n';
}

} // namespace ydss
