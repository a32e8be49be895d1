#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance runner. Deliberately naive: long double, full enumeration.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ydss/contingency.hpp"
#include "ydss/dataset.hpp"
#include "ydss/model_spec.hpp"
#include "ydss/rng.hpp"
#include "ydss/schema.hpp"

namespace ydss::testing {

using Counts = std::vector<std::vector<std::uint64_t>>;

inline long double factorial(std::uint64_t n)
{
    long double f = 1;
    for (std::uint64_t k = 2; k <= n; ++k) f *= static_cast<long double>(k);
    return f;
}

// Enumerates every table with the given margins row by row and sums the
// multivariate hypergeometric probabilities no larger than the observed one.
inline double fisher_oracle(const Counts& obs)
{
    const std::size_t r = obs.size(), c = obs[0].size();
    std::vector<std::uint64_t> rows(r, 0), cols(c, 0);
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            rows[i] += obs[i][j];
            cols[j] += obs[i][j];
            n += obs[i][j];
        }
    }
    long double num = 1;
    for (auto v : rows) num *= factorial(v);
    for (auto v : cols) num *= factorial(v);
    num /= factorial(n);
    auto prob = [&](const Counts& t) {
        long double den = 1;
        for (const auto& row : t) {
            for (auto v : row) den *= factorial(v);
        }
        return num / den;
    };
    const long double p_obs = prob(obs);
    long double total = 0;
    Counts t(r, std::vector<std::uint64_t>(c, 0));
    std::vector<std::uint64_t> left = cols;
    std::function<void(std::size_t, std::size_t, std::uint64_t)> fill =
        [&](std::size_t i, std::size_t j, std::uint64_t remaining) {
            if (i == r) {
                const long double p = prob(t);
                if (p <= p_obs * (1 + 1e-7L)) total += p;
                return;
            }
            if (j == c - 1) {
                if (remaining > left[j]) return;
                t[i][j] = remaining;
                left[j] -= remaining;
                if (i + 1 < r) {
                    fill(i + 1, 0, rows[i + 1]);
                } else if (std::all_of(left.begin(), left.end(), [](auto v) { return v == 0; })) {
                    fill(r, 0, 0);
                }
                left[j] += remaining;
                return;
            }
            for (std::uint64_t v = 0; v <= std::min(remaining, left[j]); ++v) {
                t[i][j] = v;
                left[j] -= v;
                fill(i, j + 1, remaining - v);
                left[j] += v;
            }
        };
    fill(0, 0, rows[0]);
    return static_cast<double>(std::min<long double>(total, 1));
}

inline double pearson_oracle(const Counts& obs)
{
    long double n = 0;
    std::vector<long double> rows(obs.size(), 0), cols(obs[0].size(), 0);
    for (std::size_t i = 0; i < obs.size(); ++i) {
        for (std::size_t j = 0; j < obs[0].size(); ++j) {
            rows[i] += obs[i][j];
            cols[j] += obs[i][j];
            n += obs[i][j];
        }
    }
    long double s = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        for (std::size_t j = 0; j < obs[0].size(); ++j) {
            const long double e = rows[i] * cols[j] / n;
            s += (obs[i][j] - e) * (obs[i][j] - e) / e;
        }
    }
    return static_cast<double>(s);
}

// Random r x c counts with no empty row or column.
inline Counts random_counts(XorShift64Star& rng, std::size_t r, std::size_t c, std::uint64_t max_cell)
{
    for (;;) {
        Counts t(r, std::vector<std::uint64_t>(c));
        for (auto& row : t) {
            for (auto& v : row) v = rng.below(max_cell + 1);
        }
        const auto table = ContingencyTable::from_counts(t);
        bool ok = table.total() > 0;
        for (std::size_t i = 0; i < r; ++i) ok = ok && table.row_total(i) > 0;
        for (std::size_t j = 0; j < c; ++j) ok = ok && table.col_total(j) > 0;
        if (ok) return t;
    }
}

// per_level[level of A][class] -> count; one predictor A.
inline Dataset counts_dataset(const AttributeSchema& s, const std::vector<std::vector<int>>& per_level)
{
    Dataset d(s);
    for (std::size_t a = 0; a < per_level.size(); ++a) {
        for (std::size_t k = 0; k < per_level[a].size(); ++k) {
            for (int i = 0; i < per_level[a][k]; ++i) {
                const std::vector<LevelIndex> r{static_cast<LevelIndex>(a), static_cast<LevelIndex>(k)};
                d.add(r);
            }
        }
    }
    return d;
}

// Some main effects and maybe one interaction over a small schema.
inline ModelSpec random_spec(const AttributeSchema& s, XorShift64Star& rng)
{
    std::vector<ModelTerm> terms;
    const auto preds = s.predictor_indices();
    for (auto a : preds) {
        if (rng.uniform() < 0.6) terms.push_back(ModelTerm::main(s[a].name));
    }
    if (preds.size() >= 2 && rng.uniform() < 0.5) {
        terms.push_back(ModelTerm::interaction(s[preds[0]].name, s[preds[1]].name));
    }
    return ModelSpec(s, terms);
}

inline const char* const kRuleOneText =
    "Rule 1: Type of Activity=Permanently Employed ^ Educational Level=No Schooling/Grade 1-5 ^ "
    "Province=Western ^ Gender=Male ^ Social Class=Middle Class ^ Age Group=20-24 yrs\n"
    " No Desire\n";

inline const std::vector<std::string> kRuleOneOrder{"Type of Activity", "Educational Level", "Province",
                                                    "Gender", "Social Class", "Age Group"};

inline std::vector<LevelIndex> rule_one_record(const AttributeSchema& s)
{
    const std::pair<const char*, const char*> values[] = {
        {"Type of Activity", "Permanently Employed"},
        {"Educational Level", "No Schooling/Grade 1-5"},
        {"Province", "Western"},
        {"Gender", "Male"},
        {"Social Class", "Middle Class"},
        {"Age Group", "20-24 yrs"},
        {"Financial Situation in Past", "Same"},
        {"Major Problems with Education", "No Problems"},
        {"Type of Further Education Desire", "No Desire"}};
    std::vector<LevelIndex> r(s.size());
    for (const auto& [a, l] : values) {
        const auto i = s.require_index(a);
        r[i] = *s[i].level_index(l);
    }
    return r;
}

} // namespace ydss::testing
