#include "ydss/stat_tests.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "ydss/error.hpp"
#include "ydss/special_functions.hpp"

namespace ydss {

ChiSquareResult pearson_chi_square(const ContingencyTable& table)
{
    const std::size_t r = table.rows();
    const std::size_t c = table.cols();
    if (r < 2 || c < 2) throw ValidationError("chi-square test needs at least a 2 x 2 table");
    const double n = static_cast<double>(table.total());
    if (n == 0.0) throw ValidationError("chi-square test on an empty table");

    std::vector<double> row(r), col(c);
    for (std::size_t i = 0; i < r; ++i) {
        row[i] = static_cast<double>(table.row_total(i));
        if (row[i] == 0.0) {
            throw ValidationError("degenerate table: row '" + table.row_labels()[i] +
                                  "' has no observations");
        }
    }
    for (std::size_t j = 0; j < c; ++j) {
        col[j] = static_cast<double>(table.col_total(j));
        if (col[j] == 0.0) {
            throw ValidationError("degenerate table: column '" + table.col_labels()[j] +
                                  "' has no observations");
        }
    }

    ChiSquareResult res;
    res.df = static_cast<int>((r - 1) * (c - 1));
    const double min_expected = res.df == 1 ? 10.0 : 5.0;
    double stat = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            const double e = row[i] * col[j] / n;
            const double d = static_cast<double>(table.at(i, j)) - e;
            stat += d * d / e;
            if (e < min_expected) res.approximation_valid = false;
        }
    }
    res.statistic = stat;
    res.p_value = chi_square_sf(stat, res.df);
    return res;
}

namespace {

std::vector<double> log_factorials(std::uint64_t n)
{
    std::vector<double> lf(n + 1, 0.0);
    for (std::uint64_t k = 2; k <= n; ++k) lf[k] = lf[k - 1] + std::log(static_cast<double>(k));
    return lf;
}

bool at_most_as_probable(double log_p, double log_observed)
{
    return log_p <= log_observed + std::log1p(kFisherTieTolerance);
}

} // namespace

double fisher_exact(const ContingencyTable& table)
{
    if (table.rows() != 2 || table.cols() != 2) {
        throw ValidationError("fisher_exact needs a 2 x 2 table");
    }
    const std::uint64_t r0 = table.row_total(0), r1 = table.row_total(1);
    const std::uint64_t c0 = table.col_total(0), c1 = table.col_total(1);
    if (r0 == 0 || r1 == 0 || c0 == 0 || c1 == 0) return 1.0;
    const std::uint64_t n = r0 + r1;
    const auto lf = log_factorials(n);
    const double log_margins = lf[r0] + lf[r1] + lf[c0] + lf[c1] - lf[n];
    auto log_prob = [&](std::uint64_t a) {
        // a = count in cell (0,0); the rest of the table follows from the margins.
        return log_margins - lf[a] - lf[r0 - a] - lf[c0 - a] - lf[r1 - (c0 - a)];
    };

    const double observed = log_prob(table.at(0, 0));
    const std::uint64_t lo = c0 > r1 ? c0 - r1 : 0;
    const std::uint64_t hi = std::min(r0, c0);
    double p = 0.0;
    for (std::uint64_t a = lo; a <= hi; ++a) {
        const double lp = log_prob(a);
        if (at_most_as_probable(lp, observed)) p += std::exp(lp);
    }
    return std::min(p, 1.0);
}

double fisher_exact_rxc(const ContingencyTable& table, std::uint64_t max_total)
{
    const std::size_t r = table.rows();
    const std::size_t c = table.cols();
    if (r < 2 || c < 2) throw ValidationError("exact test needs at least a 2 x 2 table");
    const std::uint64_t n = table.total();
    if (n > max_total) {
        throw ValidationError("table total " + std::to_string(n) + " exceeds the exact-test limit " +
                              std::to_string(max_total) + "; use pearson_chi_square instead");
    }
    if (n == 0) return 1.0;

    const auto lf = log_factorials(n);
    std::vector<std::int64_t> row_rem(r), col_rem(c);
    double log_margins = -lf[n];
    for (std::size_t i = 0; i < r; ++i) {
        row_rem[i] = static_cast<std::int64_t>(table.row_total(i));
        log_margins += lf[row_rem[i]];
    }
    for (std::size_t j = 0; j < c; ++j) {
        col_rem[j] = static_cast<std::int64_t>(table.col_total(j));
        log_margins += lf[col_rem[j]];
    }
    double log_observed = log_margins;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) log_observed -= lf[table.at(i, j)];

    double p = 0.0;
    // Cells (i, j) with i < r-1 and j < c-1 are free; the last column of each
    // row and the whole last row are forced by the margins.
    std::function<void(std::size_t, std::size_t, double)> fill =
        [&](std::size_t i, std::size_t j, double acc) {
            if (i == r - 1) {
                double lp = acc;
                for (std::size_t jj = 0; jj < c; ++jj) lp -= lf[col_rem[jj]];
                if (at_most_as_probable(lp, log_observed)) p += std::exp(lp);
                return;
            }
            if (j == c - 1) {
                const std::int64_t v = row_rem[i];
                if (v > col_rem[c - 1]) return;
                col_rem[c - 1] -= v;
                fill(i + 1, 0, acc - lf[v]);
                col_rem[c - 1] += v;
                return;
            }
            std::int64_t capacity_after = 0;
            for (std::size_t jj = j + 1; jj < c; ++jj) capacity_after += col_rem[jj];
            const std::int64_t lo = std::max<std::int64_t>(0, row_rem[i] - capacity_after);
            const std::int64_t hi = std::min(row_rem[i], col_rem[j]);
            for (std::int64_t v = lo; v <= hi; ++v) {
                row_rem[i] -= v;
                col_rem[j] -= v;
                fill(i, j + 1, acc - lf[v]);
                row_rem[i] += v;
                col_rem[j] += v;
            }
        };
    fill(0, 0, log_margins);
    return std::min(p, 1.0);
}

} // namespace ydss
