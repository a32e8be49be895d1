#pragma once

#include <cstdint>

#include "ydss/contingency.hpp"

namespace ydss {

struct ChiSquareResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    /// False when some expected count is below 5 (below 10 when df = 1).
    bool approximation_valid = true;
};

/// Pearson's X^2 test of independence on an r x c table.
/// Throws ValidationError on tables smaller than 2 x 2, an empty table, or
/// an all-zero row or column.
ChiSquareResult pearson_chi_square(const ContingencyTable& table);

/// Two-sided Fisher exact test on a 2 x 2 table: the total hypergeometric
/// probability of tables no more probable than the observed one (relative
/// tie tolerance 1e-7). Any zero margin gives p = 1.
double fisher_exact(const ContingencyTable& table);

inline constexpr std::uint64_t kDefaultFisherMaxTotal = 40;

/// Fisher-Freeman-Halton exact test by complete enumeration of all tables
/// with the observed margins. Rejects tables whose grand total exceeds
/// `max_total`; use pearson_chi_square for those.
double fisher_exact_rxc(const ContingencyTable& table,
                        std::uint64_t max_total = kDefaultFisherMaxTotal);

/// Relative tolerance applied when comparing table probabilities.
inline constexpr double kFisherTieTolerance = 1e-7;

} // namespace ydss
