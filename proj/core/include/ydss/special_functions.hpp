#pragma once

namespace ydss {

/// Natural log of the regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
/// Series for x < a + 1, modified Lentz continued fraction otherwise; both
/// stay in log space so results far below DBL_MIN remain finite.
double log_gamma_q(double a, double x);

/// Upper tail P(X > x) for X ~ chi-square(df). Exact 1 at x = 0.
double chi_square_sf(double x, int df);

/// log of chi_square_sf; finite even when the tail underflows a double.
double chi_square_log_sf(double x, int df);

} // namespace ydss
