#pragma once

namespace abcstar {

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

/// Regularized incomplete beta I_x(a, b).
double beta_inc(double a, double b, double x);

/// chi-square CDF, df >= 1. Throws std::domain_error for x < 0 or df < 1.
double chi2_cdf(double x, int df);

/// log density of the chi-square distribution.
double chi2_logpdf(double x, int df);

/// chi-square quantile, p in (0,1).
double chi2_quantile(double p, int df);

double normal_cdf(double x);
double normal_pdf(double x);

/// Standard normal quantile, p in (0,1).
double normal_quantile(double p);

/// Central Student-t CDF, df >= 1.
double student_t_cdf(double x, int df);

/// Noncentral Student-t CDF. Evaluated through the scale-mixture
/// representation T = (Z + ncp) / sqrt(W/df) by adaptive quadrature over
/// the chi contribution; ncp = 0 reduces to the central CDF.
double student_t_cdf(double x, int df, double ncp);

/// Central Student-t quantile.
double student_t_quantile(double p, int df);

/// P(X <= h, Y <= k) for standard bivariate normal with correlation r
/// (Drezner-Wesolowsky).
double bvn_cdf(double h, double k, double r);

/// P(lo1 <= X <= hi1, lo2 <= Y <= hi2), X,Y standard bivariate normal
/// with correlation r. Infinite bounds allowed.
double bvn_rect_prob(double lo1, double hi1, double lo2, double hi2, double r);

} // namespace abcstar
