#pragma once

#include "ptcop/common.hpp"

namespace ptcop {

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal quantile (Wichura's AS 241, double precision).
double normal_quantile(double p);

// Kolmogorov-Smirnov statistic of a sample against the uniform(0,1) CDF.
double ks_statistic_uniform(const Vector& sample);

// Asymptotic two-sided KS critical value at level alpha for sample size n:
// sqrt(-log(alpha/2) / 2) / sqrt(n).
double ks_critical_value(Index n, double alpha);

// Standard error of a binomial proportion estimate.
inline double binomial_se(double p_hat, Index n) {
    double v = p_hat * (1.0 - p_hat);
    if (v < 0.0) v = 0.0;
    return std::sqrt(v / static_cast<double>(n));
}

// Empirical CDF over a sorted copy of the data; quantile is the usual
// left-continuous inverse x_(ceil(p*n)).
class EmpiricalCdf {
  public:
    explicit EmpiricalCdf(Vector data);

    double cdf(double x) const;
    double quantile(double p) const;
    Index size() const { return sorted_.size(); }
    const Vector& sorted() const { return sorted_; }

  private:
    Vector sorted_;
};

}  // namespace ptcop
