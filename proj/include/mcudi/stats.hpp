/// @file stats.hpp
/// @brief Statistical primitives: two-sample Kolmogorov-Smirnov test,
///        two-proportion Z-test, and drift severity.
#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "mcudi/types.hpp"

namespace mcudi {

struct KsResult {
    double statistic = 0.0;  // sup |ECDF_a - ECDF_b| over the union of sample points
    double p_value = 1.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
};

/// Two-sample Kolmogorov-Smirnov test. The statistic is the exact supremum of
/// the ECDF difference evaluated at the sorted union of sample points, so tied
/// values across the samples are handled by construction. The p-value comes
/// from the asymptotic Kolmogorov distribution at effective size
/// n_a*n_b/(n_a+n_b). Throws DataError on empty or non-finite input.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Survival function P(K > t) of the Kolmogorov distribution. Series are
/// summed to 100 terms or a 1e-12 term tolerance, whichever comes first.
double kolmogorov_sf(double t);

/// Standard normal survival function P(N > z).
double normal_sf(double z);

struct ZTestResult {
    double z = 0.0;
    double p_value = 1.0;      // two-sided
    double p_one_sided = 0.5;  // P(Z > z); exposed because sidedness is a judgment call
    double pooled_error = 0.0;
    bool drift = false;        // p_value < alpha AND eps_test > eps_train
    bool degenerate = false;   // pooled error was 0 or 1: no variance, no evidence
    std::optional<double> severity;  // (eps_test - eps_train)/eps_train; empty if eps_train == 0
};

/// Two-proportion Z-test on a pair of error rates,
///   Z = (e_test - e_train) / sqrt(e(1-e)(1/n_train + 1/n_test))
/// with e the size-pooled overall error rate. A degenerate pooled error
/// (exactly 0 or 1) yields z = 0, p = 1 and the degenerate flag.
ZTestResult z_test_two_proportion(double eps_train, double eps_test,
                                  std::size_t n_train, std::size_t n_test,
                                  double alpha = 0.05);

/// Relative error-rate change (eps_test - eps_train)/eps_train.
/// Undefined (nullopt) when eps_train is 0.
std::optional<double> drift_severity(double eps_train, double eps_test);

}  // namespace mcudi
