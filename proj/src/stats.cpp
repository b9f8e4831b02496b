#include "mcudi/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace mcudi {

namespace {

constexpr int kMaxSeriesTerms = 100;
constexpr double kSeriesTol = 1e-12;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

double kolmogorov_sf(double t) {
    if (t <= 0.0) return 1.0;
    constexpr double pi = std::numbers::pi;
    if (t < 1.18) {
        // Jacobi theta form of the CDF; converges fast for small t where the
        // alternating series does not.
        double sum = 0.0;
        for (int k = 1; k <= kMaxSeriesTerms; ++k) {
            const double odd = 2.0 * k - 1.0;
            const double term = std::exp(-odd * odd * pi * pi / (8.0 * t * t));
            sum += term;
            if (term < kSeriesTol) break;
        }
        return clamp01(1.0 - std::sqrt(2.0 * pi) / t * sum);
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= kMaxSeriesTerms; ++k) {
        const double term = 2.0 * std::exp(-2.0 * k * k * t * t);
        sum += sign * term;
        sign = -sign;
        if (term < kSeriesTol) break;
    }
    return clamp01(sum);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw DataError("ks_two_sample: empty sample");
    for (double v : a)
        if (!std::isfinite(v)) throw DataError("ks_two_sample: non-finite value");
    for (double v : b)
        if (!std::isfinite(v)) throw DataError("ks_two_sample: non-finite value");

    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const auto na = static_cast<double>(sa.size());
    const auto nb = static_cast<double>(sb.size());

    // Walk the sorted union; at each distinct point consume every tied value
    // from both samples before evaluating the ECDF difference.
    double stat = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < sa.size() || ib < sb.size()) {
        double x;
        if (ib >= sb.size() || (ia < sa.size() && sa[ia] <= sb[ib])) {
            x = sa[ia];
        } else {
            x = sb[ib];
        }
        while (ia < sa.size() && sa[ia] == x) ++ia;
        while (ib < sb.size() && sb[ib] == x) ++ib;
        const double diff =
            std::fabs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb);
        if (diff > stat) stat = diff;
    }

    KsResult r;
    r.statistic = stat;
    r.n_a = sa.size();
    r.n_b = sb.size();
    const double n_eff = na * nb / (na + nb);
    r.p_value = stat == 0.0 ? 1.0 : kolmogorov_sf(std::sqrt(n_eff) * stat);
    return r;
}

std::optional<double> drift_severity(double eps_train, double eps_test) {
    if (eps_train == 0.0) return std::nullopt;
    return (eps_test - eps_train) / eps_train;
}

ZTestResult z_test_two_proportion(double eps_train, double eps_test,
                                  std::size_t n_train, std::size_t n_test,
                                  double alpha) {
    if (eps_train < 0.0 || eps_train > 1.0 || eps_test < 0.0 || eps_test > 1.0)
        throw DataError("z_test_two_proportion: error rates must lie in [0, 1]");
    if (n_train < 1 || n_test < 1)
        throw DataError("z_test_two_proportion: sample sizes must be >= 1");

    ZTestResult r;
    r.severity = drift_severity(eps_train, eps_test);
    const auto nt = static_cast<double>(n_train);
    const auto ns = static_cast<double>(n_test);
    r.pooled_error = (eps_train * nt + eps_test * ns) / (nt + ns);

    if (r.pooled_error <= 0.0 || r.pooled_error >= 1.0) {
        // Zero pooled variance: no statistical evidence either way.
        r.z = 0.0;
        r.p_value = 1.0;
        r.p_one_sided = 0.5;
        r.degenerate = true;
        r.drift = false;
        return r;
    }

    const double denom =
        std::sqrt(r.pooled_error * (1.0 - r.pooled_error) * (1.0 / nt + 1.0 / ns));
    r.z = (eps_test - eps_train) / denom;
    r.p_value = std::erfc(std::fabs(r.z) / std::numbers::sqrt2);
    r.p_one_sided = normal_sf(r.z);
    r.drift = r.p_value < alpha && eps_test > eps_train;
    return r;
}

}  // namespace mcudi
