#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "mastudy/error.hpp"
#include "mastudy/event_engine.hpp"

namespace mastudy {

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// P(T <= t) for Student's t with `dof` degrees of freedom.
inline double student_t_cdf(double t, double dof) {
    if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    if (!(dof > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return boost::math::cdf(boost::math::students_t_distribution<double>(dof), t);
}

enum class Tail { One, Two };

inline std::string_view to_string(Tail t) { return t == Tail::One ? "one-tail" : "two-tail"; }

struct TTestResult {
    double statistic = 0.0;
    double dof = 0.0;
    double p_one_tail = 0.5; // upper tail, P(T >= statistic)
    double p_two_tail = 1.0;
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;

    /// One-tailed p in the direction of the observed sign.
    double p_directional() const { return std::min(p_one_tail, 1.0 - p_one_tail); }
    double p(Tail tail) const { return tail == Tail::One ? p_directional() : p_two_tail; }
};

namespace detail {

inline void fill_t_p(TTestResult& r) {
    if (std::isnan(r.statistic)) {
        r.p_one_tail = r.p_two_tail = std::numeric_limits<double>::quiet_NaN();
        return;
    }
    r.p_one_tail = 1.0 - student_t_cdf(r.statistic, r.dof);
    r.p_two_tail = std::min(1.0, 2.0 * std::min(r.p_one_tail, 1.0 - r.p_one_tail));
}

} // namespace detail

struct BrownWarnerOptions {
    /// Use the printed 1/131 mean and 1/130 variance constants instead of
    /// the actual estimation day count.
    bool strict_literal = false;
};

/// Estimation-period variance of one deal's residuals. Default divisors are
/// n-1 for the mean and n-2 for the sum of squares; strict mode uses 131/130.
inline double estimation_variance(const MarketModelFit& fit, const BrownWarnerOptions& options = {}) {
    const auto& e = fit.est_residuals;
    if (e.empty() && fit.n_est >= 3) {
        // Fit restored from a cars table: residuals sum to zero, so the
        // stored n-2 variance determines either divisor convention.
        const double ssr = fit.residual_variance * (static_cast<double>(fit.n_est) - 2.0);
        return ssr / (options.strict_literal ? 130.0 : static_cast<double>(fit.n_est) - 2.0);
    }
    if (e.size() < 3) fail(ErrorKind::MissingResiduals, "fit carries fewer than 3 estimation residuals");
    const double n = static_cast<double>(e.size());
    const double mean_div = options.strict_literal ? 131.0 : n - 1.0;
    const double var_div = options.strict_literal ? 130.0 : n - 2.0;
    const double mean = std::accumulate(e.begin(), e.end(), 0.0) / mean_div;
    double ss = 0.0;
    for (double v : e) ss += (v - mean) * (v - mean);
    return ss / var_div;
}

/// Brown-Warner test of the cross-sectional mean CAR, with each deal's
/// variance taken from its estimation residuals and scaled by the window
/// length. Reference distribution: t with (smallest n_est - 2) dof.
inline TTestResult brown_warner_t(std::span<const double> cars, std::span<const MarketModelFit> fits,
                                  long window_length, const BrownWarnerOptions& options = {}) {
    if (cars.size() != fits.size()) fail(ErrorKind::InvalidArgument, "CARs and fits differ in length");
    if (cars.size() < 2) fail(ErrorKind::EmptySample, "Brown-Warner t needs at least 2 deals");
    if (window_length < 1) fail(ErrorKind::InvalidArgument, "window length must be positive");
    const double n = static_cast<double>(cars.size());
    double var_sum = 0.0;
    std::size_t min_est = std::numeric_limits<std::size_t>::max();
    for (const auto& fit : fits) {
        var_sum += static_cast<double>(window_length) * estimation_variance(fit, options);
        min_est = std::min(min_est, fit.est_residuals.empty() ? fit.n_est : fit.est_residuals.size());
    }
    TTestResult r;
    r.n = cars.size();
    r.mean = std::accumulate(cars.begin(), cars.end(), 0.0) / n;
    r.std_error = std::sqrt(var_sum) / n;
    r.dof = options.strict_literal ? 130.0 : static_cast<double>(min_est) - 2.0;
    if (r.mean == 0.0) r.statistic = 0.0;
    else if (r.std_error == 0.0) r.statistic = std::copysign(std::numeric_limits<double>::infinity(), r.mean);
    else r.statistic = r.mean / r.std_error;
    detail::fill_t_p(r);
    return r;
}

/// Same test taking each deal's per-day ARs over the tested window.
inline TTestResult brown_warner_t(const std::vector<std::vector<double>>& event_ars,
                                  std::span<const MarketModelFit> fits, const BrownWarnerOptions& options = {}) {
    if (event_ars.empty()) fail(ErrorKind::EmptySample, "no deals");
    std::vector<double> cars;
    const std::size_t length = event_ars.front().size();
    for (const auto& ars : event_ars) {
        if (ars.size() != length || length == 0)
            fail(ErrorKind::InvalidArgument, "every deal needs the same non-empty set of tested offsets");
        cars.push_back(std::accumulate(ars.begin(), ars.end(), 0.0));
    }
    return brown_warner_t(cars, fits, static_cast<long>(length), options);
}

/// One-sample t of the mean against zero, dof = N - 1.
inline TTestResult cross_sectional_t(std::span<const double> values) {
    if (values.size() < 2) fail(ErrorKind::EmptySample, "cross-sectional t needs at least 2 values");
    const double n = static_cast<double>(values.size());
    TTestResult r;
    r.n = values.size();
    r.dof = n - 1.0;
    r.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    const bool identical = std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; });
    if (identical) {
        // ZeroVariance: infinite statistic for a nonzero constant sample
        r.std_error = 0.0;
        r.mean = values[0];
        r.statistic = values[0] == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), values[0]);
    } else {
        r.statistic = r.mean / r.std_error;
    }
    detail::fill_t_p(r);
    return r;
}

enum class RankMethod { SignedRank, RankSum };

inline std::string_view to_string(RankMethod m) { return m == RankMethod::SignedRank ? "signed-rank" : "rank-sum"; }

struct RankTestResult {
    double statistic = 0.0;  // W+ for signed-rank, U of the first sample for rank-sum
    double p_one_tail = 1.0; // in the direction of the observed deviation
    double p_two_tail = 1.0;
    RankMethod method = RankMethod::SignedRank;
    bool exact = true;
    std::size_t n = 0; // non-zero differences, or n_a + n_b
    double p_value() const { return p_two_tail; }
};

inline constexpr std::size_t kSignedRankExactMax = 25;
inline constexpr std::size_t kRankSumExactMax = 20;

/// Midranks (1-based) of `values`; ties share the average rank.
inline std::vector<double> midranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
        const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

namespace detail {

inline double tie_term(std::span<const double> sorted_keys) {
    double sum = 0.0;
    for (std::size_t i = 0; i < sorted_keys.size();) {
        std::size_t j = i;
        while (j + 1 < sorted_keys.size() && sorted_keys[j + 1] == sorted_keys[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        sum += t * t * t - t;
        i = j + 1;
    }
    return sum;
}

} // namespace detail

/// Wilcoxon signed-rank test of `values` against a hypothesized median.
/// Exact null distribution for up to 25 non-zero differences, otherwise the
/// normal approximation with continuity and tie corrections.
inline RankTestResult wilcoxon_signed_rank(std::span<const double> values, double hypothesized_median = 0.0) {
    std::vector<double> diffs, abs_diffs;
    for (double v : values) {
        const double d = v - hypothesized_median;
        if (d != 0.0) {
            diffs.push_back(d);
            abs_diffs.push_back(std::fabs(d));
        }
    }
    if (diffs.empty()) fail(ErrorKind::EmptySample, "all values equal the hypothesized median");
    const auto ranks = midranks(abs_diffs);
    const std::size_t n = diffs.size();

    RankTestResult r;
    r.method = RankMethod::SignedRank;
    r.n = n;
    double w_plus = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (diffs[i] > 0) w_plus += ranks[i];
    r.statistic = w_plus;

    double p_upper = 0.0, p_lower = 0.0;
    if (n <= kSignedRankExactMax) {
        // Doubled midranks are integers; count sign patterns by doubled W+.
        std::vector<int> doubled(n);
        int total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
            total += doubled[i];
        }
        std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
        count[0] = 1.0;
        int reach = 0;
        for (int d : doubled) {
            for (int s = reach; s >= 0; --s)
                if (count[static_cast<std::size_t>(s)] != 0.0) count[static_cast<std::size_t>(s + d)] += count[static_cast<std::size_t>(s)];
            reach += d;
        }
        const int observed = static_cast<int>(std::lround(2.0 * w_plus));
        const double patterns = std::ldexp(1.0, static_cast<int>(n));
        for (int s = 0; s <= total; ++s) {
            if (s >= observed) p_upper += count[static_cast<std::size_t>(s)];
            if (s <= observed) p_lower += count[static_cast<std::size_t>(s)];
        }
        p_upper /= patterns;
        p_lower /= patterns;
        r.exact = true;
    } else {
        std::vector<double> sorted = abs_diffs;
        std::sort(sorted.begin(), sorted.end());
        const double nn = static_cast<double>(n);
        const double mean = nn * (nn + 1.0) / 4.0;
        const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - detail::tie_term(sorted) / 48.0;
        const double sd = std::sqrt(var);
        p_upper = 1.0 - normal_cdf((w_plus - mean - 0.5) / sd);
        p_lower = normal_cdf((w_plus - mean + 0.5) / sd);
        r.exact = false;
    }
    r.p_one_tail = std::min({p_upper, p_lower, 1.0});
    r.p_two_tail = std::min(1.0, 2.0 * r.p_one_tail);
    return r;
}

/// Wilcoxon rank-sum (Mann-Whitney U) for two independent samples. Exact
/// null distribution by subset enumeration when n_a + n_b <= 20.
inline RankTestResult wilcoxon_rank_sum(std::span<const double> sample_a, std::span<const double> sample_b) {
    if (sample_a.empty() || sample_b.empty()) fail(ErrorKind::EmptySample, "rank-sum needs two non-empty samples");
    std::vector<double> combined(sample_a.begin(), sample_a.end());
    combined.insert(combined.end(), sample_b.begin(), sample_b.end());
    const auto ranks = midranks(combined);
    const std::size_t na = sample_a.size(), nb = sample_b.size(), n = na + nb;

    double rank_sum_a = 0.0;
    for (std::size_t i = 0; i < na; ++i) rank_sum_a += ranks[i];
    const double u_offset = static_cast<double>(na) * (static_cast<double>(na) + 1.0) / 2.0;

    RankTestResult r;
    r.method = RankMethod::RankSum;
    r.n = n;
    r.statistic = rank_sum_a - u_offset;

    double p_upper = 0.0, p_lower = 0.0;
    if (n <= kRankSumExactMax) {
        std::vector<int> doubled(n);
        int total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
            total += doubled[i];
        }
        // count[k][s]: subsets of size k whose doubled ranks sum to s
        std::vector<std::vector<double>> count(na + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
        count[0][0] = 1.0;
        for (int d : doubled)
            for (std::size_t k = na; k >= 1; --k)
                for (int s = total - d; s >= 0; --s)
                    if (count[k - 1][static_cast<std::size_t>(s)] != 0.0)
                        count[k][static_cast<std::size_t>(s + d)] += count[k - 1][static_cast<std::size_t>(s)];
        const int observed = static_cast<int>(std::lround(2.0 * rank_sum_a));
        double subsets = 0.0;
        for (int s = 0; s <= total; ++s) {
            const double c = count[na][static_cast<std::size_t>(s)];
            subsets += c;
            if (s >= observed) p_upper += c;
            if (s <= observed) p_lower += c;
        }
        p_upper /= subsets;
        p_lower /= subsets;
        r.exact = true;
    } else {
        std::vector<double> sorted = combined;
        std::sort(sorted.begin(), sorted.end());
        const double a = static_cast<double>(na), b = static_cast<double>(nb), nn = static_cast<double>(n);
        const double mean = a * b / 2.0;
        const double var = a * b / 12.0 * ((nn + 1.0) - detail::tie_term(sorted) / (nn * (nn - 1.0)));
        if (var <= 0.0) {
            p_upper = p_lower = 1.0;
        } else {
            const double sd = std::sqrt(var);
            p_upper = 1.0 - normal_cdf((r.statistic - mean - 0.5) / sd);
            p_lower = normal_cdf((r.statistic - mean + 0.5) / sd);
        }
        r.exact = false;
    }
    r.p_one_tail = std::min({p_upper, p_lower, 1.0});
    r.p_two_tail = std::min(1.0, 2.0 * r.p_one_tail);
    return r;
}

struct DistributionStats {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double top_quartile = 0.0;
    double bottom_quartile = 0.0;
    double std_dev = 0.0; // sample standard deviation (n - 1); 0 when n == 1
    std::optional<double> skewness; // m3 / m2^1.5, needs n >= 3 and m2 > 0
    std::optional<double> kurtosis; // m4 / m2^2 (normal = 3), needs n >= 4 and m2 > 0
};

/// Linear interpolation between closest ranks: position (n - 1) * q.
inline double quantile_inclusive(std::span<const double> sorted, double q) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Summary moments and quartiles. An empty sample yields n = 0 with NaN
/// location fields.
inline DistributionStats distribution_stats(std::span<const double> values) {
    DistributionStats s;
    s.n = values.size();
    if (values.empty()) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        s.mean = s.median = s.top_quartile = s.bottom_quartile = s.std_dev = nan;
        return s;
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    s.median = quantile_inclusive(sorted, 0.5);
    s.bottom_quartile = quantile_inclusive(sorted, 0.25);
    s.top_quartile = quantile_inclusive(sorted, 0.75);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    s.std_dev = values.size() > 1 ? std::sqrt(m2 / (n - 1.0)) : 0.0;
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0.0) {
        if (values.size() >= 3) s.skewness = m3 / std::pow(m2, 1.5);
        if (values.size() >= 4) s.kurtosis = m4 / (m2 * m2);
    }
    return s;
}

struct NormalityResult {
    double statistic = 0.0; // K^2 = z_skew^2 + z_kurt^2
    double p_value = 1.0;   // chi-squared with 2 dof
    double z_skewness = 0.0;
    double z_kurtosis = 0.0;
};

/// D'Agostino-Pearson omnibus test: D'Agostino's skewness transform plus
/// the Anscombe-Glynn kurtosis transform.
inline NormalityResult normality_test(std::span<const double> values) {
    if (values.size() < 8) fail(ErrorKind::SampleTooSmall, "normality test needs at least 8 observations");
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) fail(ErrorKind::InvalidArgument, "normality test on a constant sample");
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2);

    NormalityResult r;
    {
        const double y = skew * std::sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)));
        const double beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0) /
                             ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
        const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
        const double delta = 1.0 / std::sqrt(0.5 * std::log(w2));
        const double alpha = std::sqrt(2.0 / (w2 - 1.0));
        const double ya = y / alpha;
        r.z_skewness = delta * std::log(ya + std::sqrt(ya * ya + 1.0));
    }
    {
        const double expected = 3.0 * (n - 1.0) / (n + 1.0);
        const double var = 24.0 * n * (n - 2.0) * (n - 3.0) / ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0));
        const double x = (kurt - expected) / std::sqrt(var);
        const double sqrt_beta1 = 6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0)) *
                                  std::sqrt(6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0)));
        const double a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + std::sqrt(1.0 + 4.0 / (sqrt_beta1 * sqrt_beta1)));
        const double term1 = 1.0 - 2.0 / (9.0 * a);
        const double denom = 1.0 + x * std::sqrt(2.0 / (a - 4.0));
        const double term2 = std::cbrt((1.0 - 2.0 / a) / denom);
        r.z_kurtosis = (term1 - term2) / std::sqrt(2.0 / (9.0 * a));
    }
    r.statistic = r.z_skewness * r.z_skewness + r.z_kurtosis * r.z_kurtosis;
    r.p_value = std::exp(-0.5 * r.statistic);
    return r;
}

} // namespace mastudy
