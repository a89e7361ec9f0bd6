#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's solvers.

#include <cmath>
#include <cstddef>
#include <vector>

#include "mastudy/inference.hpp"

namespace oracles {

struct OlsOracle {
    std::vector<double> beta, se;
    double r_squared = 0.0;
    double s2 = 0.0;
};

/// Normal equations X'X b = X'y, inverted by Gauss-Jordan with partial
/// pivoting in long double. `x` is row-major with the intercept column
/// included by the caller.
inline OlsOracle normal_equations(const std::vector<std::vector<double>>& x, const std::vector<double>& y) {
    const std::size_t n = x.size(), k = x[0].size();
    std::vector<std::vector<long double>> a(k, std::vector<long double>(2 * k, 0.0L));
    std::vector<long double> xty(k, 0.0L);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
            xty[p] += static_cast<long double>(x[i][p]) * y[i];
            for (std::size_t q = 0; q < k; ++q) a[p][q] += static_cast<long double>(x[i][p]) * x[i][q];
        }
    for (std::size_t p = 0; p < k; ++p) a[p][k + p] = 1.0L;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        const long double d = a[c][c];
        for (auto& v : a[c]) v /= d;
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c) continue;
            const long double f = a[r][c];
            for (std::size_t j = 0; j < 2 * k; ++j) a[r][j] -= f * a[c][j];
        }
    }
    OlsOracle out;
    std::vector<long double> b(k, 0.0L);
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t q = 0; q < k; ++q) b[p] += a[p][k + q] * xty[q];
    long double ssr = 0.0L, mean = 0.0L, sst = 0.0L;
    for (double v : y) mean += v;
    mean /= static_cast<long double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        long double fit = 0.0L;
        for (std::size_t p = 0; p < k; ++p) fit += b[p] * x[i][p];
        ssr += (y[i] - fit) * (y[i] - fit);
        sst += (y[i] - mean) * (y[i] - mean);
    }
    const long double s2 = ssr / static_cast<long double>(n - k);
    out.s2 = static_cast<double>(s2);
    out.r_squared = static_cast<double>(1.0L - ssr / sst);
    for (std::size_t p = 0; p < k; ++p) {
        out.beta.push_back(static_cast<double>(b[p]));
        out.se.push_back(static_cast<double>(std::sqrt(s2 * a[p][k + p])));
    }
    return out;
}

struct Tails {
    double lower, upper;
};

/// Enumerates all 2^n sign patterns of the midranks of |values|, zeros
/// dropped.
inline Tails signed_rank(const std::vector<double>& values) {
    std::vector<double> d, a;
    for (double v : values)
        if (v != 0.0) {
            d.push_back(v);
            a.push_back(std::fabs(v));
        }
    const auto r = mastudy::midranks(a);
    double obs = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > 0) obs += r[i];
    double lo = 0, hi = 0;
    const std::size_t patterns = std::size_t{1} << d.size();
    for (std::size_t m = 0; m < patterns; ++m) {
        double w = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (m >> i & 1) w += r[i];
        if (w <= obs + 1e-9) ++lo;
        if (w >= obs - 1e-9) ++hi;
    }
    return {lo / static_cast<double>(patterns), hi / static_cast<double>(patterns)};
}

/// Enumerates all C(n, n_a) assignments of the pooled midranks to group a.
inline Tails rank_sum(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto r = mastudy::midranks(pooled);
    double obs = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) obs += r[i];
    double lo = 0, hi = 0, total = 0;
    const std::size_t n = pooled.size();
    for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
        if (static_cast<std::size_t>(__builtin_popcountll(m)) != a.size()) continue;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (m >> i & 1) s += r[i];
        ++total;
        if (s <= obs + 1e-9) ++lo;
        if (s >= obs - 1e-9) ++hi;
    }
    return {lo / total, hi / total};
}

} // namespace oracles
