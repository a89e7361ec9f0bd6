#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "mastudy/date.hpp"
#include "mastudy/market_data.hpp"

namespace testing_support {

using namespace mastudy;

inline Date d(const char* text) { return parse_date(text); }

/// Weekdays starting at `start`.
inline std::vector<Date> weekdays(const Date& start, std::size_t n) {
    std::vector<Date> out;
    for (Date x = start; out.size() < n; x = add_days(x, 1))
        if (!is_weekend(x)) out.push_back(x);
    return out;
}

inline TradingCalendar calendar(std::size_t n, const char* start = "2010-01-04", const std::string& id = "MKT") {
    return TradingCalendar(id, weekdays(d(start), n));
}

/// Prices from log returns r[1..] starting at 100.
inline PriceSeries prices(const std::string& id, const TradingCalendar& cal, const std::vector<double>& r) {
    std::vector<PriceObservation> obs;
    double lp = 0.0;
    for (std::size_t t = 0; t < cal.size(); ++t) {
        if (t > 0) lp += r[t];
        obs.push_back({cal[t], 100.0 * std::exp(lp)});
    }
    return PriceSeries(id, obs);
}

/// Deterministic pseudo-noise in (-0.5, 0.5) without an RNG dependency.
inline double wiggle(std::size_t i, double salt = 0.0) {
    const double x = std::sin(12.9898 * static_cast<double>(i) + 78.233 * salt) * 43758.5453;
    return x - std::floor(x) - 0.5;
}

} // namespace testing_support
