#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mastudy/cross_section.hpp"
#include "mastudy/deal.hpp"
#include "mastudy/error.hpp"
#include "mastudy/market_data.hpp"
#include "mastudy/screening.hpp"

namespace mastudy::sim {

/// Deterministic random source. Stream s of seed k is a std::mt19937_64
/// seeded with splitmix64(k + s * 0x9E3779B97F4A7C15). Uniforms use the top
/// 53 bits, ((x >> 11) + 0.5) * 2^-53; normals come from Box-Muller pairs
/// (cos branch first). The sequence is identical on every conforming
/// platform.
class Rng {
public:
    Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed + stream * 0x9E3779B97F4A7C15ULL)) {}

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Integer in [lo, hi].
    long integer(long lo, long hi) {
        return lo + static_cast<long>(std::floor(uniform() * static_cast<double>(hi - lo + 1)));
    }
    bool bernoulli(double p) { return uniform() < p; }

    double normal() {
        if (spare_) {
            const double z = *spare_;
            spare_.reset();
            return z;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 2.0 * std::numbers::pi * uniform();
        spare_ = r * std::sin(theta);
        return r * std::cos(theta);
    }

    /// Student-t with integer dof, rescaled to unit variance (dof > 2).
    double student_t(int dof) {
        const double z = normal();
        double chi2 = 0.0;
        for (int i = 0; i < dof; ++i) {
            const double g = normal();
            chi2 += g * g;
        }
        return z / std::sqrt(chi2 / dof) * std::sqrt((dof - 2.0) / dof);
    }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

enum class Innovations { Normal, StudentT };

struct SimSpec {
    std::size_t n_firms = 100;
    std::size_t n_days = 750; // trading days with prices
    Date start_date{std::chrono::year{2004}, std::chrono::January, std::chrono::day{5}};
    double market_drift = 0.0003;
    double market_vol = 0.01;
    std::pair<double, double> alpha_range{-0.0005, 0.0005};
    std::pair<double, double> beta_range{0.5, 1.5};
    double idiosyncratic_vol = 0.02;
    Innovations innovations = Innovations::Normal;
    int student_dof = 4;
    double event_effect = 0.0;
    std::vector<long> event_offsets{0};
    /// Additional day-0 abnormal return per unit of a regressor, e.g.
    /// {"control*dm", 0.02}.
    std::vector<std::pair<std::string, double>> feature_effects;
    double control_fraction = 0.45;
    /// Mix of acquirer origins: developed, emerging, domestic.
    double dm_fraction = 0.4;
    double em_fraction = 0.15;
    double missing_transaction_value_fraction = 0.4;
    /// Share of deals built to fail one of the first seven sample criteria.
    double decoy_fraction = 0.0;
    long min_history = 200; // trading days of prices before day 0
    long post_event_days = 16;
    bool holidays = true;    // drop Jan 1 and Dec 25 from the calendar
    double weekend_announcement_fraction = 0.1;
    std::uint64_t seed = 42;

    void validate() const {
        if (market_vol < 0.0 || idiosyncratic_vol < 0.0) fail(ErrorKind::InvalidArgument, "volatilities must be >= 0");
        if (n_days < 250) fail(ErrorKind::InvalidArgument, "n_days must be at least 250");
        if (innovations == Innovations::StudentT && student_dof <= 2)
            fail(ErrorKind::InvalidArgument, "student dof must exceed 2");
        if (dm_fraction < 0.0 || em_fraction < 0.0 || dm_fraction + em_fraction > 1.0)
            fail(ErrorKind::InvalidArgument, "acquirer origin fractions must lie in [0,1] and sum to <= 1");
    }
};

inline constexpr std::string_view kMarketId = "MKT";
inline constexpr std::string_view kBenchmarkId = "MKT_INDEX";

struct SimMarket {
    TradingCalendar calendar;
    PriceSeries benchmark;
    std::vector<PriceSeries> firms;
    std::vector<double> firm_alpha;
    std::vector<double> firm_beta;
    /// Log returns before any event injection, index t = return from day t-1 to t.
    std::vector<double> market_returns;
    std::vector<std::vector<double>> firm_returns;
};

inline TradingCalendar simulated_calendar(const SimSpec& spec) {
    std::vector<Date> dates;
    Date d = spec.start_date;
    while (dates.size() < spec.n_days) {
        const bool holiday = spec.holidays && ((d.month() == std::chrono::January && d.day() == std::chrono::day{1}) ||
                                               (d.month() == std::chrono::December && d.day() == std::chrono::day{25}));
        if (!is_weekend(d) && !holiday) dates.push_back(d);
        d = add_days(d, 1);
    }
    return TradingCalendar(std::string(kMarketId), std::move(dates));
}

namespace detail {

inline PriceSeries prices_from_returns(const std::string& id, const TradingCalendar& calendar,
                                       const std::vector<double>& returns) {
    std::vector<PriceObservation> obs;
    obs.reserve(calendar.size());
    double log_price = 0.0;
    obs.push_back({calendar[0], 100.0});
    for (std::size_t t = 1; t < calendar.size(); ++t) {
        log_price += returns[t];
        obs.push_back({calendar[t], 100.0 * std::exp(log_price)});
    }
    return PriceSeries(id, std::move(obs));
}

inline std::string firm_id(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "FIRM%05zu", i + 1);
    return buf;
}

} // namespace detail

/// Market: i.i.d. normal(drift, vol^2) log returns. Firm i: alpha_i +
/// beta_i * market + idiosyncratic noise. Prices start at 100.
inline SimMarket generate_market(const SimSpec& spec) {
    spec.validate();
    SimMarket m;
    m.calendar = simulated_calendar(spec);
    const std::size_t n = spec.n_days;
    m.market_returns.assign(n, 0.0);
    Rng market_rng(spec.seed, 0);
    for (std::size_t t = 1; t < n; ++t) m.market_returns[t] = spec.market_drift + spec.market_vol * market_rng.normal();
    m.benchmark = detail::prices_from_returns(std::string(kBenchmarkId), m.calendar, m.market_returns);

    for (std::size_t i = 0; i < spec.n_firms; ++i) {
        Rng rng(spec.seed, i + 1);
        const double alpha = rng.uniform(spec.alpha_range.first, spec.alpha_range.second);
        const double beta = rng.uniform(spec.beta_range.first, spec.beta_range.second);
        std::vector<double> r(n, 0.0);
        for (std::size_t t = 1; t < n; ++t) {
            double noise = 0.0;
            if (spec.idiosyncratic_vol > 0.0)
                noise = spec.idiosyncratic_vol *
                        (spec.innovations == Innovations::Normal ? rng.normal() : rng.student_t(spec.student_dof));
            r[t] = alpha + beta * m.market_returns[t] + noise;
        }
        m.firm_alpha.push_back(alpha);
        m.firm_beta.push_back(beta);
        m.firms.push_back(detail::prices_from_returns(detail::firm_id(i), m.calendar, r));
        m.firm_returns.push_back(std::move(r));
    }
    return m;
}

struct SimTruth {
    std::size_t firm = 0;
    std::size_t day0_index = 0;
    double day0_shock = 0.0; // total injected at offset 0 including feature effects
};

struct SimSample {
    SimMarket market;
    std::vector<DealRecord> deals;
    std::map<std::string, std::string, std::less<>> benchmarks; // deal id -> benchmark id
    std::vector<SimTruth> truth;                                // parallel to deals
};

namespace detail {

inline const std::vector<std::string>& dm_nations() {
    static const std::vector<std::string> v{"Japan", "Singapore", "United States", "France", "Australia",
                                            "Korea, Rep.", "United Kingdom", "Taiwan, China", "Germany", "Netherlands"};
    return v;
}
inline const std::vector<std::string>& em_nations() {
    static const std::vector<std::string> v{"Malaysia", "Thailand", "Philippines", "Indonesia", "India",
                                            "Russian Federation"};
    return v;
}
inline const std::vector<std::string>& sic_pool() {
    static const std::vector<std::string> v{"0111", "2011", "2834", "3571", "3674", "4911", "4512",
                                            "5411", "5961", "6021", "6311", "7011", "7372", "8711"};
    return v;
}

} // namespace detail

/// Draws one deal per firm, injects the event shock into that firm's
/// returns around its announcement, and emits consistent deal records.
inline SimSample inject_events(SimMarket market, const SimSpec& spec) {
    const long n = static_cast<long>(spec.n_days);
    const long first_day0 = spec.min_history;
    const long last_day0 = n - 1 - spec.post_event_days;
    if (first_day0 < 1 || last_day0 < first_day0)
        fail(ErrorKind::EventTooEarly, "calendar of " + std::to_string(n) + " days leaves no room for " +
                                           std::to_string(spec.min_history) + " days of history");

    const auto classes = ClassTable::bundled();
    SimSample out;
    for (std::size_t i = 0; i < market.firms.size(); ++i) {
        Rng rng(spec.seed, (std::uint64_t{1} << 32) + i);
        const long day0 = rng.integer(first_day0, last_day0);
        const Date day0_date = market.calendar[static_cast<std::size_t>(day0)];

        DealRecord d;
        d.deal_id = "D" + detail::firm_id(i).substr(4);
        d.acquirer_id = market.firms[i].instrument_id();
        d.announcement_date = day0_date;
        const auto prev = market.calendar[static_cast<std::size_t>(day0 - 1)];
        if (rng.bernoulli(spec.weekend_announcement_fraction) &&
            std::chrono::sys_days{day0_date} - std::chrono::sys_days{prev} > std::chrono::days{1})
            d.announcement_date = add_days(prev, 1); // non-trading day; rolls forward to day0
        d.effective_date = add_days(day0_date, static_cast<int>(rng.integer(20, 120)));
        d.status = DealStatus::Completed;
        d.acquirer_public = true;
        d.target_nation = "Vietnam";
        d.clean_event = true;

        const double origin = rng.uniform();
        double cap_median = 40.0, tv_median = 1.5;
        if (origin < spec.dm_fraction) {
            d.acquirer_nation = detail::dm_nations()[static_cast<std::size_t>(rng.integer(0, 9))];
            cap_median = 3000.0;
            tv_median = 20.0;
        } else if (origin < spec.dm_fraction + spec.em_fraction) {
            d.acquirer_nation = detail::em_nations()[static_cast<std::size_t>(rng.integer(0, 5))];
            cap_median = 300.0;
            tv_median = 5.0;
        } else {
            d.acquirer_nation = "Vietnam";
        }

        const bool control = rng.bernoulli(spec.control_fraction);
        double after = 0.0;
        if (control) after = rng.bernoulli(0.3) ? 100.0 : std::round(rng.uniform(50.0, 99.0) * 10.0) / 10.0;
        else after = std::round(rng.uniform(5.0, 49.9) * 10.0) / 10.0;
        double before = 0.0;
        if (rng.bernoulli(0.25)) before = std::round(rng.uniform(0.1, std::min(after, 49.9)) * 10.0) / 10.0;
        d.pct_owned_before = before;
        d.pct_owned_after = after;
        d.pct_acquired = after - before;

        d.acquirer_sic = detail::sic_pool()[static_cast<std::size_t>(rng.integer(0, 13))];
        d.target_sic = rng.bernoulli(0.4) ? d.acquirer_sic.substr(0, 3) + std::to_string(rng.integer(0, 9))
                                          : detail::sic_pool()[static_cast<std::size_t>(rng.integer(0, 13))];
        d.target_public = !control && rng.bernoulli(0.3);
        d.acquirer_market_cap = std::round(cap_median * std::exp(1.2 * rng.normal()) * 1000.0) / 1000.0;
        const double tv = std::round(tv_median * std::exp(1.0 * rng.normal()) * 1000.0) / 1000.0;
        if (!rng.bernoulli(spec.missing_transaction_value_fraction)) d.transaction_value = tv;

        if (rng.bernoulli(spec.decoy_fraction)) {
            switch (rng.integer(0, 5)) {
            case 0: d.target_nation = "Cambodia"; break;
            case 1:
                d.status = DealStatus::Withdrawn;
                d.effective_date.reset();
                break;
            case 2: d.acquirer_public = false; break;
            case 3:
                d.pct_owned_before = 0.0;
                d.pct_owned_after = d.pct_acquired = 3.0;
                break;
            case 4:
                d.pct_owned_before = 55.0;
                d.pct_owned_after = 80.0;
                d.pct_acquired = 25.0;
                break;
            default: d.clean_event = false; break;
            }
        }

        double shock0 = spec.event_effect;
        if (!spec.feature_effects.empty()) {
            const int year = year_of(d.announcement_date);
            const auto features = derive_features(d, resolve_class(d.acquirer_nation, year, classes,
                                                                   ThresholdTable::bundled()));
            for (const auto& [term, coef] : spec.feature_effects)
                shock0 += coef * feature_value(features, term).value_or(0.0);
        }
        auto& r = market.firm_returns[i];
        for (long k : spec.event_offsets) {
            const long t = day0 + k;
            if (t >= 1 && t < n) r[static_cast<std::size_t>(t)] += (k == 0 ? shock0 : spec.event_effect);
        }
        if (std::find(spec.event_offsets.begin(), spec.event_offsets.end(), 0L) == spec.event_offsets.end() &&
            shock0 != spec.event_effect)
            r[static_cast<std::size_t>(day0)] += shock0 - spec.event_effect;
        market.firms[i] = detail::prices_from_returns(market.firms[i].instrument_id(), market.calendar, r);

        out.benchmarks[d.deal_id] = std::string(kBenchmarkId);
        out.truth.push_back({i, static_cast<std::size_t>(day0), shock0});
        out.deals.push_back(std::move(d));
    }
    out.market = std::move(market);
    return out;
}

inline SimSample simulate(const SimSpec& spec) { return inject_events(generate_market(spec), spec); }

} // namespace mastudy::sim
