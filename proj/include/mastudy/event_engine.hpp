#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mastudy/deal.hpp"
#include "mastudy/error.hpp"
#include "mastudy/market_data.hpp"

namespace mastudy {

struct EstimationConfig {
    long est_start_offset = -196;
    long est_end_offset = -65;
    std::size_t min_obs = 100;

    void validate() const {
        if (!(est_start_offset < est_end_offset && est_end_offset < 0))
            fail(ErrorKind::InvalidArgument, "estimation window must satisfy start < end < 0");
        if (min_obs < 3) fail(ErrorKind::InvalidArgument, "min_obs must be at least 3");
    }
};

enum class WindowFamily { Liquidity, Leakage, ThinTrading, Custom };

inline std::string_view to_string(WindowFamily f) {
    switch (f) {
    case WindowFamily::Liquidity: return "liquidity";
    case WindowFamily::Leakage: return "leakage";
    case WindowFamily::ThinTrading: return "thin-trading";
    case WindowFamily::Custom: return "custom";
    }
    return "custom";
}

struct EventWindow {
    long start = 0;
    long end = 0;
    WindowFamily family = WindowFamily::Custom;

    long length() const { return end - start + 1; }
    std::string label() const { return "(" + std::to_string(start) + "," + std::to_string(end) + ")"; }

    friend bool operator==(const EventWindow& a, const EventWindow& b) { return a.start == b.start && a.end == b.end; }
    friend bool operator<(const EventWindow& a, const EventWindow& b) {
        return a.start != b.start ? a.start < b.start : a.end < b.end;
    }
};

inline std::vector<EventWindow> liquidity_windows() {
    return {{0, 1, WindowFamily::Liquidity}, {-1, 1, WindowFamily::Liquidity}, {-2, 1, WindowFamily::Liquidity}};
}

inline std::vector<EventWindow> leakage_windows() {
    return {{-1, 0, WindowFamily::Leakage},
            {-2, 0, WindowFamily::Leakage},
            {-5, 0, WindowFamily::Leakage},
            {-10, -1, WindowFamily::Leakage},
            {-10, 0, WindowFamily::Leakage}};
}

inline std::vector<EventWindow> thin_trading_windows() {
    return {{-1, 5, WindowFamily::ThinTrading},
            {-1, 10, WindowFamily::ThinTrading},
            {2, 15, WindowFamily::ThinTrading},
            {-10, 10, WindowFamily::ThinTrading}};
}

/// All twelve windows of the three families, liquidity first.
inline std::vector<EventWindow> all_windows() {
    auto out = liquidity_windows();
    for (auto w : leakage_windows()) out.push_back(w);
    for (auto w : thin_trading_windows()) out.push_back(w);
    return out;
}

inline WindowFamily classify_window(long start, long end) {
    for (const auto& w : all_windows())
        if (w.start == start && w.end == end) return w.family;
    return WindowFamily::Custom;
}

/// Parses "start:end" items separated by commas, e.g. "0:1,-1:1,-2:1".
inline std::vector<EventWindow> parse_windows(const std::string& text) {
    std::vector<EventWindow> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            fail(ErrorKind::Parse, "window '" + item + "' must look like start:end");
        long start = 0, end = 0;
        try {
            std::size_t used = 0;
            start = std::stol(item.substr(0, colon), &used);
            if (used != colon) throw std::invalid_argument(item);
            const std::string tail = item.substr(colon + 1);
            end = std::stol(tail, &used);
            if (used != tail.size()) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            fail(ErrorKind::Parse, "window '" + item + "' must look like start:end");
        }
        if (start > end) fail(ErrorKind::Parse, "window '" + item + "' has start after end");
        out.push_back({start, end, classify_window(start, end)});
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) fail(ErrorKind::Parse, "empty window list");
    return out;
}

struct MarketModelFit {
    double alpha_hat = 0.0;
    double beta_hat = 0.0;
    double alpha_se = 0.0;
    double beta_se = 0.0;
    std::vector<double> est_residuals;
    double residual_variance = 0.0; // SSR / (n_est - 2)
    std::size_t n_est = 0;
};

/// Closed-form OLS of stock on market returns over the estimation window.
inline MarketModelFit fit_market_model(std::span<const double> stock, std::span<const double> market,
                                       const EstimationConfig& config = {}) {
    if (stock.size() != market.size())
        fail(ErrorKind::InvalidArgument, "stock and market estimation series differ in length");
    const std::size_t n = stock.size();
    if (n < config.min_obs || n < 3)
        fail(ErrorKind::InsufficientObservations,
             std::to_string(n) + " estimation observations, need " + std::to_string(std::max<std::size_t>(config.min_obs, 3)));

    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += market[i];
        mean_y += stock[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, sum_x2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = market[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (stock[i] - mean_y);
        sum_x2 += market[i] * market[i];
    }
    if (!(sxx > 1e-24 * sum_x2) || sxx == 0.0)
        fail(ErrorKind::DegenerateRegressor, "market returns have zero variance over the estimation window");

    MarketModelFit fit;
    fit.n_est = n;
    fit.beta_hat = sxy / sxx;
    fit.alpha_hat = mean_y - fit.beta_hat * mean_x;
    fit.est_residuals.resize(n);
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = stock[i] - (fit.alpha_hat + fit.beta_hat * market[i]);
        fit.est_residuals[i] = e;
        ssr += e * e;
    }
    fit.residual_variance = ssr / static_cast<double>(n - 2);
    fit.beta_se = std::sqrt(fit.residual_variance / sxx);
    fit.alpha_se = std::sqrt(fit.residual_variance * (1.0 / static_cast<double>(n) + mean_x * mean_x / sxx));
    return fit;
}

using AbnormalReturns = std::map<long, double>;

/// AR_t = R_stock,t - (alpha + beta * R_market,t) for every offset in
/// [start_offset, end_offset].
inline AbnormalReturns abnormal_returns(const ReturnSeries& stock, const ReturnSeries& market, const EventClock& clock,
                                        const MarketModelFit& fit, long start_offset, long end_offset) {
    AbnormalReturns out;
    for (long k = start_offset; k <= end_offset; ++k) {
        const auto date = clock.date_at(k);
        const auto rs = date ? stock.at(*date) : std::nullopt;
        const auto rm = date ? market.at(*date) : std::nullopt;
        if (!rs || !rm)
            fail(ErrorKind::MissingOffset, stock.instrument_id() + ": no " + (rs ? "market" : "stock") +
                                               " return at offset " + std::to_string(k));
        out[k] = *rs - (fit.alpha_hat + fit.beta_hat * *rm);
    }
    return out;
}

/// Plain sum of ARs over [start, end] in offset order.
inline double cumulative_abnormal_return(const AbnormalReturns& ars, const EventWindow& window) {
    double car = 0.0;
    for (long k = window.start; k <= window.end; ++k) {
        const auto it = ars.find(k);
        if (it == ars.end()) fail(ErrorKind::MissingOffset, "no abnormal return at offset " + std::to_string(k));
        car += it->second;
    }
    return car;
}

struct CarResult {
    std::string deal_id;
    Date day0;
    AbnormalReturns abnormal_returns;
    std::map<long, Date> ar_dates; // trading date of each kept offset
    std::vector<std::pair<EventWindow, double>> cars;
    MarketModelFit fit;

    std::optional<double> car(long start, long end) const {
        for (const auto& [w, v] : cars)
            if (w.start == start && w.end == end) return v;
        return std::nullopt;
    }
    std::optional<double> car(const EventWindow& w) const { return car(w.start, w.end); }
};

struct Exclusion {
    std::string deal_id;
    ErrorKind reason;
    std::string message;
};

struct StudyResult {
    std::vector<CarResult> results;    // sorted by deal_id
    std::vector<Exclusion> exclusions; // sorted by deal_id
};

/// Immutable inputs shared by every deal of a study.
struct MarketStore {
    std::map<std::string, PriceSeries, std::less<>> prices;
    /// Keyed by market_id. A deal uses the calendar keyed by its benchmark
    /// instrument id, else the only calendar present, else the benchmark's
    /// own trading dates.
    std::map<std::string, TradingCalendar, std::less<>> calendars;
};

struct StudyOptions {
    EstimationConfig config;
    std::vector<EventWindow> windows = liquidity_windows();
    /// Offsets whose ARs are kept in addition to the window union.
    std::vector<long> extra_offsets;
    unsigned threads = 1;
};

namespace detail {

inline TradingCalendar calendar_for(const MarketStore& store, const std::string& benchmark_id) {
    if (const auto it = store.calendars.find(benchmark_id); it != store.calendars.end()) return it->second;
    if (store.calendars.size() == 1) return store.calendars.begin()->second;
    if (!store.calendars.empty())
        fail(ErrorKind::InvalidArgument, "no calendar for benchmark '" + benchmark_id + "' among " +
                                             std::to_string(store.calendars.size()) + " markets");
    const auto it = store.prices.find(benchmark_id);
    std::vector<Date> dates;
    for (const auto& o : it->second.observations()) dates.push_back(o.date);
    return TradingCalendar(benchmark_id, std::move(dates));
}

inline CarResult study_one(const DealRecord& deal, const ReturnSeries& stock, const ReturnSeries& market,
                           const TradingCalendar& calendar, const StudyOptions& options) {
    const EventClock clock = build_event_clock(calendar, deal.announcement_date);
    std::vector<double> est_stock, est_market;
    for (long k = options.config.est_start_offset; k <= options.config.est_end_offset; ++k) {
        const auto date = clock.date_at(k);
        if (!date) continue;
        const auto rs = stock.at(*date);
        const auto rm = market.at(*date);
        if (rs && rm) {
            est_stock.push_back(*rs);
            est_market.push_back(*rm);
        }
    }
    if (est_stock.size() < options.config.min_obs)
        fail(ErrorKind::InsufficientHistory, std::to_string(est_stock.size()) +
                                                 " estimation-window returns available, need " +
                                                 std::to_string(options.config.min_obs));
    CarResult result;
    result.deal_id = deal.deal_id;
    result.day0 = clock.day0();
    result.fit = fit_market_model(est_stock, est_market, options.config);

    long lo = std::numeric_limits<long>::max(), hi = std::numeric_limits<long>::min();
    for (const auto& w : options.windows) {
        lo = std::min(lo, w.start);
        hi = std::max(hi, w.end);
    }
    for (long k : options.extra_offsets) {
        lo = std::min(lo, k);
        hi = std::max(hi, k);
    }
    if (lo <= hi) {
        // ARs are kept only on the union of windows and extras.
        const auto span = abnormal_returns(stock, market, clock, result.fit, lo, hi);
        auto wanted = [&](long k) {
            for (const auto& w : options.windows)
                if (k >= w.start && k <= w.end) return true;
            return std::find(options.extra_offsets.begin(), options.extra_offsets.end(), k) !=
                   options.extra_offsets.end();
        };
        for (const auto& [k, v] : span)
            if (wanted(k)) {
                result.abnormal_returns[k] = v;
                result.ar_dates[k] = *clock.date_at(k);
            }
    }
    for (const auto& w : options.windows)
        result.cars.emplace_back(w, cumulative_abnormal_return(result.abnormal_returns, w));
    return result;
}

} // namespace detail

/// Runs the market-model event study over every deal. Per-deal failures are
/// collected as exclusions; malformed inputs (unknown instruments, price
/// gaps, bad config) throw.
inline StudyResult run_event_study(const std::vector<DealRecord>& deals, const MarketStore& store,
                                   const std::map<std::string, std::string, std::less<>>& benchmarks,
                                   const StudyOptions& options) {
    options.config.validate();
    if (options.windows.empty()) fail(ErrorKind::InvalidArgument, "no event windows configured");

    struct Prepared {
        TradingCalendar calendar;
        const ReturnSeries* stock = nullptr;
        const ReturnSeries* market = nullptr;
    };
    std::map<std::string, ReturnSeries, std::less<>> returns;
    auto returns_for = [&](const std::string& id, const TradingCalendar& calendar) -> const ReturnSeries* {
        const auto pit = store.prices.find(id);
        if (pit == store.prices.end()) fail(ErrorKind::InvalidArgument, "no price data for instrument '" + id + "'");
        const std::string key = id + "\x1f" + calendar.market_id();
        auto it = returns.find(key);
        if (it == returns.end()) {
            validate_against(pit->second, calendar);
            ReturnSeries r = pit->second.size() >= 2 ? compute_log_returns(pit->second) : ReturnSeries(id, {});
            it = returns.emplace(key, std::move(r)).first;
        }
        return &it->second;
    };

    std::vector<Prepared> prepared;
    prepared.reserve(deals.size());
    for (const auto& deal : deals) {
        const auto bit = benchmarks.find(deal.deal_id);
        if (bit == benchmarks.end())
            fail(ErrorKind::InvalidArgument, "deal " + deal.deal_id + " has no benchmark mapping");
        if (!store.prices.contains(bit->second))
            fail(ErrorKind::InvalidArgument, "no price data for benchmark '" + bit->second + "'");
        Prepared p{detail::calendar_for(store, bit->second)};
        p.stock = returns_for(deal.acquirer_id, p.calendar);
        p.market = returns_for(bit->second, p.calendar);
        prepared.push_back(std::move(p));
    }

    std::vector<std::optional<CarResult>> results(deals.size());
    std::vector<std::optional<Exclusion>> excluded(deals.size());
    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < deals.size(); i += stride) {
            try {
                results[i] = detail::study_one(deals[i], *prepared[i].stock, *prepared[i].market,
                                               prepared[i].calendar, options);
            } catch (const Error& e) {
                excluded[i] = Exclusion{deals[i].deal_id, e.kind(), e.what()};
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(deals.size())));
    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    }

    StudyResult out;
    for (std::size_t i = 0; i < deals.size(); ++i) {
        if (results[i]) out.results.push_back(std::move(*results[i]));
        if (excluded[i]) out.exclusions.push_back(std::move(*excluded[i]));
    }
    std::stable_sort(out.results.begin(), out.results.end(),
                     [](const CarResult& a, const CarResult& b) { return a.deal_id < b.deal_id; });
    std::stable_sort(out.exclusions.begin(), out.exclusions.end(),
                     [](const Exclusion& a, const Exclusion& b) { return a.deal_id < b.deal_id; });
    return out;
}

} // namespace mastudy
