#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mastudy/date.hpp"
#include "mastudy/error.hpp"

namespace mastudy {

/// Ordered trading days of one market. Holidays and other non-working days
/// are simply absent. Copies share the underlying date vector.
class TradingCalendar {
public:
    TradingCalendar() : dates_(std::make_shared<const std::vector<Date>>()) {}

    TradingCalendar(std::string market_id, std::vector<Date> dates) : market_id_(std::move(market_id)) {
        for (std::size_t i = 1; i < dates.size(); ++i)
            if (!(dates[i - 1] < dates[i]))
                fail(ErrorKind::InvalidArgument, "calendar '" + market_id_ + "' not strictly increasing at " +
                                                     format_date(dates[i]));
        dates_ = std::make_shared<const std::vector<Date>>(std::move(dates));
    }

    const std::string& market_id() const { return market_id_; }
    const std::vector<Date>& dates() const { return *dates_; }
    std::size_t size() const { return dates_->size(); }
    bool empty() const { return dates_->empty(); }
    const Date& operator[](std::size_t i) const { return (*dates_)[i]; }

    std::optional<std::size_t> index_of(const Date& d) const {
        const auto it = std::lower_bound(dates_->begin(), dates_->end(), d);
        if (it == dates_->end() || *it != d) return std::nullopt;
        return static_cast<std::size_t>(it - dates_->begin());
    }

    std::optional<std::size_t> first_on_or_after(const Date& d) const {
        const auto it = std::lower_bound(dates_->begin(), dates_->end(), d);
        if (it == dates_->end()) return std::nullopt;
        return static_cast<std::size_t>(it - dates_->begin());
    }

private:
    std::string market_id_;
    std::shared_ptr<const std::vector<Date>> dates_;
};

struct PriceObservation {
    Date date;
    double close = 0.0;
};

class PriceSeries {
public:
    PriceSeries() = default;

    /// Observations must be strictly increasing in date with positive closes.
    PriceSeries(std::string instrument_id, std::vector<PriceObservation> observations)
        : instrument_id_(std::move(instrument_id)), observations_(std::move(observations)) {
        for (std::size_t i = 0; i < observations_.size(); ++i) {
            const auto& o = observations_[i];
            if (!(o.close > 0.0) || !std::isfinite(o.close))
                fail(ErrorKind::NonPositivePrice,
                     instrument_id_ + " on " + format_date(o.date) + ": close must be > 0");
            if (i > 0 && !(observations_[i - 1].date < o.date))
                fail(ErrorKind::InvalidArgument,
                     instrument_id_ + ": dates not strictly increasing at " + format_date(o.date));
        }
    }

    const std::string& instrument_id() const { return instrument_id_; }
    const std::vector<PriceObservation>& observations() const { return observations_; }
    std::size_t size() const { return observations_.size(); }

private:
    std::string instrument_id_;
    std::vector<PriceObservation> observations_;
};

struct ReturnObservation {
    Date date;
    double value = 0.0;
};

class ReturnSeries {
public:
    ReturnSeries() = default;
    ReturnSeries(std::string instrument_id, std::vector<ReturnObservation> observations)
        : instrument_id_(std::move(instrument_id)), observations_(std::move(observations)) {}

    const std::string& instrument_id() const { return instrument_id_; }
    const std::vector<ReturnObservation>& observations() const { return observations_; }
    std::size_t size() const { return observations_.size(); }

    std::optional<double> at(const Date& d) const {
        const auto it = std::lower_bound(observations_.begin(), observations_.end(), d,
                                         [](const ReturnObservation& o, const Date& x) { return o.date < x; });
        if (it == observations_.end() || it->date != d) return std::nullopt;
        return it->value;
    }

private:
    std::string instrument_id_;
    std::vector<ReturnObservation> observations_;
};

/// Checks that every observation date is a trading day of `calendar` and
/// that the series has no interior gaps relative to it.
inline void validate_against(const PriceSeries& series, const TradingCalendar& calendar) {
    const auto& obs = series.observations();
    if (obs.empty()) return;
    const auto first = calendar.index_of(obs.front().date);
    if (!first)
        fail(ErrorKind::InvalidArgument, series.instrument_id() + ": " + format_date(obs.front().date) +
                                             " is not a trading day of calendar '" + calendar.market_id() + "'");
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const std::size_t expected = *first + i;
        if (expected >= calendar.size() || calendar[expected] != obs[i].date) {
            if (!calendar.index_of(obs[i].date))
                fail(ErrorKind::InvalidArgument, series.instrument_id() + ": " + format_date(obs[i].date) +
                                                     " is not a trading day of calendar '" +
                                                     calendar.market_id() + "'");
            fail(ErrorKind::InvalidArgument, series.instrument_id() + ": missing price for trading day " +
                                                 format_date(calendar[expected]));
        }
    }
}

/// r_t = ln(P_t / P_{t-1}) over consecutive observations, dated at t.
inline ReturnSeries compute_log_returns(const PriceSeries& prices) {
    const auto& obs = prices.observations();
    if (obs.size() < 2)
        fail(ErrorKind::EmptySeries, prices.instrument_id() + ": need at least 2 prices for a return");
    std::vector<ReturnObservation> out;
    out.reserve(obs.size() - 1);
    for (std::size_t i = 1; i < obs.size(); ++i) {
        if (!(obs[i].close > 0.0) || !(obs[i - 1].close > 0.0))
            fail(ErrorKind::NonPositivePrice, prices.instrument_id() + ": non-positive price");
        out.push_back({obs[i].date, std::log(obs[i].close / obs[i - 1].close)});
    }
    return ReturnSeries(prices.instrument_id(), std::move(out));
}

/// Relative trading-day index around an announcement. Offset 0 is the first
/// trading day on or after the announcement date.
class EventClock {
public:
    EventClock(TradingCalendar calendar, Date announcement, std::size_t day0_index)
        : calendar_(std::move(calendar)), announcement_(announcement), day0_(day0_index) {}

    const Date& announcement_date() const { return announcement_; }
    const Date& day0() const { return calendar_[day0_]; }
    std::size_t day0_index() const { return day0_; }
    const TradingCalendar& calendar() const { return calendar_; }

    std::optional<Date> date_at(long offset) const {
        const long idx = static_cast<long>(day0_) + offset;
        if (idx < 0 || idx >= static_cast<long>(calendar_.size())) return std::nullopt;
        return calendar_[static_cast<std::size_t>(idx)];
    }

    /// Offset of a trading date, or nullopt for non-trading dates.
    std::optional<long> offset_of(const Date& d) const {
        const auto idx = calendar_.index_of(d);
        if (!idx) return std::nullopt;
        return static_cast<long>(*idx) - static_cast<long>(day0_);
    }

    long min_offset() const { return -static_cast<long>(day0_); }
    long max_offset() const { return static_cast<long>(calendar_.size()) - 1 - static_cast<long>(day0_); }

private:
    TradingCalendar calendar_;
    Date announcement_;
    std::size_t day0_;
};

inline EventClock build_event_clock(const TradingCalendar& calendar, const Date& announcement) {
    if (calendar.empty() || announcement < calendar[0] || calendar[calendar.size() - 1] < announcement)
        fail(ErrorKind::DateOutOfRange, format_date(announcement) + " outside calendar '" +
                                            calendar.market_id() + "'");
    const auto idx = calendar.first_on_or_after(announcement);
    return EventClock(calendar, announcement, *idx);
}

/// Returns exactly end - start + 1 returns in offset order, or throws
/// InsufficientHistory when any offset has no return.
inline std::vector<double> slice_window(const ReturnSeries& series, const EventClock& clock, long start_offset,
                                        long end_offset) {
    if (start_offset > end_offset)
        fail(ErrorKind::InvalidArgument, "window start " + std::to_string(start_offset) + " after end " +
                                             std::to_string(end_offset));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(end_offset - start_offset + 1));
    for (long k = start_offset; k <= end_offset; ++k) {
        const auto date = clock.date_at(k);
        const auto value = date ? series.at(*date) : std::nullopt;
        if (!value)
            fail(ErrorKind::InsufficientHistory, series.instrument_id() + ": no return at offset " +
                                                     std::to_string(k) + " around " +
                                                     format_date(clock.announcement_date()));
        out.push_back(*value);
    }
    return out;
}

} // namespace mastudy
