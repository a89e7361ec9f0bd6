#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mastudy/csv.hpp"
#include "mastudy/deal.hpp"
#include "mastudy/event_engine.hpp"
#include "mastudy/format.hpp"
#include "mastudy/gains.hpp"
#include "mastudy/market_data.hpp"
#include "mastudy/screening.hpp"

namespace mastudy::io {

using Warn = std::function<void(const std::string&)>;

/// Writes to `path.tmp` and renames over `path`.
inline void write_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) std::filesystem::create_directories(target.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + tmp + "'");
        out << content;
        out.flush();
        if (!out) fail(ErrorKind::InvalidArgument, "write failed for '" + tmp + "'");
    }
    std::filesystem::rename(tmp, target);
}

inline Date date_cell(const csv::Table& t, std::size_t row, const std::string& col) {
    try {
        return parse_date(t.cell(row, col));
    } catch (const Error& e) {
        fail(ErrorKind::Parse, t.where(row) + ": " + e.what());
    }
}

inline std::optional<Date> optional_date_cell(const csv::Table& t, std::size_t row, const std::string& col) {
    if (t.cell(row, col).empty()) return std::nullopt;
    return date_cell(t, row, col);
}

inline std::string bool_text(bool b) { return b ? "1" : "0"; }

// ---- prices.csv -----------------------------------------------------------

inline std::map<std::string, PriceSeries, std::less<>> read_prices(const csv::Table& t) {
    t.require({"instrument_id", "date", "close"});
    std::map<std::string, std::vector<PriceObservation>, std::less<>> grouped;
    for (std::size_t r = 0; r < t.size(); ++r)
        grouped[t.cell(r, "instrument_id")].push_back(
            {date_cell(t, r, "date"), csv::to_double(t.cell(r, "close"), t.where(r))});
    std::map<std::string, PriceSeries, std::less<>> out;
    for (auto& [id, obs] : grouped) {
        std::stable_sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
        out.emplace(id, PriceSeries(id, std::move(obs)));
    }
    return out;
}

/// Prices keep twelve significant digits so returns survive the round trip.
inline csv::Writer write_prices(const std::vector<const PriceSeries*>& series) {
    csv::Writer w({"instrument_id", "date", "close"});
    for (const auto* s : series)
        for (const auto& o : s->observations()) w.row({s->instrument_id(), format_date(o.date), significant(o.close, 12)});
    return w;
}

// ---- calendar.csv ---------------------------------------------------------

inline std::map<std::string, TradingCalendar, std::less<>> read_calendars(const csv::Table& t) {
    t.require({"market_id", "date"});
    std::map<std::string, std::vector<Date>, std::less<>> grouped;
    for (std::size_t r = 0; r < t.size(); ++r) grouped[t.cell(r, "market_id")].push_back(date_cell(t, r, "date"));
    std::map<std::string, TradingCalendar, std::less<>> out;
    for (auto& [id, dates] : grouped) {
        std::sort(dates.begin(), dates.end());
        out.emplace(id, TradingCalendar(id, std::move(dates)));
    }
    return out;
}

inline csv::Writer write_calendar(const TradingCalendar& c) {
    csv::Writer w({"market_id", "date"});
    for (const auto& d : c.dates()) w.row({c.market_id(), format_date(d)});
    return w;
}

// ---- deals.csv ------------------------------------------------------------

inline const std::vector<std::string> kDealColumns{
    "deal_id",         "announcement_date", "effective_date",      "status",           "acquirer_id",
    "acquirer_nation", "acquirer_public",   "acquirer_sic",        "acquirer_market_cap", "target_nation",
    "target_public",   "target_sic",        "pct_owned_before",    "pct_acquired",     "pct_owned_after",
    "transaction_value", "clean_event"};

inline DealRecord deal_from_row(const csv::Table& t, std::size_t r, bool has_clean_event) {
    const auto where = t.where(r);
    DealRecord d;
    d.deal_id = t.cell(r, "deal_id");
    if (d.deal_id.empty()) fail(ErrorKind::Parse, where + ": empty deal_id");
    d.announcement_date = date_cell(t, r, "announcement_date");
    d.effective_date = optional_date_cell(t, r, "effective_date");
    try {
        d.status = parse_status(t.cell(r, "status"));
    } catch (const Error& e) {
        fail(ErrorKind::Parse, where + ": " + e.what());
    }
    d.acquirer_id = t.cell(r, "acquirer_id");
    d.acquirer_nation = t.cell(r, "acquirer_nation");
    d.acquirer_public = csv::to_bool(t.cell(r, "acquirer_public"), where);
    d.acquirer_sic = t.cell(r, "acquirer_sic");
    d.acquirer_market_cap = csv::to_optional_double(t.cell(r, "acquirer_market_cap"), where);
    d.target_nation = t.cell(r, "target_nation");
    d.target_public = csv::to_bool(t.cell(r, "target_public"), where);
    d.target_sic = t.cell(r, "target_sic");
    d.pct_owned_before = csv::to_optional_double(t.cell(r, "pct_owned_before"), where);
    d.pct_acquired = csv::to_optional_double(t.cell(r, "pct_acquired"), where);
    d.pct_owned_after = csv::to_optional_double(t.cell(r, "pct_owned_after"), where);
    d.transaction_value = csv::to_optional_double(t.cell(r, "transaction_value"), where);
    if (has_clean_event) d.clean_event = csv::to_bool(t.cell(r, "clean_event"), where);
    validate_deal(d);
    return d;
}

inline void require_deal_columns(const csv::Table& t) {
    for (const auto& c : kDealColumns)
        if (c != "clean_event" && !t.has(c)) fail(ErrorKind::Parse, t.source() + ": missing required column '" + c + "'");
}

/// clean_event may be absent; every deal then counts as clean and a warning
/// is raised.
inline std::vector<DealRecord> read_deals(const csv::Table& t, const Warn& warn = {}) {
    require_deal_columns(t);
    const bool has_clean = t.has("clean_event");
    if (!has_clean && warn)
        warn("WARNING: " + t.source() + " has no clean_event column; every deal is treated as free of confounding events");
    std::vector<DealRecord> out;
    for (std::size_t r = 0; r < t.size(); ++r) out.push_back(deal_from_row(t, r, has_clean));
    return out;
}

inline std::vector<std::string> deal_fields(const DealRecord& d) {
    return {d.deal_id,
            format_date(d.announcement_date),
            d.effective_date ? format_date(*d.effective_date) : std::string(),
            std::string(to_string(d.status)),
            d.acquirer_id,
            d.acquirer_nation,
            bool_text(d.acquirer_public),
            d.acquirer_sic,
            fmt6(d.acquirer_market_cap),
            d.target_nation,
            bool_text(d.target_public),
            d.target_sic,
            fmt6(d.pct_owned_before),
            fmt6(d.pct_acquired),
            fmt6(d.pct_owned_after),
            fmt6(d.transaction_value),
            bool_text(d.clean_event)};
}

inline csv::Writer write_deals(const std::vector<DealRecord>& deals) {
    csv::Writer w(kDealColumns);
    for (const auto& d : deals) w.row(deal_fields(d));
    return w;
}

// ---- screened.csv: deals plus acquirer class and sample ---------------------

struct ScreenedDeal {
    DealRecord deal;
    std::optional<IncomeClass> acquirer_class;
    Sample sample = Sample::Excluded;
};

inline csv::Writer write_screened(const std::vector<ScreenedDeal>& deals) {
    auto header = kDealColumns;
    header.push_back("acquirer_class");
    header.push_back("sample");
    csv::Writer w(header);
    for (const auto& s : deals) {
        auto f = deal_fields(s.deal);
        f.push_back(s.acquirer_class ? std::string(to_string(*s.acquirer_class)) : std::string());
        f.push_back(std::string(to_string(s.sample)));
        w.row(f);
    }
    return w;
}

inline std::vector<ScreenedDeal> read_screened(const csv::Table& t) {
    require_deal_columns(t);
    t.require({"acquirer_class", "sample"});
    const bool has_clean = t.has("clean_event");
    std::vector<ScreenedDeal> out;
    for (std::size_t r = 0; r < t.size(); ++r) {
        ScreenedDeal s;
        s.deal = deal_from_row(t, r, has_clean);
        try {
            if (!t.cell(r, "acquirer_class").empty()) s.acquirer_class = parse_income_class(t.cell(r, "acquirer_class"));
            s.sample = parse_sample(t.cell(r, "sample"));
        } catch (const Error& e) {
            fail(ErrorKind::Parse, t.where(r) + ": " + e.what());
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline std::optional<CountryClass> class_of(const ScreenedDeal& s) {
    if (!s.acquirer_class) return std::nullopt;
    return CountryClass{normalize_nation(s.deal.acquirer_nation), year_of(s.deal.announcement_date), *s.acquirer_class};
}

// ---- benchmarks.csv -------------------------------------------------------

using BenchmarkMap = std::map<std::string, std::string, std::less<>>;

inline BenchmarkMap read_benchmarks(const csv::Table& t) {
    t.require({"deal_id", "benchmark_instrument_id"});
    BenchmarkMap out;
    for (std::size_t r = 0; r < t.size(); ++r)
        if (!out.emplace(t.cell(r, "deal_id"), t.cell(r, "benchmark_instrument_id")).second)
            fail(ErrorKind::Parse, t.where(r) + ": duplicate deal_id '" + t.cell(r, "deal_id") + "'");
    return out;
}

inline csv::Writer write_benchmarks(const BenchmarkMap& m) {
    csv::Writer w({"deal_id", "benchmark_instrument_id"});
    for (const auto& [d, b] : m) w.row({d, b});
    return w;
}

// ---- thresholds.csv / classes.csv / gni.csv ---------------------------------

inline ThresholdTable read_thresholds(const csv::Table& t) {
    t.require({"year", "low_max", "lm_max", "um_max"});
    ThresholdTable out;
    for (std::size_t r = 0; r < t.size(); ++r) {
        const auto where = t.where(r);
        IncomeThresholds th{static_cast<int>(csv::to_int(t.cell(r, "year"), where)),
                            csv::to_double(t.cell(r, "low_max"), where), csv::to_double(t.cell(r, "lm_max"), where),
                            csv::to_double(t.cell(r, "um_max"), where)};
        th.validate();
        out.add(th);
    }
    return out;
}

inline csv::Writer write_thresholds(const ThresholdTable& table) {
    csv::Writer w({"year", "low_max", "lm_max", "um_max"});
    for (const auto& [year, th] : table.rows())
        w.row({std::to_string(year), fmt6(th.low_max), fmt6(th.lower_middle_max), fmt6(th.upper_middle_max)});
    return w;
}

inline ClassTable read_classes(const csv::Table& t) {
    t.require({"nation", "year", "class"});
    ClassTable out;
    for (std::size_t r = 0; r < t.size(); ++r) {
        try {
            out.add(t.cell(r, "nation"), static_cast<int>(csv::to_int(t.cell(r, "year"), t.where(r))),
                    parse_income_class(t.cell(r, "class")));
        } catch (const Error& e) {
            fail(ErrorKind::Parse, t.where(r) + ": " + e.what());
        }
    }
    return out;
}

inline csv::Writer write_classes(const ClassTable& table) {
    csv::Writer w({"nation", "year", "class"});
    for (const auto& [key, c] : table.rows()) w.row({key.first, std::to_string(key.second), std::string(to_string(c))});
    return w;
}

/// gni.csv: `nation,year,gni_per_capita`.
inline GniTable read_gni(const csv::Table& t) {
    t.require({"nation", "year", "gni_per_capita"});
    GniTable out;
    for (std::size_t r = 0; r < t.size(); ++r)
        out[{normalize_nation(t.cell(r, "nation")), static_cast<int>(csv::to_int(t.cell(r, "year"), t.where(r)))}] =
            csv::to_double(t.cell(r, "gni_per_capita"), t.where(r));
    return out;
}

// ---- funnel ----------------------------------------------------------------

inline csv::Writer write_funnel(const FunnelReport& f) {
    csv::Writer w({"criterion", "label", "count_after"});
    w.row({"0", "All deals", std::to_string(f.input_count)});
    for (const auto& g : f.gates) w.row({std::to_string(g.criterion), g.label, std::to_string(g.count_after)});
    return w;
}

// ---- cars.csv / ars.csv / exclusions.csv --------------------------------------

inline csv::Writer write_cars(const std::vector<CarResult>& results) {
    csv::Writer w({"deal_id", "window_start", "window_end", "car", "alpha", "beta", "resid_var", "n_est"});
    for (const auto& r : results)
        for (const auto& [win, car] : r.cars)
            w.row({r.deal_id, std::to_string(win.start), std::to_string(win.end), fmt6(car), fmt6(r.fit.alpha_hat),
                   fmt6(r.fit.beta_hat), fmt6(r.fit.residual_variance), std::to_string(r.fit.n_est)});
    return w;
}

inline csv::Writer write_ars(const std::vector<CarResult>& results) {
    csv::Writer w({"deal_id", "offset", "date", "ar"});
    for (const auto& r : results)
        for (const auto& [k, ar] : r.abnormal_returns) {
            const auto it = r.ar_dates.find(k);
            w.row({r.deal_id, std::to_string(k), it == r.ar_dates.end() ? std::string() : format_date(it->second),
                   fmt6(ar)});
        }
    return w;
}

inline csv::Writer write_exclusions(const std::vector<Exclusion>& exclusions) {
    csv::Writer w({"deal_id", "reason", "message"});
    for (const auto& e : exclusions) w.row({e.deal_id, std::string(to_string(e.reason)), e.message});
    return w;
}

/// Rebuilds study results from cars.csv and, when given, ars.csv. Window
/// order follows first appearance; fits carry only the reported scalars.
inline std::vector<CarResult> read_cars(const csv::Table& cars, const csv::Table* ars = nullptr) {
    cars.require({"deal_id", "window_start", "window_end", "car", "alpha", "beta", "resid_var", "n_est"});
    std::map<std::string, CarResult, std::less<>> by_id;
    for (std::size_t r = 0; r < cars.size(); ++r) {
        const auto where = cars.where(r);
        auto& res = by_id[cars.cell(r, "deal_id")];
        res.deal_id = cars.cell(r, "deal_id");
        const long s = static_cast<long>(csv::to_int(cars.cell(r, "window_start"), where));
        const long e = static_cast<long>(csv::to_int(cars.cell(r, "window_end"), where));
        if (s > e) fail(ErrorKind::Parse, where + ": window_start exceeds window_end");
        res.cars.emplace_back(EventWindow{s, e, classify_window(s, e)}, csv::to_double(cars.cell(r, "car"), where));
        res.fit.alpha_hat = csv::to_double(cars.cell(r, "alpha"), where);
        res.fit.beta_hat = csv::to_double(cars.cell(r, "beta"), where);
        res.fit.residual_variance = csv::to_double(cars.cell(r, "resid_var"), where);
        res.fit.n_est = static_cast<std::size_t>(csv::to_int(cars.cell(r, "n_est"), where));
    }
    if (ars) {
        ars->require({"deal_id", "offset", "date", "ar"});
        for (std::size_t r = 0; r < ars->size(); ++r) {
            const auto where = ars->where(r);
            const auto it = by_id.find(ars->cell(r, "deal_id"));
            if (it == by_id.end()) continue;
            const long k = static_cast<long>(csv::to_int(ars->cell(r, "offset"), where));
            it->second.abnormal_returns[k] = csv::to_double(ars->cell(r, "ar"), where);
            if (const auto d = optional_date_cell(*ars, r, "date")) {
                it->second.ar_dates[k] = *d;
                if (k == 0) it->second.day0 = *d;
            }
        }
    }
    std::vector<CarResult> out;
    for (auto& [_, r] : by_id) out.push_back(std::move(r));
    return out;
}

/// Windows of a cars table in first-appearance order.
inline std::vector<EventWindow> windows_of(const std::vector<CarResult>& results) {
    std::vector<EventWindow> out;
    for (const auto& r : results)
        for (const auto& [w, _] : r.cars)
            if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
    return out;
}

// ---- gains.csv ---------------------------------------------------------------

inline csv::Writer write_gains(const std::vector<ValueGain>& gains) {
    csv::Writer w({"deal_id", "control", "car01", "car11", "car21", "market_cap", "dvg", "transaction_value",
                   "net_synergy"});
    auto car = [](const ValueGain& g, long s, long e) -> std::optional<double> {
        const auto it = g.cars.find({s, e});
        if (it == g.cars.end()) return std::nullopt;
        return it->second;
    };
    for (const auto& g : gains)
        w.row({g.deal_id, bool_text(g.control), fmt6(car(g, 0, 1)), fmt6(car(g, -1, 1)), fmt6(car(g, -2, 1)),
               fmt6(g.market_cap_used), fmt6(g.dollar_value_gain), fmt6(g.transaction_value), fmt6(g.net_synergy)});
    return w;
}

inline std::vector<ValueGain> read_gains(const csv::Table& t) {
    t.require({"deal_id", "control", "car01", "car11", "car21", "market_cap", "dvg", "transaction_value",
               "net_synergy"});
    std::vector<ValueGain> out;
    for (std::size_t r = 0; r < t.size(); ++r) {
        const auto where = t.where(r);
        ValueGain g;
        g.deal_id = t.cell(r, "deal_id");
        g.control = csv::to_bool(t.cell(r, "control"), where);
        const std::pair<const char*, WindowKey> cols[] = {{"car01", {0, 1}}, {"car11", {-1, 1}}, {"car21", {-2, 1}}};
        for (const auto& [col, key] : cols)
            if (const auto v = csv::to_optional_double(t.cell(r, col), where)) g.cars[key] = *v;
        g.market_cap_used = csv::to_optional_double(t.cell(r, "market_cap"), where);
        g.dollar_value_gain = csv::to_optional_double(t.cell(r, "dvg"), where);
        g.transaction_value = csv::to_optional_double(t.cell(r, "transaction_value"), where);
        g.net_synergy = csv::to_optional_double(t.cell(r, "net_synergy"), where);
        out.push_back(std::move(g));
    }
    return out;
}

// ---- market caps (optional time series) ----------------------------------------

/// market_caps.csv: `instrument_id,date,market_cap`.
inline std::map<std::string, std::map<Date, double>, std::less<>> read_market_caps(const csv::Table& t) {
    t.require({"instrument_id", "date", "market_cap"});
    std::map<std::string, std::map<Date, double>, std::less<>> out;
    for (std::size_t r = 0; r < t.size(); ++r)
        out[t.cell(r, "instrument_id")][date_cell(t, r, "date")] = csv::to_double(t.cell(r, "market_cap"), t.where(r));
    return out;
}

} // namespace mastudy::io
