#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mastudy/cross_section.hpp"
#include "mastudy/event_engine.hpp"
#include "mastudy/gains.hpp"
#include "mastudy/io.hpp"
#include "mastudy/screening.hpp"

namespace mastudy::pipeline {

/// Trading days with an acquirer price strictly before each announcement.
inline HistoryCounts history_counts(const std::vector<DealRecord>& deals,
                                    const std::map<std::string, PriceSeries, std::less<>>& prices) {
    HistoryCounts out;
    for (const auto& d : deals) {
        long n = 0;
        if (const auto it = prices.find(d.acquirer_id); it != prices.end())
            for (const auto& o : it->second.observations())
                if (o.date < d.announcement_date) ++n;
        out[d.deal_id] = n;
    }
    return out;
}

struct Classification {
    const ClassTable* classes = nullptr;
    const ThresholdTable* thresholds = nullptr;
    const GniTable* gni = nullptr;

    std::optional<CountryClass> of(const DealRecord& d) const {
        static const GniTable empty;
        return resolve_class(d.acquirer_nation, year_of(d.announcement_date), *classes, *thresholds,
                             gni ? *gni : empty);
    }
};

inline io::ScreenedDeal label(const DealRecord& d, const Classification& c) {
    io::ScreenedDeal s;
    s.deal = d;
    const auto cls = c.of(d);
    if (cls) s.acquirer_class = cls->income_class;
    s.sample = assign_sample(d, cls).sample;
    return s;
}

struct ScreenResult {
    FunnelReport funnel;
    std::vector<io::ScreenedDeal> screened; // funnel survivors with sample labels
};

inline ScreenResult screen(const std::vector<DealRecord>& deals, const Classification& c,
                           const std::optional<HistoryCounts>& history, const FunnelConfig& config = {}) {
    ScreenResult r;
    r.funnel = apply_funnel(deals, history, config);
    for (const auto& d : r.funnel.survivors) r.screened.push_back(label(d, c));
    return r;
}

inline DealFeatures features_of(const io::ScreenedDeal& s) { return derive_features(s.deal, io::class_of(s)); }

/// Joins screened deals with their study results; deals without a result
/// are skipped.
inline std::vector<DealObservation> observations(const std::vector<io::ScreenedDeal>& screened,
                                                 const std::vector<CarResult>& cars) {
    std::map<std::string, const CarResult*, std::less<>> by_id;
    for (const auto& c : cars) by_id[c.deal_id] = &c;
    std::vector<DealObservation> out;
    for (const auto& s : screened) {
        const auto it = by_id.find(s.deal.deal_id);
        if (it == by_id.end() || s.sample == Sample::Excluded) continue;
        DealObservation o;
        o.deal = s.deal;
        o.features = features_of(s);
        o.sample = s.sample;
        for (const auto& [w, v] : it->second->cars) o.cars[key_of(w)] = v;
        o.fit = it->second->fit;
        out.push_back(std::move(o));
    }
    return out;
}

inline ResponsesByWindow responses(const std::vector<CarResult>& cars, const std::vector<EventWindow>& windows) {
    ResponsesByWindow out;
    for (const auto& w : windows) out.emplace_back(w, response_for(cars, w));
    return out;
}

inline std::vector<DealFeatures> features_for(const std::vector<DealObservation>& obs,
                                              const std::optional<Sample>& sample = std::nullopt) {
    std::vector<DealFeatures> out;
    for (const auto& o : obs)
        if (!sample || o.sample == *sample) out.push_back(o.features);
    return out;
}

inline std::map<std::string, Sample, std::less<>> samples_of(const std::vector<DealObservation>& obs) {
    std::map<std::string, Sample, std::less<>> out;
    for (const auto& o : obs) out[o.deal.deal_id] = o.sample;
    return out;
}

using CapSeries = std::map<std::string, std::map<Date, double>, std::less<>>;

/// Value-gain rows for one sample, using the cap at offset -1 when a cap
/// series is supplied.
inline std::vector<ValueGain> value_gains(const std::vector<DealObservation>& obs, const std::vector<CarResult>& cars,
                                          Sample sample, const CapSeries* caps = nullptr) {
    std::map<std::string, const CarResult*, std::less<>> by_id;
    for (const auto& c : cars) by_id[c.deal_id] = &c;
    std::vector<ValueGain> out;
    for (const auto& o : obs) {
        if (o.sample != sample) continue;
        const auto it = by_id.find(o.deal.deal_id);
        if (it == by_id.end()) continue;
        const std::map<Date, double>* series = nullptr;
        if (caps)
            if (const auto cit = caps->find(o.deal.acquirer_id); cit != caps->end()) series = &cit->second;
        std::optional<double> cap = o.deal.acquirer_market_cap;
        if (const auto d = it->second->ar_dates.find(-1); d != it->second->ar_dates.end())
            cap = market_cap_day_before(series, d->second, o.deal.acquirer_market_cap);
        out.push_back(value_gain(o.deal, o.features, *it->second, cap));
    }
    return out;
}

} // namespace mastudy::pipeline
