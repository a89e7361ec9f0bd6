#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mastudy/deal.hpp"
#include "mastudy/error.hpp"
#include "mastudy/event_engine.hpp"
#include "mastudy/inference.hpp"
#include "mastudy/screening.hpp"

namespace mastudy {

/// Market cap times each daily AR over the window, summed in offset order.
/// With the default (-1, 1) window this is cap * CAR(-1, 1).
inline double dollar_value_gain(const AbnormalReturns& ars, double market_cap_day_before,
                                const EventWindow& window = {-1, 1, WindowFamily::Liquidity}) {
    if (!(market_cap_day_before > 0.0))
        fail(ErrorKind::NonPositiveMarketCap, "market cap must be positive");
    double total = 0.0;
    for (long k = window.start; k <= window.end; ++k) {
        const auto it = ars.find(k);
        if (it == ars.end()) fail(ErrorKind::MissingAr, "no abnormal return at offset " + std::to_string(k));
        total += market_cap_day_before * it->second;
    }
    return total;
}

inline double net_synergy(double dollar_value_gain, const std::optional<double>& transaction_value) {
    if (!transaction_value) fail(ErrorKind::MissingTransactionValue, "transaction value absent");
    if (!(*transaction_value > 0.0))
        fail(ErrorKind::NonPositiveTransactionValue, "transaction value must be positive");
    return dollar_value_gain / *transaction_value;
}

/// Cap observed on `day_before`, the trading date at offset -1, from a cap
/// time series; falls back to the static deal-level cap.
inline std::optional<double> market_cap_day_before(const std::map<Date, double>* cap_series, const Date& day_before,
                                                   const std::optional<double>& static_cap) {
    if (cap_series) {
        const auto it = cap_series->find(day_before);
        if (it != cap_series->end()) return it->second;
    }
    return static_cap;
}

using WindowKey = std::pair<long, long>;

inline WindowKey key_of(const EventWindow& w) { return {w.start, w.end}; }

struct ValueGain {
    std::string deal_id;
    bool control = false;
    std::map<WindowKey, double> cars;
    std::optional<double> market_cap_used;
    std::optional<double> dollar_value_gain;
    std::optional<double> transaction_value;
    std::optional<double> net_synergy;
};

/// Builds one gains row; DVG needs ARs at -1..1 and a positive cap, net
/// synergy additionally a positive transaction value.
inline ValueGain value_gain(const DealRecord& deal, const DealFeatures& features, const CarResult& car,
                            const std::optional<double>& market_cap) {
    ValueGain g;
    g.deal_id = deal.deal_id;
    g.control = features.control;
    for (const auto& [w, v] : car.cars) g.cars[key_of(w)] = v;
    g.market_cap_used = market_cap;
    g.transaction_value = deal.transaction_value;
    if (market_cap && *market_cap > 0.0) {
        try {
            g.dollar_value_gain = dollar_value_gain(car.abnormal_returns, *market_cap);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::MissingAr) throw;
        }
    }
    if (g.dollar_value_gain && deal.transaction_value && *deal.transaction_value > 0.0)
        g.net_synergy = net_synergy(*g.dollar_value_gain, deal.transaction_value);
    return g;
}

struct GainsPanel {
    std::string title;
    /// Column label -> stats, in display order.
    std::vector<std::pair<std::string, DistributionStats>> columns;
};

struct RankComparison {
    EventWindow window;
    std::optional<RankTestResult> result;
};

struct GainsReport {
    std::vector<EventWindow> windows;
    GainsPanel control;
    GainsPanel non_control;
    double aggregate_dvg_control = 0.0;
    std::size_t aggregate_dvg_count = 0;
    std::vector<RankComparison> median_comparisons; // control vs non-control, rank-sum
};

inline const std::array<std::string, 4> kGainsValueColumns{
    "Acquirer market capitalization ($M)", "Dollar value gain per transaction ($M)", "Transaction value ($M)",
    "Net synergy return per transaction"};

/// Splits on the control flag, summarises every metric, sums control-deal
/// DVG in deal-id order and compares CAR medians with the rank-sum test.
inline GainsReport gains_panel(std::vector<ValueGain> gains, const std::vector<EventWindow>& windows) {
    std::sort(gains.begin(), gains.end(), [](const ValueGain& a, const ValueGain& b) { return a.deal_id < b.deal_id; });
    GainsReport report;
    report.windows = windows;
    auto panel = [&](bool control, std::string title) {
        GainsPanel p;
        p.title = std::move(title);
        auto column = [&](auto getter) {
            std::vector<double> v;
            for (const auto& g : gains)
                if (g.control == control)
                    if (const std::optional<double> x = getter(g)) v.push_back(*x);
            return distribution_stats(v);
        };
        for (const auto& w : windows)
            p.columns.emplace_back("CAR " + w.label(), column([&](const ValueGain& g) -> std::optional<double> {
                                       const auto it = g.cars.find(key_of(w));
                                       if (it == g.cars.end()) return std::nullopt;
                                       return it->second;
                                   }));
        p.columns.emplace_back(kGainsValueColumns[0], column([](const ValueGain& g) { return g.market_cap_used; }));
        p.columns.emplace_back(kGainsValueColumns[1], column([](const ValueGain& g) { return g.dollar_value_gain; }));
        p.columns.emplace_back(kGainsValueColumns[2], column([](const ValueGain& g) { return g.transaction_value; }));
        p.columns.emplace_back(kGainsValueColumns[3], column([](const ValueGain& g) { return g.net_synergy; }));
        return p;
    };
    report.control = panel(true, "Panel A: acquirers gain majority control");
    report.non_control = panel(false, "Panel B: acquirers do not gain majority control");
    for (const auto& g : gains)
        if (g.control && g.dollar_value_gain) {
            report.aggregate_dvg_control += *g.dollar_value_gain;
            ++report.aggregate_dvg_count;
        }
    for (const auto& w : windows) {
        std::vector<double> a, b;
        for (const auto& g : gains) {
            const auto it = g.cars.find(key_of(w));
            if (it == g.cars.end()) continue;
            (g.control ? a : b).push_back(it->second);
        }
        RankComparison cmp{w, std::nullopt};
        if (!a.empty() && !b.empty()) cmp.result = wilcoxon_rank_sum(a, b);
        report.median_comparisons.push_back(cmp);
    }
    return report;
}

/// Everything the summary tables need about one screened, studied deal.
struct DealObservation {
    DealRecord deal;
    DealFeatures features;
    Sample sample = Sample::Excluded;
    std::map<WindowKey, double> cars;
    MarketModelFit fit;
};

inline constexpr std::array<Sample, 3> kSamples{Sample::DmVn, Sample::EmVn, Sample::VnVn};

struct SampleSummary {
    Sample sample = Sample::DmVn;
    std::size_t n = 0;
    std::optional<double> median_transaction_value;
    std::optional<double> median_market_cap;
    double private_target_pct = 0.0;
    double diversifying_pct = 0.0;
    std::vector<std::optional<double>> median_car;         // per window
    std::vector<std::optional<double>> median_car_control; // per window
    std::array<double, 7> acquirer_sector_pct{};
    std::array<double, 7> target_sector_pct{};
};

struct SummaryTable {
    std::vector<EventWindow> windows;
    std::vector<SampleSummary> samples;
};

namespace detail {
inline std::optional<double> median_of(std::vector<double> v) {
    if (v.empty()) return std::nullopt;
    std::sort(v.begin(), v.end());
    return quantile_inclusive(v, 0.5);
}
} // namespace detail

/// Firm and deal characteristics per sample. Percentages are shares of the
/// sample's deal count.
inline SummaryTable summary_table(const std::vector<DealObservation>& observations,
                                  const std::vector<EventWindow>& windows) {
    SummaryTable table;
    table.windows = windows;
    for (Sample s : kSamples) {
        SampleSummary sum;
        sum.sample = s;
        std::vector<double> tv, cap;
        std::size_t private_targets = 0, diversifying = 0;
        std::vector<std::vector<double>> cars(windows.size()), cars_control(windows.size());
        for (const auto& o : observations) {
            if (o.sample != s) continue;
            ++sum.n;
            if (o.deal.transaction_value) tv.push_back(*o.deal.transaction_value);
            if (o.deal.acquirer_market_cap) cap.push_back(*o.deal.acquirer_market_cap);
            if (!o.deal.target_public) ++private_targets;
            if (o.features.diversifying) ++diversifying;
            sum.acquirer_sector_pct[static_cast<std::size_t>(o.features.acquirer_sector)] += 1.0;
            sum.target_sector_pct[static_cast<std::size_t>(o.features.target_sector)] += 1.0;
            for (std::size_t w = 0; w < windows.size(); ++w) {
                const auto it = o.cars.find(key_of(windows[w]));
                if (it == o.cars.end()) continue;
                cars[w].push_back(it->second);
                if (o.features.control) cars_control[w].push_back(it->second);
            }
        }
        if (sum.n > 0) {
            const double n = static_cast<double>(sum.n);
            sum.private_target_pct = 100.0 * static_cast<double>(private_targets) / n;
            sum.diversifying_pct = 100.0 * static_cast<double>(diversifying) / n;
            for (auto& v : sum.acquirer_sector_pct) v = 100.0 * v / n;
            for (auto& v : sum.target_sector_pct) v = 100.0 * v / n;
        }
        sum.median_transaction_value = detail::median_of(tv);
        sum.median_market_cap = detail::median_of(cap);
        for (std::size_t w = 0; w < windows.size(); ++w) {
            sum.median_car.push_back(detail::median_of(cars[w]));
            sum.median_car_control.push_back(detail::median_of(cars_control[w]));
        }
        table.samples.push_back(std::move(sum));
    }
    return table;
}

/// One mean-CAR cell: empty (n = 0), mean only (n = 1), or a full t test.
struct CarCell {
    std::size_t n = 0;
    std::optional<double> mean;
    std::optional<double> std_error;
    std::optional<double> p_value; // per the table's tail convention
};

inline CarCell car_cell(const std::vector<double>& values, Tail tail) {
    CarCell cell;
    cell.n = values.size();
    if (values.empty()) return cell;
    if (values.size() == 1) {
        cell.mean = values[0];
        return cell;
    }
    const auto t = cross_sectional_t(values);
    cell.mean = t.mean;
    cell.std_error = t.std_error;
    cell.p_value = t.p(tail);
    return cell;
}

struct SectorBlock {
    std::optional<Sector> sector; // nullopt = all deals
    std::size_t n_all = 0;
    std::size_t n_control = 0;
    std::vector<CarCell> all;     // per window
    std::vector<CarCell> control; // per window
};

struct SectorCarTable {
    std::vector<EventWindow> windows;
    Tail tail = Tail::One;
    /// [sample][block]; block 0 is all sectors, then the seven sectors.
    std::vector<std::pair<Sample, std::vector<SectorBlock>>> samples;
};

/// Mean CAR, standard error and significance per sample, acquirer sector
/// and window, for all deals and for control deals.
inline SectorCarTable sector_car_table(const std::vector<DealObservation>& observations,
                                       const std::vector<EventWindow>& windows, Tail tail = Tail::One) {
    SectorCarTable table;
    table.windows = windows;
    table.tail = tail;
    for (Sample s : kSamples) {
        std::vector<SectorBlock> blocks;
        std::vector<std::optional<Sector>> keys{std::nullopt};
        for (Sector sec : kSectors) keys.push_back(sec);
        for (const auto& key : keys) {
            SectorBlock block;
            block.sector = key;
            std::vector<std::vector<double>> all(windows.size()), ctl(windows.size());
            for (const auto& o : observations) {
                if (o.sample != s || (key && o.features.acquirer_sector != *key)) continue;
                ++block.n_all;
                if (o.features.control) ++block.n_control;
                for (std::size_t w = 0; w < windows.size(); ++w) {
                    const auto it = o.cars.find(key_of(windows[w]));
                    if (it == o.cars.end()) continue;
                    all[w].push_back(it->second);
                    if (o.features.control) ctl[w].push_back(it->second);
                }
            }
            for (std::size_t w = 0; w < windows.size(); ++w) {
                block.all.push_back(car_cell(all[w], tail));
                block.control.push_back(car_cell(ctl[w], tail));
            }
            blocks.push_back(std::move(block));
        }
        table.samples.emplace_back(s, std::move(blocks));
    }
    return table;
}

} // namespace mastudy
