#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "mastudy/deal.hpp"
#include "mastudy/error.hpp"
#include "mastudy/reference_tables.hpp"

namespace mastudy {

enum class IncomeClass { L, LM, UM, H };

inline std::string_view to_string(IncomeClass c) {
    switch (c) {
    case IncomeClass::L: return "L";
    case IncomeClass::LM: return "LM";
    case IncomeClass::UM: return "UM";
    case IncomeClass::H: return "H";
    }
    return "?";
}

inline IncomeClass parse_income_class(std::string_view raw) {
    std::string text;
    for (char c : raw) text.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (text == "L") return IncomeClass::L;
    if (text == "LM") return IncomeClass::LM;
    if (text == "UM") return IncomeClass::UM;
    if (text == "H") return IncomeClass::H;
    fail(ErrorKind::Parse, "unknown income class '" + std::string(raw) + "'");
}

struct IncomeThresholds {
    int year = 0;
    double low_max = 0.0;
    double lower_middle_max = 0.0;
    double upper_middle_max = 0.0;

    void validate() const {
        if (!(low_max < lower_middle_max && lower_middle_max < upper_middle_max))
            fail(ErrorKind::InvalidArgument, "income thresholds for " + std::to_string(year) + " not increasing");
    }
};

struct CountryClass {
    std::string nation;
    int year = 0;
    IncomeClass income_class = IncomeClass::L;
};

/// Canonical nation name: case-insensitive alias lookup, otherwise the
/// trimmed input unchanged.
inline std::string normalize_nation(std::string_view nation) {
    std::string key;
    for (char c : nation) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    while (!key.empty() && key.back() == ' ') key.pop_back();
    while (!key.empty() && key.front() == ' ') key.erase(key.begin());
    for (const auto& a : reference::kNationAliases)
        if (a.alias == key) return std::string(a.canonical);
    std::string out(nation);
    while (!out.empty() && out.back() == ' ') out.pop_back();
    while (!out.empty() && out.front() == ' ') out.erase(out.begin());
    return out;
}

inline bool is_vietnam(std::string_view nation) { return normalize_nation(nation) == "Vietnam"; }

class ThresholdTable {
public:
    void add(const IncomeThresholds& t) {
        t.validate();
        rows_[t.year] = t;
    }
    const IncomeThresholds& at(int year) const {
        const auto it = rows_.find(year);
        if (it == rows_.end()) fail(ErrorKind::MissingThresholds, "no income thresholds for " + std::to_string(year));
        return it->second;
    }
    const std::map<int, IncomeThresholds>& rows() const { return rows_; }

    static ThresholdTable bundled() {
        ThresholdTable t;
        for (const auto& r : reference::kIncomeThresholds)
            t.add({r.year, r.low_max, r.lower_middle_max, r.upper_middle_max});
        return t;
    }

private:
    std::map<int, IncomeThresholds> rows_;
};

class ClassTable {
public:
    void add(const std::string& nation, int year, IncomeClass c) { rows_[{normalize_nation(nation), year}] = c; }

    std::optional<IncomeClass> find(const std::string& nation, int year) const {
        const auto it = rows_.find({normalize_nation(nation), year});
        if (it == rows_.end()) return std::nullopt;
        return it->second;
    }
    const std::map<std::pair<std::string, int>, IncomeClass>& rows() const { return rows_; }

    static ClassTable bundled() {
        ClassTable t;
        for (const auto& row : reference::kCountryClasses) {
            std::istringstream in{std::string(row.classes)};
            std::string code;
            int year = reference::kFirstClassYear;
            while (in >> code) t.add(std::string(row.nation), year++, parse_income_class(code));
        }
        return t;
    }

private:
    std::map<std::pair<std::string, int>, IncomeClass> rows_;
};

/// L if gni <= low_max, LM if <= lower_middle_max, UM if <= upper_middle_max,
/// else H.
inline CountryClass classify_country(const std::string& nation, int year, double gni_per_capita,
                                     const IncomeThresholds& thresholds) {
    if (thresholds.year != year)
        fail(ErrorKind::MissingThresholds, "thresholds are for " + std::to_string(thresholds.year) + ", not " +
                                               std::to_string(year));
    IncomeClass c = IncomeClass::H;
    if (gni_per_capita <= thresholds.low_max) c = IncomeClass::L;
    else if (gni_per_capita <= thresholds.lower_middle_max) c = IncomeClass::LM;
    else if (gni_per_capita <= thresholds.upper_middle_max) c = IncomeClass::UM;
    return {normalize_nation(nation), year, c};
}

inline CountryClass classify_country(const std::string& nation, int year, double gni_per_capita,
                                     const ThresholdTable& thresholds) {
    return classify_country(nation, year, gni_per_capita, thresholds.at(year));
}

/// GNI per capita observations keyed by (canonical nation, year).
using GniTable = std::map<std::pair<std::string, int>, double>;

/// Income class of a nation in a year: the class grid first, then GNI data
/// against the year's thresholds.
inline std::optional<CountryClass> resolve_class(const std::string& nation, int year, const ClassTable& classes,
                                                 const ThresholdTable& thresholds, const GniTable& gni = {}) {
    const std::string canonical = normalize_nation(nation);
    if (const auto c = classes.find(canonical, year)) return CountryClass{canonical, year, *c};
    if (const auto it = gni.find({canonical, year}); it != gni.end())
        return classify_country(canonical, year, it->second, thresholds);
    return std::nullopt;
}

inline bool developed_market(const std::optional<CountryClass>& class_by_year) {
    if (!class_by_year) fail(ErrorKind::MissingClassification, "no income classification for acquirer");
    return class_by_year->income_class == IncomeClass::H;
}

enum class Sample { DmVn, EmVn, VnVn, Excluded };

inline std::string_view to_string(Sample s) {
    switch (s) {
    case Sample::DmVn: return "DM-VN";
    case Sample::EmVn: return "EM-VN";
    case Sample::VnVn: return "VN-VN";
    case Sample::Excluded: return "excluded";
    }
    return "excluded";
}

inline Sample parse_sample(std::string_view text) {
    if (text == "DM-VN") return Sample::DmVn;
    if (text == "EM-VN") return Sample::EmVn;
    if (text == "VN-VN") return Sample::VnVn;
    if (text == "excluded") return Sample::Excluded;
    fail(ErrorKind::Parse, "unknown sample label '" + std::string(text) + "'");
}

struct SampleLabel {
    Sample sample = Sample::Excluded;
    std::string reason; // set when excluded
};

inline SampleLabel assign_sample(const DealRecord& deal, const std::optional<CountryClass>& acquirer_class) {
    if (!is_vietnam(deal.target_nation)) return {Sample::Excluded, "target is not Vietnamese"};
    if (is_vietnam(deal.acquirer_nation)) return {Sample::VnVn, {}};
    if (!acquirer_class) return {Sample::Excluded, "acquirer nation unclassified"};
    return {acquirer_class->income_class == IncomeClass::H ? Sample::DmVn : Sample::EmVn, {}};
}

enum class Sector {
    AgricultureConsumer,
    BasicManufacturing,
    MachineryElectronics,
    UtilitiesTransportation,
    WholesaleRetail,
    FinancialServices,
    TourismMiscellaneous,
};

inline constexpr std::array<Sector, 7> kSectors{
    Sector::AgricultureConsumer,     Sector::BasicManufacturing, Sector::MachineryElectronics,
    Sector::UtilitiesTransportation, Sector::WholesaleRetail,    Sector::FinancialServices,
    Sector::TourismMiscellaneous,
};

inline std::string_view to_string(Sector s) {
    switch (s) {
    case Sector::AgricultureConsumer: return "Agriculture and consumer products";
    case Sector::BasicManufacturing: return "Basic manufacturing";
    case Sector::MachineryElectronics: return "Machinery and electronics";
    case Sector::UtilitiesTransportation: return "Utilities and transportation";
    case Sector::WholesaleRetail: return "Wholesale and retail trade";
    case Sector::FinancialServices: return "Financial services";
    case Sector::TourismMiscellaneous: return "Tourism and miscellaneous services";
    }
    return "";
}

/// SIC codes are 2-4 digit strings; shorter codes are right-padded with
/// zeros so "60" and "6000" denote the same major group.
inline std::string normalize_sic(std::string_view sic) {
    if (sic.size() < 2 || sic.size() > 4 ||
        !std::all_of(sic.begin(), sic.end(), [](char c) { return c >= '0' && c <= '9'; }))
        fail(ErrorKind::MalformedSic, "SIC code '" + std::string(sic) + "' must have 2-4 digits");
    std::string out(sic);
    out.resize(4, '0');
    return out;
}

inline Sector sic_sector(std::string_view sic) {
    const std::string code = normalize_sic(sic);
    const int major = (code[0] - '0') * 10 + (code[1] - '0');
    if (major <= 19) return Sector::AgricultureConsumer;
    if (major <= 29) return Sector::BasicManufacturing;
    if (major <= 39) return Sector::MachineryElectronics;
    if (major <= 49) return Sector::UtilitiesTransportation;
    if (major <= 59) return Sector::WholesaleRetail;
    if (major <= 69) return Sector::FinancialServices;
    return Sector::TourismMiscellaneous;
}

inline constexpr int kTimeTrendCenter = 2005;
inline constexpr double kControlThresholdPct = 50.0;
inline constexpr double kDummy95ThresholdPct = 95.0;

struct DealFeatures {
    std::string deal_id;
    bool control = false;
    bool dm_acquirer = false;
    bool listed_target = false;
    bool diversifying = false;
    bool dummy95 = false;
    int time_trend = 0;
    std::optional<double> log_mv;
    std::optional<double> log_post_ownership;
    std::optional<double> log_transaction_value;
    Sector acquirer_sector = Sector::AgricultureConsumer;
    Sector target_sector = Sector::AgricultureConsumer;
};

namespace detail {
inline std::optional<double> positive_log(const std::optional<double>& v) {
    if (!v || !(*v > 0.0)) return std::nullopt;
    return std::log(*v);
}
} // namespace detail

inline DealFeatures derive_features(const DealRecord& deal, const std::optional<CountryClass>& acquirer_class) {
    if (!deal.pct_owned_after) fail(ErrorKind::MissingOwnership, "deal " + deal.deal_id + " lacks pct_owned_after");
    DealFeatures f;
    f.deal_id = deal.deal_id;
    f.control = *deal.pct_owned_after >= kControlThresholdPct;
    f.dummy95 = *deal.pct_owned_after >= kDummy95ThresholdPct;
    f.dm_acquirer = !is_vietnam(deal.acquirer_nation) && acquirer_class &&
                    acquirer_class->income_class == IncomeClass::H;
    f.listed_target = deal.target_public;
    const std::string a = normalize_sic(deal.acquirer_sic), t = normalize_sic(deal.target_sic);
    f.diversifying = a.compare(0, 3, t, 0, 3) != 0;
    f.time_trend = year_of(deal.announcement_date) - kTimeTrendCenter;
    f.log_mv = detail::positive_log(deal.acquirer_market_cap);
    f.log_post_ownership = detail::positive_log(deal.pct_owned_after);
    f.log_transaction_value = detail::positive_log(deal.transaction_value);
    f.acquirer_sector = sic_sector(deal.acquirer_sic);
    f.target_sector = sic_sector(deal.target_sic);
    return f;
}

struct FunnelConfig {
    std::string target_nation = "Vietnam";
    Date window_start{std::chrono::year{1995}, std::chrono::January, std::chrono::day{1}};
    Date window_end{std::chrono::year{2015}, std::chrono::December, std::chrono::day{31}};
    double min_owned_after_pct = 5.0;
    double max_owned_before_pct = 50.0; // exclusive
    long min_history_days = 195;
};

struct FunnelGate {
    int criterion = 0;
    std::string label;
    std::size_t count_after = 0;
};

struct FunnelReport {
    std::size_t input_count = 0;
    std::vector<FunnelGate> gates;
    std::vector<DealRecord> survivors;
    /// Deal id -> criterion number of the gate that removed it.
    std::map<std::string, int> removed_at;
};

/// Pre-announcement trading days available per deal id.
using HistoryCounts = std::map<std::string, long, std::less<>>;

/// Applies the eight sample criteria in order, recording survivors after
/// each. When `history` is nullopt the history gate is not evaluated and
/// passes every deal.
inline FunnelReport apply_funnel(const std::vector<DealRecord>& deals, const std::optional<HistoryCounts>& history,
                                 const FunnelConfig& config = {}) {
    using Predicate = std::function<bool(const DealRecord&)>;
    const auto in_window = [&](const Date& d) { return !(d < config.window_start) && !(config.window_end < d); };
    const std::vector<std::pair<std::string, Predicate>> gates{
        {"Vietnamese target",
         [&](const DealRecord& d) { return normalize_nation(d.target_nation) == normalize_nation(config.target_nation); }},
        {"Announced between " + format_date(config.window_start) + " and " + format_date(config.window_end),
         [&](const DealRecord& d) { return in_window(d.announcement_date); }},
        {"Effective between " + format_date(config.window_start) + " and " + format_date(config.window_end),
         [&](const DealRecord& d) {
             return d.status == DealStatus::Completed && d.effective_date && in_window(*d.effective_date);
         }},
        {"Public acquirer", [](const DealRecord& d) { return d.acquirer_public; }},
        {"Acquired share after transaction is at least 5%",
         [&](const DealRecord& d) { return d.pct_owned_after && *d.pct_owned_after >= config.min_owned_after_pct; }},
        {"Acquirer does not have control in target before transaction",
         [&](const DealRecord& d) {
             return !d.pct_owned_before || *d.pct_owned_before < config.max_owned_before_pct;
         }},
        {"No other event", [](const DealRecord& d) { return d.clean_event; }},
        {"At least " + std::to_string(config.min_history_days) + " trading days before announcement",
         [&](const DealRecord& d) {
             if (!history) return true;
             const auto it = history->find(d.deal_id);
             return it != history->end() && it->second >= config.min_history_days;
         }},
    };

    FunnelReport report;
    report.input_count = deals.size();
    std::vector<DealRecord> current = deals;
    int criterion = 1;
    for (const auto& [label, keep] : gates) {
        std::vector<DealRecord> next;
        for (auto& d : current) {
            if (keep(d)) next.push_back(std::move(d));
            else report.removed_at[d.deal_id] = criterion;
        }
        current = std::move(next);
        report.gates.push_back({criterion, label, current.size()});
        ++criterion;
    }
    report.survivors = std::move(current);
    return report;
}

/// Rows: post-deal ownership [0,50), [50,95), [95,100]. Columns: no prior
/// stake, any prior stake, (0,20), [20,40), [40,50).
struct OwnershipGrid {
    static constexpr std::array<std::string_view, 3> kRows{"0-50%", "50-95%", "95-100%"};
    static constexpr std::array<std::string_view, 5> kColumns{"No", "Yes", "<20%", "20-40%", "40-50%"};
    std::array<std::array<std::size_t, 5>, 3> counts{};
    std::size_t untallied = 0; // missing ownership or prior stake >= 50%
};

inline OwnershipGrid ownership_transition_matrix(const std::vector<DealRecord>& deals) {
    OwnershipGrid grid;
    for (const auto& d : deals) {
        if (!d.pct_owned_after) {
            ++grid.untallied;
            continue;
        }
        const double before = d.pct_owned_before.value_or(0.0);
        const double after = *d.pct_owned_after;
        if (before >= kControlThresholdPct) {
            ++grid.untallied;
            continue;
        }
        const std::size_t row = after < kControlThresholdPct ? 0 : (after < kDummy95ThresholdPct ? 1 : 2);
        if (before <= 0.0) {
            ++grid.counts[row][0];
        } else {
            ++grid.counts[row][1];
            ++grid.counts[row][before < 20.0 ? 2 : (before < 40.0 ? 3 : 4)];
        }
    }
    return grid;
}

} // namespace mastudy
