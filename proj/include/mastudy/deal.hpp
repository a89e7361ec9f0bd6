#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "mastudy/date.hpp"
#include "mastudy/error.hpp"

namespace mastudy {

enum class DealStatus { Completed, Pending, Withdrawn };

inline std::string_view to_string(DealStatus s) {
    switch (s) {
    case DealStatus::Completed: return "completed";
    case DealStatus::Pending: return "pending";
    case DealStatus::Withdrawn: return "withdrawn";
    }
    return "unknown";
}

inline DealStatus parse_status(std::string_view text) {
    std::string t;
    for (char c : text) t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (t == "completed" || t == "complete") return DealStatus::Completed;
    if (t == "pending") return DealStatus::Pending;
    if (t == "withdrawn") return DealStatus::Withdrawn;
    fail(ErrorKind::Parse, "unknown deal status '" + std::string(text) + "'");
}

/// One M&A transaction. Percentages are in percent units [0, 100]; money in
/// millions of USD.
struct DealRecord {
    std::string deal_id;
    Date announcement_date;
    std::optional<Date> effective_date;
    DealStatus status = DealStatus::Completed;
    std::string acquirer_id;
    std::string acquirer_nation;
    bool acquirer_public = true;
    std::string acquirer_sic;
    std::optional<double> acquirer_market_cap;
    std::string target_nation;
    bool target_public = false;
    std::string target_sic;
    std::optional<double> pct_owned_before;
    std::optional<double> pct_acquired;
    std::optional<double> pct_owned_after;
    std::optional<double> transaction_value;
    bool clean_event = true;
};

inline constexpr double kOwnershipTolerancePct = 0.5;

/// Enforces the ownership invariants; throws InvalidArgument naming the deal.
inline void validate_deal(const DealRecord& d) {
    auto bad = [&](const std::string& what) { fail(ErrorKind::InvalidArgument, "deal " + d.deal_id + ": " + what); };
    auto in_range = [](double v) { return v >= 0.0 && v <= 100.0; };
    if (d.pct_owned_before && !in_range(*d.pct_owned_before)) bad("pct_owned_before outside [0,100]");
    if (d.pct_owned_after && !in_range(*d.pct_owned_after)) bad("pct_owned_after outside [0,100]");
    if (d.pct_acquired && !(*d.pct_acquired >= 0.0 && *d.pct_acquired <= 100.0)) bad("pct_acquired outside [0,100]");
    if (d.pct_owned_before && d.pct_owned_after && *d.pct_owned_before > *d.pct_owned_after)
        bad("pct_owned_before exceeds pct_owned_after");
    if (d.pct_owned_before && d.pct_owned_after && d.pct_acquired &&
        std::fabs((*d.pct_owned_after - *d.pct_owned_before) - *d.pct_acquired) > kOwnershipTolerancePct)
        bad("pct_owned_after - pct_owned_before inconsistent with pct_acquired");
}

} // namespace mastudy
