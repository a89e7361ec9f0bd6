#include <cmath>
#include <sstream>

#include "catch_amalgamated.hpp"

#include "mastudy/csv.hpp"
#include "mastudy/format.hpp"
#include "mastudy/market_data.hpp"
#include "support.hpp"

using namespace mastudy;
using namespace testing_support;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Parse;
}
} // namespace

TEST_CASE("dates parse strictly and format back") {
    CHECK(format_date(d("2015-12-31")) == "2015-12-31");
    CHECK(kind_of([] { parse_date("2015-2-01"); }) == ErrorKind::Parse);
    CHECK(kind_of([] { parse_date("2015-02-30"); }) == ErrorKind::Parse);
    CHECK(is_weekend(d("2016-01-02")));
    CHECK_FALSE(is_weekend(d("2016-01-04")));
    CHECK(add_days(d("2015-12-31"), 1) == d("2016-01-01"));
}

TEST_CASE("log returns") {
    const auto cal = calendar(3);
    SECTION("flat prices give zero") {
        const PriceSeries p("X", {{cal[0], 100.0}, {cal[1], 100.0}});
        const auto r = compute_log_returns(p);
        REQUIRE(r.size() == 1);
        CHECK(r.observations()[0].value == 0.0);
    }
    SECTION("ln(1.05)") {
        const PriceSeries p("X", {{cal[0], 100.0}, {cal[1], 105.0}});
        CHECK_THAT(compute_log_returns(p).observations()[0].value, WithinAbs(0.04879016417, 1e-11));
    }
    SECTION("round trip is antisymmetric") {
        const PriceSeries p("X", {{cal[0], 100.0}, {cal[1], 105.0}, {cal[2], 100.0}});
        const auto r = compute_log_returns(p);
        CHECK_THAT(r.observations()[0].value, WithinAbs(0.04879016417, 1e-11));
        CHECK_THAT(r.observations()[1].value, WithinAbs(-0.04879016417, 1e-11));
        CHECK(r.observations()[0].date == cal[1]);
    }
    SECTION("errors") {
        CHECK(kind_of([&] { compute_log_returns(PriceSeries("X", {{cal[0], 100.0}})); }) == ErrorKind::EmptySeries);
        CHECK(kind_of([&] { PriceSeries("X", {{cal[0], 100.0}, {cal[1], 0.0}}); }) == ErrorKind::NonPositivePrice);
        CHECK(kind_of([&] { PriceSeries("X", {{cal[1], 100.0}, {cal[0], 101.0}}); }) == ErrorKind::InvalidArgument);
    }
}

TEST_CASE("returns reconstruct prices and are scale invariant") {
    const auto cal = calendar(400);
    std::vector<double> r(cal.size());
    for (std::size_t i = 1; i < r.size(); ++i) r[i] = 0.03 * wiggle(i);
    const auto p = prices("X", cal, r);
    const auto ret = compute_log_returns(p);
    REQUIRE(ret.size() == p.size() - 1);
    double lp = std::log(p.observations()[0].close);
    for (std::size_t i = 0; i < ret.size(); ++i) {
        lp += ret.observations()[i].value;
        CHECK_THAT(std::exp(lp), WithinRel(p.observations()[i + 1].close, 1e-10));
    }
    std::vector<PriceObservation> scaled;
    for (const auto& o : p.observations()) scaled.push_back({o.date, o.close * 37.25});
    const auto ret2 = compute_log_returns(PriceSeries("Y", scaled));
    for (std::size_t i = 0; i < ret.size(); ++i)
        CHECK_THAT(ret2.observations()[i].value, WithinAbs(ret.observations()[i].value, 1e-14));
}

TEST_CASE("calendar invariants and series validation") {
    CHECK(kind_of([] { TradingCalendar("M", {d("2010-01-05"), d("2010-01-05")}); }) == ErrorKind::InvalidArgument);
    const auto cal = calendar(10);
    std::vector<PriceObservation> obs;
    for (std::size_t i = 0; i < cal.size(); ++i)
        if (i != 4) obs.push_back({cal[i], 100.0 + static_cast<double>(i)});
    CHECK(kind_of([&] { validate_against(PriceSeries("X", obs), cal); }) == ErrorKind::InvalidArgument);
    const PriceSeries weekend("X", {{d("2010-01-09"), 1.0}});
    CHECK(kind_of([&] { validate_against(weekend, cal); }) == ErrorKind::InvalidArgument);
    obs.insert(obs.begin() + 4, {cal[4], 104.0});
    CHECK_NOTHROW(validate_against(PriceSeries("X", obs), cal));
}

TEST_CASE("event clock") {
    const auto cal = calendar(300);
    SECTION("trading-day announcement is day 0") {
        const auto clock = build_event_clock(cal, cal[120]);
        CHECK(clock.day0() == cal[120]);
        CHECK(*clock.offset_of(cal[125]) == 5);
    }
    SECTION("weekend announcement rolls forward") {
        const Date sat = d("2010-01-09");
        REQUIRE(is_weekend(sat));
        const auto clock = build_event_clock(cal, sat);
        CHECK(clock.day0() == d("2010-01-11"));
        CHECK(clock.announcement_date() == sat);
    }
    SECTION("offset -196 from position 250 is position 54") {
        const auto clock = build_event_clock(cal, cal[250]);
        CHECK(*clock.date_at(-196) == cal[54]);
        CHECK(clock.min_offset() == -250);
        CHECK(clock.max_offset() == 49);
        CHECK_FALSE(clock.date_at(50).has_value());
    }
    SECTION("out of range") {
        CHECK(kind_of([&] { build_event_clock(cal, d("2009-12-31")); }) == ErrorKind::DateOutOfRange);
        CHECK(kind_of([&] { build_event_clock(cal, add_days(cal[299], 1)); }) == ErrorKind::DateOutOfRange);
    }
}

TEST_CASE("slice_window") {
    const auto cal = calendar(300);
    std::vector<double> r(cal.size());
    for (std::size_t i = 1; i < r.size(); ++i) r[i] = 0.01 * static_cast<double>(i % 7);
    const auto ret = compute_log_returns(prices("X", cal, r));
    const auto clock = build_event_clock(cal, cal[250]);
    CHECK(slice_window(ret, clock, 0, 0).size() == 1);
    CHECK_THAT(slice_window(ret, clock, 0, 0)[0], WithinAbs(r[250], 1e-12));
    CHECK(slice_window(ret, clock, -2, 1).size() == 4);
    SECTION("concatenation") {
        const auto a = slice_window(ret, clock, -30, -11);
        const auto b = slice_window(ret, clock, -10, 20);
        auto ab = a;
        ab.insert(ab.end(), b.begin(), b.end());
        CHECK(ab == slice_window(ret, clock, -30, 20));
    }
    SECTION("missing history") {
        const auto short_clock = build_event_clock(cal, cal[150]);
        CHECK(kind_of([&] { slice_window(ret, short_clock, -196, -65); }) == ErrorKind::InsufficientHistory);
        CHECK(kind_of([&] { slice_window(ret, clock, 1, 0); }) == ErrorKind::InvalidArgument);
    }
}

TEST_CASE("csv reading") {
    std::istringstream in("\xEF\xBB\xBFinstrument_id,date,close\n\"A,1\",2010-01-04,1.5\n\nB,2010-01-05, 2 \n");
    const auto t = csv::read(in, "prices.csv");
    REQUIRE(t.size() == 2);
    CHECK(t.cell(0, "instrument_id") == "A,1");
    CHECK(t.cell(1, "close") == "2");
    try {
        t.require({"instrument_id", "price"});
        FAIL("expected missing column");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        CHECK(std::string(e.what()).find("'price'") != std::string::npos);
    }
    std::istringstream bad("a,b\n1\n");
    CHECK(kind_of([&] { csv::read(bad, "x.csv"); }) == ErrorKind::Parse);
    CHECK_FALSE(csv::to_optional_double("NA", "x").has_value());
    CHECK(kind_of([] { csv::to_double("1.5x", "x"); }) == ErrorKind::Parse);
    CHECK(csv::escape("a\"b") == "\"a\"\"b\"");
}

TEST_CASE("six significant digits without exponent") {
    CHECK(fmt6(0.0) == "0");
    CHECK(fmt6(1.0) == "1");
    CHECK(fmt6(0.012345678) == "0.0123457");
    CHECK(fmt6(123456789.0) == "123457000");
    CHECK(fmt6(-2.5e-7) == "-0.00000025");
    CHECK(fmt6(9.9999996) == "10");
    CHECK(fmt6(-0.0) == "0");
    CHECK(significant(100.123456789012, 12) == "100.123456789");
    CHECK(stars(0.005) == "***");
    CHECK(stars(0.01) == "**");
    CHECK(stars(0.05) == "*");
    CHECK(stars(0.10) == "");
    CHECK(percent(0.0067) == "0.670%");
}
