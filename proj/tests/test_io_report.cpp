#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "catch_amalgamated.hpp"

#include "mastudy/io.hpp"
#include "mastudy/pipeline.hpp"
#include "mastudy/report.hpp"
#include "sim_support.hpp"
#include "support.hpp"

using namespace mastudy;
using testing_support::d;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

csv::Table table_of(const std::string& text, const std::string& name = "test.csv") {
    std::istringstream in(text);
    return csv::read(in, name);
}

std::string parse_error(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        return e.what();
    }
    FAIL("expected a parse error");
    return {};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

DealRecord sample_deal() {
    DealRecord r;
    r.deal_id = "D1";
    r.announcement_date = d("2009-07-15");
    r.effective_date = d("2009-09-01");
    r.acquirer_id = "ACQ, Ltd";
    r.acquirer_nation = "Korea, Rep.";
    r.acquirer_sic = "0111";
    r.acquirer_market_cap = 1234.5;
    r.target_nation = "Vietnam";
    r.target_public = true;
    r.target_sic = "6021";
    r.pct_owned_before = 10.0;
    r.pct_acquired = 41.25;
    r.pct_owned_after = 51.25;
    return r;
}

} // namespace

TEST_CASE("deals round trip") {
    auto a = sample_deal();
    auto b = sample_deal();
    b.deal_id = "D2";
    b.effective_date.reset();
    b.status = DealStatus::Pending;
    b.transaction_value = 12.75;
    b.clean_event = false;
    b.acquirer_market_cap.reset();
    const auto text = io::write_deals({a, b}).str();
    CHECK(lines_of(text)[0] ==
          "deal_id,announcement_date,effective_date,status,acquirer_id,acquirer_nation,acquirer_public,acquirer_sic,"
          "acquirer_market_cap,target_nation,target_public,target_sic,pct_owned_before,pct_acquired,pct_owned_after,"
          "transaction_value,clean_event");
    const auto back = io::read_deals(table_of(text));
    REQUIRE(back.size() == 2);
    CHECK(io::write_deals(back).str() == text);
    CHECK(back[0].acquirer_id == "ACQ, Ltd");
    CHECK(back[0].acquirer_nation == "Korea, Rep.");
    CHECK(back[0].acquirer_sic == "0111");
    CHECK(*back[0].pct_owned_after == 51.25);
    CHECK_FALSE(back[1].effective_date.has_value());
    CHECK_FALSE(back[1].acquirer_market_cap.has_value());
    CHECK(back[1].status == DealStatus::Pending);
    CHECK_FALSE(back[1].clean_event);
}

TEST_CASE("deal reader errors name the problem") {
    const auto good = io::write_deals({sample_deal()}).str();
    auto lines = lines_of(good);
    std::string no_status = lines[0];
    no_status.replace(no_status.find("status"), 6, "state");
    const auto msg = parse_error([&] { io::read_deals(table_of(no_status + "\n" + lines[1] + "\n", "deals.csv")); });
    CHECK_THAT(msg, ContainsSubstring("status"));
    CHECK_THAT(msg, ContainsSubstring("deals.csv"));

    auto bad_date = good;
    bad_date.replace(bad_date.find("2009-07-15"), 10, "2009-13-15");
    CHECK_THAT(parse_error([&] { io::read_deals(table_of(bad_date)); }), ContainsSubstring("line 2"));
    CHECK_THAT(parse_error([] { table_of(""); }), ContainsSubstring("header"));
    CHECK_THAT(parse_error([] { table_of("a,b\n1,2,3\n"); }), ContainsSubstring("expected 2 fields"));

    // missing clean_event is tolerated with a warning
    std::string header = lines[0].substr(0, lines[0].rfind(','));
    std::string row = lines[1].substr(0, lines[1].rfind(','));
    std::vector<std::string> warnings;
    const auto deals = io::read_deals(table_of(header + "\n" + row + "\n"),
                                      [&](const std::string& w) { warnings.push_back(w); });
    CHECK(deals.size() == 1);
    CHECK(deals[0].clean_event);
    REQUIRE(warnings.size() == 1);
    CHECK_THAT(warnings[0], ContainsSubstring("clean_event"));
}

TEST_CASE("prices, calendars and benchmarks round trip") {
    sim::SimSpec spec;
    spec.n_firms = 3;
    spec.n_days = 260;
    spec.min_history = 200;
    const auto s = sim::simulate(spec);
    std::vector<const PriceSeries*> series{&s.market.benchmark};
    for (const auto& f : s.market.firms) series.push_back(&f);
    const auto text = io::write_prices(series).str();
    const auto back = io::read_prices(table_of(text));
    REQUIRE(back.size() == 4);
    for (const auto* p : series) {
        const auto& q = back.at(p->instrument_id());
        REQUIRE(q.size() == p->size());
        for (std::size_t i = 0; i < p->size(); ++i) {
            CHECK(q.observations()[i].date == p->observations()[i].date);
            CHECK_THAT(q.observations()[i].close, Catch::Matchers::WithinRel(p->observations()[i].close, 1e-11));
        }
    }
    std::vector<const PriceSeries*> again;
    for (const auto& [_, p] : back) again.push_back(&p);
    CHECK(io::write_prices(again).str().size() == text.size());

    const auto cal_text = io::write_calendar(s.market.calendar).str();
    const auto cals = io::read_calendars(table_of(cal_text));
    CHECK(cals.at(s.market.calendar.market_id()).size() == s.market.calendar.size());
    CHECK(io::write_calendar(cals.at(s.market.calendar.market_id())).str() == cal_text);

    const auto bm_text = io::write_benchmarks(s.benchmarks).str();
    CHECK(io::read_benchmarks(table_of(bm_text)) == s.benchmarks);
    CHECK_THAT(parse_error([] { io::read_benchmarks(table_of("deal_id,benchmark_instrument_id\nD1,X\nD1,Y\n")); }),
               ContainsSubstring("duplicate"));
}

TEST_CASE("reference tables round trip") {
    const auto t = ThresholdTable::bundled();
    const auto t_text = io::write_thresholds(t).str();
    CHECK(lines_of(t_text)[0] == "year,low_max,lm_max,um_max");
    CHECK(io::write_thresholds(io::read_thresholds(table_of(t_text))).str() == t_text);
    const auto c = ClassTable::bundled();
    const auto c_text = io::write_classes(c).str();
    CHECK(lines_of(c_text)[0] == "nation,year,class");
    CHECK(io::read_classes(table_of(c_text)).rows() == c.rows());
    const auto gni = io::read_gni(table_of("nation,year,gni_per_capita\nUSA,2001,35000\n"));
    CHECK(gni.at({"United States", 2001}) == 35000.0);
}

TEST_CASE("study outputs round trip") {
    sim::SimSpec spec;
    spec.n_firms = 6;
    spec.event_effect = 0.01;
    const auto s = sim::simulate(spec);
    const auto study = testing_support::study_of(s);
    const auto cars_text = io::write_cars(study.results).str();
    const auto ars_text = io::write_ars(study.results).str();
    CHECK(lines_of(cars_text)[0] == "deal_id,window_start,window_end,car,alpha,beta,resid_var,n_est");
    CHECK(lines_of(ars_text)[0] == "deal_id,offset,date,ar");
    const auto cars_table = table_of(cars_text), ars_table = table_of(ars_text);
    const auto back = io::read_cars(cars_table, &ars_table);
    REQUIRE(back.size() == study.results.size());
    CHECK(io::write_cars(back).str() == cars_text);
    CHECK(io::write_ars(back).str() == ars_text);
    for (std::size_t i = 0; i < back.size(); ++i) {
        CHECK(back[i].day0 == study.results[i].day0);
        CHECK(back[i].fit.n_est == study.results[i].fit.n_est);
        CHECK(back[i].ar_dates.at(-1) == study.results[i].ar_dates.at(-1));
        CHECK(back[i].cars.size() == 3);
        // restored fits still support the Brown-Warner variance
        CHECK_THAT(estimation_variance(back[i].fit),
                   Catch::Matchers::WithinRel(estimation_variance(study.results[i].fit), 1e-5));
    }
    CHECK(io::windows_of(back) == liquidity_windows());

    const std::vector<Exclusion> ex{{"D9", ErrorKind::InsufficientHistory, "only 50 returns"}};
    CHECK(io::write_exclusions(ex).str() == "deal_id,reason,message\nD9,InsufficientHistory,only 50 returns\n");
}

TEST_CASE("gains round trip") {
    ValueGain g;
    g.deal_id = "D1";
    g.control = true;
    g.cars = {{{0, 1}, 0.01}, {{-1, 1}, 0.02}, {{-2, 1}, 0.025}};
    g.market_cap_used = 1000.0;
    g.dollar_value_gain = 20.0;
    ValueGain h = g;
    h.deal_id = "D2";
    h.control = false;
    h.transaction_value = 40.0;
    h.net_synergy = 0.5;
    const auto text = io::write_gains({g, h}).str();
    CHECK(lines_of(text)[0] == "deal_id,control,car01,car11,car21,market_cap,dvg,transaction_value,net_synergy");
    CHECK(lines_of(text)[1] == "D1,1,0.01,0.02,0.025,1000,20,,");
    CHECK(io::write_gains(io::read_gains(table_of(text))).str() == text);
}

TEST_CASE("atomic writes create directories and replace content") {
    const auto dir = std::filesystem::temp_directory_path() / "mastudy_io_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    const auto path = (dir / "out.csv").string();
    io::write_atomic(path, "a\n1\n");
    io::write_atomic(path, "a\n2\n");
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "a\n2\n");
    CHECK(std::distance(std::filesystem::directory_iterator(dir), {}) == 1);
    std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("estimate cells follow the table convention") {
    CHECK(report::estimate_cell(0.013, 0.004, 0.001) == "0.013*** (0.004)");
    CHECK(report::estimate_cell(0.026, 0.010, 0.03) == "0.026** (0.010)");
    CHECK(report::estimate_cell(0.026, 0.015, 0.07) == "0.026* (0.015)");
    CHECK(report::estimate_cell(-0.002, 0.004, 0.6) == "-0.002 (0.004)");
    CHECK(report::estimate_cell(0.014, std::nullopt, std::nullopt) == "0.014 (-)");
    CHECK(report::estimate_cell(std::nullopt, std::nullopt, std::nullopt) == "-");
    CHECK(stars(0.0099) == "***");
    CHECK(stars(0.01) == "**");
    CHECK(stars(0.0499) == "**");
    CHECK(stars(0.05) == "*");
    CHECK(stars(0.1) == "");
}

TEST_CASE("funnel report layout") {
    FunnelReport f;
    f.input_count = 4443;
    const std::size_t counts[] = {3853, 2370, 762, 655, 583, 308, 308, 308};
    for (int i = 0; i < 8; ++i) f.gates.push_back({i + 1, "gate " + std::to_string(i + 1), counts[i]});
    const auto r = report::funnel(f);
    CHECK_THAT(r.text, ContainsSubstring("All deals"));
    CHECK_THAT(r.text, ContainsSubstring("4443"));
    const auto csv_lines = lines_of(r.csv);
    REQUIRE(csv_lines.size() == 10);
    CHECK(csv_lines[0] == "criterion,label,count_after");
    CHECK(csv_lines[1] == "0,All deals,4443");
    CHECK(csv_lines[9] == "8,gate 8,308");
}

namespace {

std::vector<DealObservation> synthetic_observations(std::size_t n_firms = 300) {
    sim::SimSpec spec;
    spec.n_firms = n_firms;
    spec.seed = 99;
    spec.feature_effects = {{"control", 0.01}};
    const auto s = sim::simulate(spec);
    const auto study = testing_support::study_of(s);
    const auto classes = ClassTable::bundled();
    const auto thresholds = ThresholdTable::bundled();
    const pipeline::Classification c{&classes, &thresholds, nullptr};
    std::vector<io::ScreenedDeal> screened;
    for (const auto& deal : s.deals) screened.push_back(pipeline::label(deal, c));
    return pipeline::observations(screened, study.results);
}

} // namespace

TEST_CASE("summary and sector reports have the table shape") {
    const auto obs = synthetic_observations();
    const auto windows = liquidity_windows();
    const auto summary = report::summary(summary_table(obs, windows));
    for (const char* s : {"Sample 1 (DM-VN)", "Sample 2 (EM-VN)", "Sample 3 (VN-VN)", "Median transaction size",
                          "Private target (%)", "Diversifying acquisition (%)", "Window (0,1)", "Acquirer industry",
                          "Target industry", "Financial services"})
        CHECK_THAT(summary.text, ContainsSubstring(s));
    CHECK(lines_of(summary.csv)[0] == "row,DM-VN,EM-VN,VN-VN");
    // percentages with three decimals
    CHECK(std::regex_search(summary.text, std::regex(R"(\d+\.\d{3}%)")));

    const auto sectors = report::sector_cars(sector_car_table(obs, windows));
    CHECK(lines_of(sectors.csv)[0] == "sample,sector,group,window,n,mean,se,p,stars");
    for (const char* s : {"All deal", "Control", "NO", "N1", "N7", "(All)", "one-tailed"})
        CHECK_THAT(sectors.text, ContainsSubstring(s));
    CHECK(std::regex_search(sectors.text, std::regex(R"(-?\d\.\d{3}\**\s\(\d\.\d{3}\))")));
}

TEST_CASE("sector report marks single and empty cells") {
    DealObservation o;
    o.deal.deal_id = "X1";
    o.features.deal_id = "X1";
    o.features.acquirer_sector = Sector::FinancialServices;
    o.sample = Sample::EmVn;
    o.cars[{0, 1}] = 0.014;
    const std::vector<EventWindow> windows{{0, 1, WindowFamily::Liquidity}};
    const auto r = report::sector_cars(sector_car_table({o}, windows));
    CHECK_THAT(r.text, ContainsSubstring("0.014 (-)"));
    CHECK(std::regex_search(r.text, std::regex(R"(\s-\s)")));
}

TEST_CASE("regression report layout") {
    const auto obs = synthetic_observations();
    const auto windows = liquidity_windows();
    std::vector<CarResult> cars;
    for (const auto& o : obs) {
        CarResult c;
        c.deal_id = o.deal.deal_id;
        for (const auto& w : windows) c.cars.emplace_back(w, o.cars.at(key_of(w)));
        cars.push_back(c);
    }
    const auto responses = pipeline::responses(cars, windows);
    const auto t7 = run_table7(pipeline::features_for(obs, Sample::DmVn), responses);
    const auto r7 = report::regression(t7);
    for (const char* s : {"(1)", "(8)", "Control", "Constant", "Adj. R-square", "Time-trend", "Transaction value"})
        CHECK_THAT(r7.text, ContainsSubstring(s));
    const auto nline = lines_of(r7.text);
    CHECK(std::any_of(nline.begin(), nline.end(), [](const std::string& l) { return l.rfind("N ", 0) == 0; }));
    CHECK(lines_of(r7.csv)[0] == "spec_id,window,term,coef,se,t,p,stars,n,adj_r2");
    CHECK(std::regex_search(r7.text, std::regex(R"(-?\d\.\d{3}\**\s\(\d\.\d{3}\))")));
    // column 8 drops deals without a transaction value
    CHECK(*t7.n_for(7) < *t7.n_for(0));

    const auto t9 = run_table9(pipeline::features_for(obs), pipeline::samples_of(obs), responses);
    const auto r9 = report::regression(t9);
    for (const char* s : {"1 (All-VN)", "2 (CB-VN)", "3 (VN-VN)", "Control*DM Acquirer", "MV*Control"})
        CHECK_THAT(r9.text, ContainsSubstring(s));
}

TEST_CASE("gains report has dual N rows") {
    const auto obs = synthetic_observations();
    std::vector<CarResult> cars;
    for (const auto& o : obs) {
        CarResult c;
        c.deal_id = o.deal.deal_id;
        for (long k = -2; k <= 1; ++k) c.abnormal_returns[k] = o.cars.at({0, 1}) / 4.0;
        for (const auto& w : liquidity_windows()) c.cars.emplace_back(w, o.cars.at(key_of(w)));
        cars.push_back(c);
    }
    const auto rows = pipeline::value_gains(obs, cars, Sample::DmVn);
    const auto g = gains_panel(rows, liquidity_windows());
    const auto r = report::gains(g);
    for (const char* s : {"Panel A", "Panel B", "Mean", "Median", "Top quartile", "Bottom quartile", "Std dev",
                          "Net synergy", "Aggregate dollar value gain", "Wilcoxon rank-sum"})
        CHECK_THAT(r.text, ContainsSubstring(s));
    const auto& car_n = g.control.columns.front().second.n;
    const auto& ns_n = g.control.columns.back().second.n;
    CHECK(ns_n < car_n);
    CHECK_THAT(r.csv, ContainsSubstring("control,Net synergy return per transaction," + std::to_string(ns_n)));
}

TEST_CASE("distribution and significance reports") {
    const auto obs = synthetic_observations();
    const auto windows = liquidity_windows();
    const auto dt = report::distribution_table(obs, windows);
    REQUIRE(dt.groups == std::vector<std::string>{"ALL", "DM-VN", "EM-VN", "VN-VN"});
    const auto r = report::distribution(dt);
    CHECK_THAT(r.text, ContainsSubstring("ALL N="));
    CHECK_THAT(r.text, ContainsSubstring("S="));
    CHECK_THAT(r.text, ContainsSubstring("K="));
    CHECK(dt.cells[0][0].normality.has_value());

    const auto rows = report::significance_rows(obs, windows);
    CHECK(rows.size() == 12);
    const auto s = report::significance(rows, Tail::One);
    CHECK_THAT(s.text, ContainsSubstring("Brown-Warner t"));
    CHECK_THAT(s.text, ContainsSubstring("Signed-rank"));
    CHECK(lines_of(s.csv)[0] == "group,window,n,mean_car,bw_t,bw_p,cs_t,cs_p,rank_method,rank_stat,rank_p,tail");
}

TEST_CASE("ownership and correlation reports") {
    std::vector<DealRecord> deals;
    for (double after : {30.0, 60.0, 100.0}) {
        auto x = sample_deal();
        x.pct_owned_after = after;
        deals.push_back(x);
    }
    const auto r = report::ownership({{Sample::DmVn, ownership_transition_matrix(deals)}});
    for (const char* s : {"0-50%", "50-95%", "95-100%", "No", "Yes", "<20%", "20-40%", "40-50%"})
        CHECK_THAT(r.text, ContainsSubstring(s));
    std::vector<DealFeatures> f;
    for (int i = 0; i < 10; ++i) {
        DealFeatures x;
        x.control = i % 2;
        x.log_mv = 1.0 + i;
        f.push_back(x);
    }
    const auto c = report::correlation(correlation_matrix(f, {"control", "mv", "mv*control"}));
    CHECK_THAT(c.text, ContainsSubstring("MV*Control"));
    CHECK_THAT(c.text, ContainsSubstring("1.000"));
}
