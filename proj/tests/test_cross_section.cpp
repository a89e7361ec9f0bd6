#include <algorithm>
#include <random>

#include "catch_amalgamated.hpp"

#include "mastudy/cross_section.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mastudy;
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

DesignMatrix design_of(const std::vector<std::vector<double>>& rows, const std::vector<double>& y) {
    DesignMatrix d;
    d.columns.push_back(kIntercept);
    for (std::size_t j = 1; j < rows[0].size(); ++j) d.columns.push_back("x" + std::to_string(j));
    d.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    d.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        d.deal_ids.push_back("D" + std::to_string(i));
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        d.y(static_cast<Eigen::Index>(i)) = y[i];
    }
    return d;
}

DealFeatures features(const std::string& id, bool control, bool dm, std::optional<double> log_mv) {
    DealFeatures f;
    f.deal_id = id;
    f.control = control;
    f.dm_acquirer = dm;
    f.log_mv = log_mv;
    return f;
}

} // namespace

TEST_CASE("ols hand examples") {
    SECTION("perfect fit") {
        const auto r = ols(design_of({{1, 0}, {1, 1}, {1, 2}, {1, 5}}, {2, 5, 8, 17}));
        CHECK_THAT(r.coefficients[0], WithinAbs(2.0, 1e-12));
        CHECK_THAT(r.coefficients[1], WithinAbs(3.0, 1e-12));
        CHECK(r.r_squared == 1.0);
        CHECK_THAT(r.std_errors[0], WithinAbs(0.0, 1e-7));
        CHECK_THAT(r.std_errors[1], WithinAbs(0.0, 1e-7));
    }
    SECTION("four-point fixture") {
        const auto r = ols(design_of({{1, 0}, {1, 0}, {1, 1}, {1, 1}}, {1, 3, 4, 6}));
        CHECK_THAT(r.coefficients[0], WithinAbs(2.0, 1e-12));
        CHECK_THAT(r.coefficients[1], WithinAbs(3.0, 1e-12));
        CHECK_THAT(r.residual_variance, WithinAbs(2.0, 1e-12));
        CHECK_THAT(r.std_errors[1], WithinAbs(std::sqrt(2.0), 1e-12));
        CHECK_THAT(r.std_errors[0], WithinAbs(1.0, 1e-12));
        CHECK(r.n_used == 4);
        CHECK_THAT(r.r_squared, WithinAbs(9.0 / 13.0, 1e-12));
        CHECK_THAT(r.adj_r_squared, WithinAbs(1.0 - (4.0 / 13.0) * 3.0 / 2.0, 1e-12));
        CHECK_THAT(r.p_values[1], WithinAbs(2.0 * (1.0 - student_t_cdf(3.0 / std::sqrt(2.0), 2.0)), 1e-12));
    }
    SECTION("row permutation") {
        const auto a = ols(design_of({{1, 0}, {1, 0}, {1, 1}, {1, 1}, {1, 3}}, {1, 3, 4, 6, 2}));
        const auto b = ols(design_of({{1, 3}, {1, 1}, {1, 0}, {1, 1}, {1, 0}}, {2, 6, 3, 4, 1}));
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK_THAT(a.coefficients[j], WithinAbs(b.coefficients[j], 1e-12));
            CHECK_THAT(a.std_errors[j], WithinAbs(b.std_errors[j], 1e-12));
        }
        CHECK_THAT(a.r_squared, WithinAbs(b.r_squared, 1e-12));
    }
    SECTION("errors") {
        CHECK(kind_of([] { ols(design_of({{1, 0}, {1, 1}}, {1, 2})); }) == ErrorKind::InsufficientObservations);
        CHECK(kind_of([] { ols(design_of({{1, 1, 2}, {1, 2, 4}, {1, 3, 6}, {1, 4, 8}}, {1, 2, 3, 5})); }) ==
              ErrorKind::SingularDesign);
    }
}

TEST_CASE("adjusted r-squared") {
    CHECK_THAT(adjusted_r_squared(0.5, 11, 1), WithinAbs(1.0 - 0.5 * 10.0 / 9.0, 1e-15));
    CHECK(adjusted_r_squared(0.01, 30, 7) < 0.0);
    CHECK_THAT(adjusted_r_squared(0.01, 30, 7), WithinAbs(1.0 - 0.99 * 29.0 / 22.0, 1e-15));
    CHECK(adjusted_r_squared(1.0, 10, 3) == 1.0);
    // a pure-noise regressor on a small sample gives a negative value
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (std::size_t i = 0; i < 12; ++i) {
        rows.push_back({1.0, testing_support::wiggle(i, 1.0)});
        y.push_back(testing_support::wiggle(i, 2.0));
    }
    const auto r = ols(design_of(rows, y));
    CHECK_THAT(r.adj_r_squared, WithinAbs(adjusted_r_squared(r.r_squared, 12, 1), 1e-15));
    CHECK(r.adj_r_squared < r.r_squared);
}

TEST_CASE("ols agrees with the normal-equations oracle on random designs") {
    std::mt19937_64 gen(31337);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> kpick(1, 5);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t p = static_cast<std::size_t>(kpick(gen));
        const std::size_t n = p + 3 + static_cast<std::size_t>(trial % 40);
        std::vector<double> truth{0.5 + u(gen)};
        for (std::size_t j = 0; j < p; ++j) truth.push_back((coin(gen) ? 1.0 : -1.0) * (0.5 + std::fabs(u(gen))));
        std::vector<std::vector<double>> rows;
        std::vector<double> y;
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> row{1.0};
            for (std::size_t j = 0; j < p; ++j) row.push_back(j == 0 && trial % 3 == 0 ? (i % 2 ? 1.0 : 0.0) : 3.0 * u(gen));
            double v = 0.1 * u(gen);
            for (std::size_t j = 0; j <= p; ++j) v += truth[j] * row[j];
            rows.push_back(row);
            y.push_back(v);
        }
        const auto r = ols(design_of(rows, y));
        const auto o = oracles::normal_equations(rows, y);
        INFO("trial " << trial << " n=" << n << " p=" << p);
        for (std::size_t j = 0; j <= p; ++j) {
            CHECK_THAT(r.coefficients[j], WithinRel(o.beta[j], 1e-9));
            CHECK_THAT(r.std_errors[j], WithinRel(o.se[j], 1e-9));
        }
        CHECK_THAT(r.residual_variance, WithinRel(o.s2, 1e-9));
        CHECK_THAT(r.r_squared, WithinRel(o.r_squared, 1e-9));
        // residuals orthogonal to every column
        for (std::size_t j = 0; j <= p; ++j) {
            double dot = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                dot += rows[i][j] * r.residuals[i];
                scale += std::fabs(rows[i][j] * y[i]);
            }
            CHECK(std::fabs(dot) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("ols response transformations") {
    std::vector<std::vector<double>> rows;
    std::vector<double> y, shifted, scaled;
    for (std::size_t i = 0; i < 30; ++i) {
        const double a = testing_support::wiggle(i, 3.0), b = i % 3 == 0 ? 1.0 : 0.0;
        rows.push_back({1.0, a, b});
        y.push_back(0.01 + 0.5 * a - 0.2 * b + 0.05 * testing_support::wiggle(i, 4.0));
        shifted.push_back(y.back() + 0.7);
        scaled.push_back(y.back() * 4.0);
    }
    const auto base = ols(design_of(rows, y));
    const auto s = ols(design_of(rows, shifted));
    const auto m = ols(design_of(rows, scaled));
    CHECK_THAT(s.coefficients[0], WithinAbs(base.coefficients[0] + 0.7, 1e-12));
    for (std::size_t j = 1; j < 3; ++j) {
        CHECK_THAT(s.coefficients[j], WithinAbs(base.coefficients[j], 1e-12));
        CHECK_THAT(s.std_errors[j], WithinAbs(base.std_errors[j], 1e-12));
    }
    CHECK_THAT(m.r_squared, WithinAbs(base.r_squared, 1e-12));
    for (std::size_t j = 0; j < 3; ++j) CHECK_THAT(m.coefficients[j], WithinRel(4.0 * base.coefficients[j], 1e-12));

    // dropping a row and adding it back reproduces the fit
    auto fewer = rows;
    auto fewer_y = y;
    fewer.pop_back();
    fewer_y.pop_back();
    (void)ols(design_of(fewer, fewer_y));
    const auto again = ols(design_of(rows, y));
    CHECK(again.coefficients == base.coefficients);
    CHECK(again.std_errors == base.std_errors);
}

TEST_CASE("build_design") {
    const std::vector<DealFeatures> deals{
        features("A", true, true, 2.0),
        features("B", false, true, 3.0),
        features("C", true, false, std::nullopt),
        features("D", false, false, 5.0),
        features("E", true, false, 1.5),
        features("F", true, true, 4.0),
    };
    const Response response{{"A", 0.1}, {"B", 0.2}, {"C", 0.3}, {"D", 0.4}, {"E", 0.5}};
    const auto d = build_design(response, deals, {"control", "mv", "mv*control"});
    CHECK(d.columns == std::vector<std::string>{"intercept", "control", "mv", "mv*control"});
    CHECK(d.dropped == 2); // C lacks mv, F lacks a response
    CHECK(d.deal_ids == std::vector<std::string>{"A", "B", "D", "E"});
    Eigen::MatrixXd expect(4, 4);
    expect << 1, 1, 2, 2,
              1, 0, 3, 0,
              1, 0, 5, 0,
              1, 1, 1.5, 1.5;
    CHECK(d.x == expect);
    CHECK(d.y(3) == 0.5);

    const auto i = build_design(response, deals, {"control", "dm", "control*dm"});
    // deal D: control 0, dm 0; deal E: control 1, dm 0
    CHECK(i.x(4, 3) == 0.0);
    CHECK(i.x(0, 3) == 1.0);
    CHECK(i.dropped == 1);

    const std::vector<DealFeatures> all_control{features("A", true, true, 1.0), features("B", true, false, 2.0)};
    CHECK(kind_of([&] { build_design(response, all_control, {"control"}); }) == ErrorKind::DegenerateDesign);
    CHECK(kind_of([&] { build_design(response, deals, {"size"}); }) == ErrorKind::UnknownFeature);
    CHECK(canonical_term("log_mv*control") == "mv*control");
    CHECK(canonical_term("dm_acquirer") == "dm");
}

TEST_CASE("correlation matrix") {
    std::vector<DealFeatures> deals;
    for (int i = 0; i < 20; ++i) {
        auto f = features("D" + std::to_string(i), i % 2 == 0, i % 3 == 0, 1.0 + i);
        f.time_trend = -i;
        deals.push_back(f);
    }
    const auto c = correlation_matrix(deals, {"control", "mv", "time_trend", "mv*control"});
    CHECK(c.n_used == 20);
    for (std::size_t a = 0; a < 4; ++a) {
        CHECK(c.values[a][a] == 1.0);
        for (std::size_t b = 0; b < 4; ++b) {
            CHECK(c.values[a][b] == c.values[b][a]);
            CHECK(std::fabs(c.values[a][b]) <= 1.0);
        }
    }
    CHECK_THAT(c.values[1][2], WithinAbs(-1.0, 1e-12));
    deals[0].log_mv.reset();
    CHECK(correlation_matrix(deals, {"control", "mv"}).n_used == 19);
    std::vector<DealFeatures> flat(5, features("X", true, true, 1.0));
    CHECK(kind_of([&] { correlation_matrix(flat, {"control", "mv"}); }) == ErrorKind::ConstantColumn);
}

TEST_CASE("table specifications") {
    const auto t7 = table7_specs();
    REQUIRE(t7.size() == 8);
    for (const auto& t : t7[4].terms) CHECK(t != "control");
    CHECK(t7[7].terms == std::vector<std::string>{"control", "dummy95", "log_transaction_value"});
    const auto vn = table9_terms(false);
    CHECK(std::find(vn.begin(), vn.end(), "dm") == vn.end());
    CHECK(std::find(vn.begin(), vn.end(), "control*dm") == vn.end());
    CHECK(table9_terms(true).size() == 7);
}

TEST_CASE("run_table7 and run_table9 report per-cell results and failures") {
    std::vector<DealFeatures> deals;
    std::map<std::string, Sample, std::less<>> samples;
    Response r01, r11;
    for (int i = 0; i < 60; ++i) {
        auto f = features("D" + std::to_string(i), i % 2 == 0, i % 3 != 2, 1.0 + (i % 7));
        f.dummy95 = f.control && i % 4 == 0;
        f.listed_target = i % 5 == 0;
        f.diversifying = i % 6 < 3;
        f.time_trend = i % 21 - 10;
        f.log_post_ownership = std::log(f.control ? 60.0 + i % 30 : 10.0 + i % 30);
        if (i % 4 != 1) f.log_transaction_value = std::log(5.0 + i);
        if (i >= 40) f.dm_acquirer = false;
        deals.push_back(f);
        samples[f.deal_id] = i >= 40 ? Sample::VnVn : (f.dm_acquirer ? Sample::DmVn : Sample::EmVn);
        const double noise = 0.01 * testing_support::wiggle(static_cast<std::size_t>(i), 11.0);
        r01[f.deal_id] = 0.02 * f.control + noise;
        r11[f.deal_id] = 0.01 + noise;
    }
    const ResponsesByWindow responses{{EventWindow{0, 1}, r01}, {EventWindow{-1, 1}, r11}};
    const auto t7 = run_table7(deals, responses);
    REQUIRE(t7.cells.size() == 8);
    REQUIRE(t7.cells[0].size() == 2);
    CHECK(t7.cells[0][0].result->coefficient("control") > 0.01);
    CHECK(t7.cells[7][0].result->n_used == 45);
    CHECK(t7.n_for(7) == 45);
    CHECK(t7.row_terms.front() == "control");

    const auto t9 = run_table9(deals, samples, responses);
    REQUIRE(t9.cells.size() == 3);
    // VN-VN has no DM acquirers; spec omits dm terms so it runs
    CHECK(t9.cells[2][0].result.has_value());
    CHECK(t9.cells[2][0].result->n_used == 20);
    CHECK(t9.cells[0][0].result->n_used == 60);
    CHECK(t9.cells[1][0].result->n_used == 40);

    // a column that cannot be estimated fails in place
    std::vector<DealFeatures> all_control;
    for (auto f : deals) {
        f.control = true;
        all_control.push_back(f);
    }
    const auto bad = run_table7(all_control, responses);
    CHECK_FALSE(bad.cells[0][0].result.has_value());
    CHECK(bad.cells[0][0].error.find("constant") != std::string::npos);
    CHECK(bad.cells[4][0].result.has_value());
}
