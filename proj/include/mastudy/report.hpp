#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mastudy/cross_section.hpp"
#include "mastudy/csv.hpp"
#include "mastudy/format.hpp"
#include "mastudy/gains.hpp"
#include "mastudy/inference.hpp"
#include "mastudy/io.hpp"
#include "mastudy/screening.hpp"

namespace mastudy::report {

/// A report in both renderings.
struct Rendered {
    std::string text;
    std::string csv;
};

/// Left-aligned plain-text grid; columns separated by two spaces.
class TextTable {
public:
    void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
    void rule() { rows_.push_back({}); }

    std::string render(const std::string& title = {}, const std::vector<std::string>& notes = {}) const {
        std::vector<std::size_t> width;
        for (const auto& r : rows_)
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (width.size() <= i) width.push_back(0);
                width[i] = std::max(width[i], r[i].size());
            }
        std::size_t total = 0;
        for (auto w : width) total += w + 2;
        std::string out;
        if (!title.empty()) out += title + "\n";
        const std::string line(total > 2 ? total - 2 : 0, '-');
        out += line + "\n";
        for (const auto& r : rows_) {
            if (r.empty()) {
                out += line + "\n";
                continue;
            }
            std::string text;
            for (std::size_t i = 0; i < r.size(); ++i) {
                text += r[i];
                if (i + 1 < r.size()) text += std::string(width[i] - r[i].size() + 2, ' ');
            }
            while (!text.empty() && text.back() == ' ') text.pop_back();
            out += text + "\n";
        }
        out += line + "\n";
        for (const auto& n : notes) out += n + "\n";
        return out;
    }

private:
    std::vector<std::vector<std::string>> rows_;
};

inline const std::string kStarNote = "*, ** and *** denote significance at 10%, 5% and 1%.";

/// "0.013*** (0.004)", "0.014 (-)" for a single observation, "-" when empty.
inline std::string estimate_cell(const std::optional<double>& value, const std::optional<double>& se,
                                 const std::optional<double>& p, int decimals = 3) {
    if (!value) return "-";
    std::string s = fixed(*value, decimals) + (p ? stars(*p) : std::string());
    s += se ? " (" + fixed(*se, decimals) + ")" : std::string(" (-)");
    return s;
}

inline std::string opt_fixed(const std::optional<double>& v, int decimals = 3) {
    return v ? fixed(*v, decimals) : std::string("-");
}

inline std::string opt_percent(const std::optional<double>& fraction) {
    return fraction ? percent(*fraction) : std::string("-");
}

inline std::string sample_heading(Sample s) {
    switch (s) {
    case Sample::DmVn: return "Sample 1 (DM-VN)";
    case Sample::EmVn: return "Sample 2 (EM-VN)";
    case Sample::VnVn: return "Sample 3 (VN-VN)";
    case Sample::Excluded: break;
    }
    return "Excluded";
}

// ---- funnel ------------------------------------------------------------------

inline Rendered funnel(const FunnelReport& f) {
    TextTable t;
    t.row({"No.", "Criteria", "Observations"});
    t.rule();
    t.row({"", "All deals", std::to_string(f.input_count)});
    for (const auto& g : f.gates) t.row({std::to_string(g.criterion), g.label, std::to_string(g.count_after)});
    return {t.render("Criteria applied and changing in observations"), io::write_funnel(f).str()};
}

// ---- firm and deal characteristics --------------------------------------------

inline Rendered summary(const SummaryTable& s) {
    TextTable t;
    csv::Writer w({"row", "DM-VN", "EM-VN", "VN-VN"});
    std::vector<std::string> head{""};
    for (const auto& x : s.samples) head.push_back(sample_heading(x.sample));
    t.row(head);
    t.rule();
    auto add = [&](const std::string& label, auto text_of, auto csv_of) {
        std::vector<std::string> r{label}, c{label};
        for (const auto& x : s.samples) {
            r.push_back(text_of(x));
            c.push_back(csv_of(x));
        }
        t.row(r);
        w.row(c);
    };
    auto section = [&](const std::string& label) { t.row({label}); };
    add("N", [](const SampleSummary& x) { return std::to_string(x.n); },
        [](const SampleSummary& x) { return std::to_string(x.n); });
    section("Firm and deal characteristics");
    add("Median transaction size ($M)", [](const SampleSummary& x) { return opt_fixed(x.median_transaction_value); },
        [](const SampleSummary& x) { return fmt6(x.median_transaction_value); });
    add("Median acquirer market capitalization ($M)",
        [](const SampleSummary& x) { return opt_fixed(x.median_market_cap); },
        [](const SampleSummary& x) { return fmt6(x.median_market_cap); });
    add("Private target (%)", [](const SampleSummary& x) { return fixed(x.private_target_pct, 3) + "%"; },
        [](const SampleSummary& x) { return fmt6(x.private_target_pct); });
    add("Diversifying acquisition (%)", [](const SampleSummary& x) { return fixed(x.diversifying_pct, 3) + "%"; },
        [](const SampleSummary& x) { return fmt6(x.diversifying_pct); });
    for (int pass = 0; pass < 2; ++pass) {
        section(pass == 0 ? "Median acquirer CAR (%)" : "Median acquirer CAR (%) with control acquired");
        for (std::size_t i = 0; i < s.windows.size(); ++i) {
            const std::string label = "Window " + s.windows[i].label();
            const std::string key = (pass == 0 ? "Median CAR " : "Median control CAR ") + s.windows[i].label();
            std::vector<std::string> r{label}, c{key};
            for (const auto& x : s.samples) {
                const auto& v = pass == 0 ? x.median_car[i] : x.median_car_control[i];
                r.push_back(opt_percent(v));
                c.push_back(fmt6(v));
            }
            t.row(r);
            w.row(c);
        }
    }
    for (int side = 0; side < 2; ++side) {
        section(side == 0 ? "Acquirer industry" : "Target industry");
        for (std::size_t k = 0; k < kSectors.size(); ++k) {
            const std::string label(to_string(kSectors[k]));
            std::vector<std::string> r{label}, c{(side == 0 ? "Acquirer: " : "Target: ") + label};
            for (const auto& x : s.samples) {
                const double v = side == 0 ? x.acquirer_sector_pct[k] : x.target_sector_pct[k];
                r.push_back(fixed(v, 3) + "%");
                c.push_back(fmt6(v));
            }
            t.row(r);
            w.row(c);
        }
    }
    return {t.render("Summary statistics: firm and deal characteristics",
                     {"Percentages are shares of each sample's deal count."}),
            w.str()};
}

// ---- CARs by sector -----------------------------------------------------------

inline Rendered sector_cars(const SectorCarTable& s) {
    TextTable t;
    csv::Writer w({"sample", "sector", "group", "window", "n", "mean", "se", "p", "stars"});
    std::vector<std::string> head{"", "Windows"}, sub{"", ""};
    for (const auto& [sample, _] : s.samples) {
        head.push_back(sample_heading(sample));
        head.push_back("");
        sub.push_back("All deal");
        sub.push_back("Control");
    }
    t.row(head);
    t.row(sub);
    t.rule();
    const std::size_t blocks = s.samples.empty() ? 0 : s.samples.front().second.size();
    for (std::size_t b = 0; b < blocks; ++b) {
        const auto& proto = s.samples.front().second[b];
        const std::string name = proto.sector ? std::string(to_string(*proto.sector)) : "(All)";
        if (b == 1) t.row({"Acquirer industry"});
        for (std::size_t i = 0; i < s.windows.size(); ++i) {
            std::vector<std::string> r{i == 0 ? name : "", s.windows[i].label()};
            for (const auto& [sample, blist] : s.samples) {
                const auto& blk = blist[b];
                for (const auto* cell : {&blk.all[i], &blk.control[i]}) {
                    r.push_back(estimate_cell(cell->mean, cell->std_error, cell->p_value));
                    w.row({std::string(to_string(sample)), name, cell == &blk.all[i] ? "all" : "control",
                           s.windows[i].label(), std::to_string(cell->n), fmt6(cell->mean), fmt6(cell->std_error),
                           fmt6(cell->p_value), cell->p_value ? stars(*cell->p_value) : std::string()});
                }
            }
            t.row(r);
        }
        std::vector<std::string> nrow{"", b == 0 ? "NO" : "N" + std::to_string(b)};
        for (const auto& [sample, blist] : s.samples) {
            nrow.push_back(std::to_string(blist[b].n_all));
            nrow.push_back(std::to_string(blist[b].n_control));
        }
        t.row(nrow);
    }
    const std::string tail = s.tail == Tail::One ? "one-tailed" : "two-tailed";
    return {t.render("Summary statistics: CARs by sector for three samples",
                     {"Mean CARs; standard errors in parentheses; (-) marks a single deal and - an empty cell.",
                      "Significance from the cross-sectional t test, " + tail + ". " + kStarNote}),
            w.str()};
}

// ---- ownership grid ----------------------------------------------------------

inline Rendered ownership(const std::vector<std::pair<Sample, OwnershipGrid>>& grids) {
    TextTable t;
    csv::Writer w({"sample", "post_ownership", "pre_none", "pre_minor", "pre_lt20", "pre_20_40", "pre_40_50",
                   "untallied"});
    for (const auto& [sample, g] : grids) {
        t.row({sample_heading(sample)});
        std::vector<std::string> head{"Post \\ Pre"};
        for (auto c : OwnershipGrid::kColumns) head.emplace_back(c);
        t.row(head);
        t.rule();
        for (std::size_t r = 0; r < OwnershipGrid::kRows.size(); ++r) {
            std::vector<std::string> row{std::string(OwnershipGrid::kRows[r])};
            std::vector<std::string> c{std::string(to_string(sample)), std::string(OwnershipGrid::kRows[r])};
            for (auto n : g.counts[r]) {
                row.push_back(std::to_string(n));
                c.push_back(std::to_string(n));
            }
            c.push_back(r == 0 ? std::to_string(g.untallied) : "");
            t.row(row);
            w.row(c);
        }
        t.row({"Not tallied", std::to_string(g.untallied)});
        t.rule();
    }
    return {t.render("Pre- and post-acquisition ownership by sample"), w.str()};
}

// ---- correlation matrix ------------------------------------------------------

inline std::string term_label(const std::string& term) {
    static const std::map<std::string, std::string, std::less<>> labels{
        {"intercept", "Constant"},
        {"control", "Control"},
        {"dm", "DM Acquirer"},
        {"control*dm", "Control*DM Acquirer"},
        {"listed", "Listed target"},
        {"non_diversified", "Non-Diversified"},
        {"diversifying", "Diversifying"},
        {"dummy95", "Post-acquisition ownership (x >= 95%)"},
        {"time_trend", "Time-trend"},
        {"mv", "MV"},
        {"mv*control", "MV*Control"},
        {"log_post_ownership", "Post-acquisition ownership (x %)"},
        {"log_transaction_value", "Transaction value"},
    };
    const auto it = labels.find(term);
    return it == labels.end() ? term : it->second;
}

inline Rendered correlation(const CorrelationMatrix& m) {
    TextTable t;
    std::vector<std::string> head{""};
    for (const auto& n : m.names) head.push_back(term_label(n));
    t.row(head);
    t.rule();
    auto header = m.names;
    header.insert(header.begin(), "term");
    csv::Writer w(header);
    for (std::size_t i = 0; i < m.names.size(); ++i) {
        std::vector<std::string> r{term_label(m.names[i])}, c{m.names[i]};
        for (std::size_t j = 0; j < m.names.size(); ++j) {
            r.push_back(j <= i ? fixed(m.values[i][j], 3) : "");
            c.push_back(fmt6(m.values[i][j]));
        }
        t.row(r);
        w.row(c);
    }
    return {t.render("Correlation matrix for multivariate regression model",
                     {"N = " + std::to_string(m.n_used) + " deals with every variable present."}),
            w.str()};
}

// ---- regressions ---------------------------------------------------------------

inline csv::Writer regression_csv(const RegressionTable& table) {
    csv::Writer w({"spec_id", "window", "term", "coef", "se", "t", "p", "stars", "n", "adj_r2"});
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        for (std::size_t k = 0; k < table.windows.size(); ++k) {
            const auto& cell = table.cells[c][k];
            if (!cell.result) continue;
            const auto& r = *cell.result;
            for (std::size_t i = 0; i < r.terms.size(); ++i)
                w.row({table.columns[c].id, table.windows[k].label(), r.terms[i], fmt6(r.coefficients[i]),
                       fmt6(r.std_errors[i]), fmt6(r.t_stats[i]), fmt6(r.p_values[i]), stars(r.p_values[i]),
                       std::to_string(r.n_used), fmt6(r.adj_r_squared)});
        }
    return w;
}

inline Rendered regression(const RegressionTable& table) {
    TextTable t;
    std::vector<std::string> head{"", "Windows"};
    for (const auto& c : table.columns) head.push_back(c.label);
    t.row(head);
    t.rule();
    auto terms = table.row_terms;
    terms.push_back(kIntercept);
    for (const auto& term : terms) {
        for (std::size_t k = 0; k < table.windows.size(); ++k) {
            std::vector<std::string> r{k == 0 ? term_label(term) : "", table.windows[k].label()};
            for (std::size_t c = 0; c < table.columns.size(); ++c) {
                const auto& cell = table.cells[c][k];
                std::optional<std::size_t> idx;
                if (cell.result) idx = cell.result->index_of(term);
                if (!idx) {
                    r.push_back("");
                    continue;
                }
                const auto& res = *cell.result;
                r.push_back(estimate_cell(res.coefficients[*idx], res.std_errors[*idx], res.p_values[*idx]));
            }
            t.row(r);
        }
    }
    for (std::size_t k = 0; k < table.windows.size(); ++k) {
        std::vector<std::string> r{k == 0 ? "Adj. R-square" : "", table.windows[k].label()};
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const auto& cell = table.cells[c][k];
            r.push_back(cell.result ? fixed(cell.result->adj_r_squared, 3) : "-");
        }
        t.row(r);
    }
    std::vector<std::string> nrow{"N", ""};
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        const auto n = table.n_for(c);
        nrow.push_back(n ? std::to_string(*n) : "-");
    }
    t.row(nrow);
    std::vector<std::string> notes{"OLS coefficients; standard errors in parentheses. " + kStarNote};
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        for (std::size_t k = 0; k < table.windows.size(); ++k)
            if (!table.cells[c][k].result)
                notes.push_back("Column " + table.columns[c].label + " " + table.windows[k].label() +
                                " not estimated: " + table.cells[c][k].error);
    return {t.render(table.title, notes), regression_csv(table).str()};
}

// ---- value gains -------------------------------------------------------------

inline Rendered gains(const GainsReport& g) {
    TextTable t;
    csv::Writer w({"panel", "column", "n", "mean", "median", "top_quartile", "bottom_quartile", "std_dev"});
    std::vector<std::string> head{""};
    for (const auto& [label, _] : g.control.columns) head.push_back(label);
    t.row(head);
    t.rule();
    for (const auto* panel : {&g.control, &g.non_control}) {
        t.row({panel->title});
        const std::size_t n_car = g.windows.size();
        struct Stat {
            const char* label;
            double DistributionStats::*field;
        };
        const Stat rows[] = {{"Mean", &DistributionStats::mean},
                             {"Median", &DistributionStats::median},
                             {"Top quartile", &DistributionStats::top_quartile},
                             {"Bottom quartile", &DistributionStats::bottom_quartile},
                             {"Std dev", &DistributionStats::std_dev}};
        for (const auto& st : rows) {
            std::vector<std::string> r{st.label};
            for (std::size_t i = 0; i < panel->columns.size(); ++i) {
                const auto& d = panel->columns[i].second;
                if (d.n == 0) r.push_back("-");
                else if (i < n_car) r.push_back(percent(d.*st.field));
                else r.push_back(fixed(d.*st.field, 3));
            }
            t.row(r);
        }
        std::vector<std::string> nrow{"N"};
        for (const auto& [label, d] : panel->columns) {
            nrow.push_back(std::to_string(d.n));
            w.row({panel == &g.control ? "control" : "non_control", label, std::to_string(d.n),
                   d.n ? fmt6(d.mean) : "", d.n ? fmt6(d.median) : "", d.n ? fmt6(d.top_quartile) : "",
                   d.n ? fmt6(d.bottom_quartile) : "", d.n ? fmt6(d.std_dev) : ""});
        }
        t.row(nrow);
    }
    std::vector<std::string> notes{
        "Dollar value gain = sum over days -1..1 of AR times the day -1 market capitalization.",
        "Net synergy = dollar value gain / transaction value; deals without a transaction value are left out of it.",
        "Aggregate dollar value gain of control deals: " + fixed(g.aggregate_dvg_control, 3) + " $M over " +
            std::to_string(g.aggregate_dvg_count) + " deals."};
    for (const auto& cmp : g.median_comparisons) {
        if (!cmp.result) continue;
        const auto& r = *cmp.result;
        notes.push_back("Control vs non-control CAR " + cmp.window.label() + ": Wilcoxon " +
                        std::string(to_string(r.method)) + " test" + (r.exact ? " (exact)" : " (normal approx.)") +
                        ", U = " + fixed(r.statistic, 1) + ", two-tailed p = " + fixed(r.p_two_tail, 4) +
                        stars(r.p_two_tail));
    }
    return {t.render("Summary statistics for value gains by acquirers", notes), w.str()};
}

// ---- CAR distributions ----------------------------------------------------------

struct DistributionCell {
    DistributionStats stats;
    std::optional<NormalityResult> normality;
};

struct DistributionTable {
    std::vector<EventWindow> windows;
    std::vector<std::string> groups;              // "ALL" then samples
    std::vector<std::vector<DistributionCell>> cells; // [group][window]
};

inline std::vector<double> group_cars(const std::vector<DealObservation>& obs, const std::optional<Sample>& sample,
                                      const EventWindow& w) {
    std::vector<double> v;
    for (const auto& o : obs) {
        if (sample ? o.sample != *sample : o.sample == Sample::Excluded) continue;
        const auto it = o.cars.find(key_of(w));
        if (it != o.cars.end()) v.push_back(it->second);
    }
    return v;
}

inline DistributionTable distribution_table(const std::vector<DealObservation>& obs,
                                            const std::vector<EventWindow>& windows) {
    DistributionTable table;
    table.windows = windows;
    std::vector<std::optional<Sample>> groups{std::nullopt};
    for (Sample s : kSamples) groups.push_back(s);
    for (const auto& g : groups) {
        table.groups.push_back(g ? std::string(to_string(*g)) : "ALL");
        std::vector<DistributionCell> row;
        for (const auto& w : windows) {
            const auto v = group_cars(obs, g, w);
            DistributionCell cell;
            if (!v.empty()) cell.stats = distribution_stats(v);
            if (v.size() >= 8) {
                try {
                    cell.normality = normality_test(v);
                } catch (const Error&) {
                }
            }
            row.push_back(cell);
        }
        table.cells.push_back(std::move(row));
    }
    return table;
}

inline Rendered distribution(const DistributionTable& d) {
    TextTable t;
    csv::Writer w({"group", "window", "n", "mean", "std_dev", "skewness", "kurtosis", "k2", "normality_p"});
    std::vector<std::string> head{""};
    for (std::size_t g = 0; g < d.groups.size(); ++g) {
        const auto n = d.cells[g].empty() ? 0 : d.cells[g].front().stats.n;
        head.push_back(d.groups[g] + " N=" + std::to_string(n));
    }
    t.row(head);
    t.rule();
    for (std::size_t k = 0; k < d.windows.size(); ++k) {
        std::vector<std::string> r{d.windows[k].label()};
        for (std::size_t g = 0; g < d.groups.size(); ++g) {
            const auto& c = d.cells[g][k];
            std::string s = "S=" + opt_fixed(c.stats.skewness) + ", K=" + opt_fixed(c.stats.kurtosis);
            if (c.normality) s += ", p=" + fixed(c.normality->p_value, 3);
            r.push_back(c.stats.n ? s : "-");
            w.row({d.groups[g], d.windows[k].label(), std::to_string(c.stats.n),
                   c.stats.n ? fmt6(c.stats.mean) : "", c.stats.n ? fmt6(c.stats.std_dev) : "",
                   fmt6(c.stats.skewness), fmt6(c.stats.kurtosis),
                   c.normality ? fmt6(c.normality->statistic) : "", c.normality ? fmt6(c.normality->p_value) : ""});
        }
        t.row(r);
    }
    return {t.render("Sample description: CAR distributions",
                     {"N = number of observations, S = skewness, K = kurtosis (normal = 3),",
                      "p = D'Agostino-Pearson normality test p-value (N >= 8)."}),
            w.str()};
}

// ---- significance -------------------------------------------------------------

struct SignificanceRow {
    std::string group;
    EventWindow window;
    std::size_t n = 0;
    std::optional<TTestResult> brown_warner;
    std::optional<TTestResult> cross_sectional;
    std::optional<RankTestResult> signed_rank;
};

inline std::vector<SignificanceRow> significance_rows(const std::vector<DealObservation>& obs,
                                                      const std::vector<EventWindow>& windows,
                                                      const BrownWarnerOptions& options = {}) {
    std::vector<SignificanceRow> out;
    std::vector<std::optional<Sample>> groups{std::nullopt};
    for (Sample s : kSamples) groups.push_back(s);
    for (const auto& g : groups)
        for (const auto& w : windows) {
            SignificanceRow row;
            row.group = g ? std::string(to_string(*g)) : "ALL";
            row.window = w;
            std::vector<double> cars;
            std::vector<MarketModelFit> fits;
            for (const auto& o : obs) {
                if (g ? o.sample != *g : o.sample == Sample::Excluded) continue;
                const auto it = o.cars.find(key_of(w));
                if (it == o.cars.end()) continue;
                cars.push_back(it->second);
                fits.push_back(o.fit);
            }
            row.n = cars.size();
            try {
                row.brown_warner = brown_warner_t(cars, fits, w.length(), options);
            } catch (const Error&) {
            }
            try {
                row.cross_sectional = cross_sectional_t(cars);
            } catch (const Error&) {
            }
            if (!cars.empty()) row.signed_rank = wilcoxon_signed_rank(cars);
            out.push_back(std::move(row));
        }
    return out;
}

inline Rendered significance(const std::vector<SignificanceRow>& rows, Tail tail) {
    TextTable t;
    csv::Writer w({"group", "window", "n", "mean_car", "bw_t", "bw_p", "cs_t", "cs_p", "rank_method", "rank_stat",
                   "rank_p", "tail"});
    const std::string tail_name = tail == Tail::One ? "one" : "two";
    t.row({"Group", "Window", "N", "Mean CAR", "Brown-Warner t", "p", "Cross-sectional t", "p", "Signed-rank p"});
    t.rule();
    for (const auto& r : rows) {
        auto tcell = [&](const std::optional<TTestResult>& x) -> std::pair<std::string, std::string> {
            if (!x) return {"-", "-"};
            return {fixed(x->statistic, 3) + stars(x->p(tail)), fixed(x->p(tail), 4)};
        };
        const auto [bt, bp] = tcell(r.brown_warner);
        const auto [ct, cp] = tcell(r.cross_sectional);
        const std::optional<double> mean =
            r.cross_sectional ? std::optional<double>(r.cross_sectional->mean)
                              : (r.brown_warner ? std::optional<double>(r.brown_warner->mean) : std::nullopt);
        const auto rank_p = r.signed_rank ? std::optional<double>(tail == Tail::One ? r.signed_rank->p_one_tail
                                                                                   : r.signed_rank->p_two_tail)
                                          : std::nullopt;
        t.row({r.group, r.window.label(), std::to_string(r.n), mean ? percent(*mean) : "-", bt, bp, ct, cp,
               rank_p ? fixed(*rank_p, 4) + stars(*rank_p) : "-"});
        w.row({r.group, r.window.label(), std::to_string(r.n), fmt6(mean),
               r.brown_warner ? fmt6(r.brown_warner->statistic) : "",
               r.brown_warner ? fmt6(r.brown_warner->p(tail)) : "",
               r.cross_sectional ? fmt6(r.cross_sectional->statistic) : "",
               r.cross_sectional ? fmt6(r.cross_sectional->p(tail)) : "",
               r.signed_rank ? std::string(to_string(r.signed_rank->method)) : "",
               r.signed_rank ? fmt6(r.signed_rank->statistic) : "", fmt6(rank_p), tail_name});
    }
    return {t.render("Significance of mean CARs",
                     {"p-values are " + tail_name + "-tailed. " + kStarNote,
                      "Brown-Warner variance from estimation-window residuals; rank test is Wilcoxon signed-rank."}),
            w.str()};
}

} // namespace mastudy::report
