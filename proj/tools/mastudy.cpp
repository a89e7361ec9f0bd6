#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mastudy/io.hpp"
#include "mastudy/pipeline.hpp"
#include "mastudy/report.hpp"
#include "mastudy/simulate.hpp"

namespace {

using namespace mastudy;
using Json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void warn(const std::string& msg) { std::cerr << msg << "\n"; }

/// Collects outputs and writes them plus a run manifest.
class Run {
public:
    Run(std::string subcommand, std::string out_dir) : out_dir_(std::move(out_dir)) {
        manifest_["tool"] = "mastudy";
        manifest_["version"] = kVersion;
        manifest_["subcommand"] = std::move(subcommand);
        manifest_["config"] = Json::object();
        manifest_["inputs"] = Json::array();
        manifest_["outputs"] = Json::array();
    }

    Json& config() { return manifest_["config"]; }

    csv::Table input(const std::string& path) {
        auto t = csv::read_file(path);
        manifest_["inputs"].push_back({{"path", path}, {"rows", t.size()}});
        return t;
    }

    void output(const std::string& name, const std::string& content, std::optional<std::size_t> rows = {}) {
        const std::string path = out_dir_ + "/" + name;
        io::write_atomic(path, content);
        Json entry{{"path", name}};
        if (rows) entry["rows"] = *rows;
        manifest_["outputs"].push_back(entry);
    }
    void output(const std::string& name, const csv::Writer& w) { output(name, w.str(), w.data_rows()); }
    void report(const std::string& stem, const report::Rendered& r) {
        output(stem + ".txt", r.text);
        output(stem + ".csv", r.csv, static_cast<std::size_t>(std::count(r.csv.begin(), r.csv.end(), '\n') - 1));
    }

    void finish() {
        const std::string name = "manifest_" + manifest_["subcommand"].get<std::string>() + ".json";
        io::write_atomic(out_dir_ + "/" + name, manifest_.dump(2) + "\n");
    }

private:
    std::string out_dir_;
    Json manifest_;
};

std::vector<EventWindow> windows_arg(const std::string& text) {
    if (text.empty()) return liquidity_windows();
    try {
        return parse_windows(text);
    } catch (const Error& e) {
        throw UsageError(std::string("--windows: ") + e.what());
    }
}

Tail tail_arg(const std::string& text) {
    if (text == "one") return Tail::One;
    if (text == "two") return Tail::Two;
    throw UsageError("--tail must be 'one' or 'two'");
}

std::optional<Sample> sample_arg(const std::string& text) {
    if (text.empty() || text == "ALL") return std::nullopt;
    try {
        return parse_sample(text);
    } catch (const Error& e) {
        throw UsageError(std::string("--sample: ") + e.what());
    }
}

Json windows_json(const std::vector<EventWindow>& ws) {
    Json j = Json::array();
    for (const auto& w : ws) j.push_back(w.label());
    return j;
}

struct TableInputs {
    std::string classes, thresholds, gni;
};

struct LoadedTables {
    ClassTable classes;
    ThresholdTable thresholds;
    std::optional<GniTable> gni;
    pipeline::Classification view() const { return {&classes, &thresholds, gni ? &*gni : nullptr}; }
};

LoadedTables load_tables(Run& run, const TableInputs& in) {
    LoadedTables t;
    t.classes = in.classes.empty() ? ClassTable::bundled() : io::read_classes(run.input(in.classes));
    t.thresholds = in.thresholds.empty() ? ThresholdTable::bundled() : io::read_thresholds(run.input(in.thresholds));
    if (!in.gni.empty()) t.gni = io::read_gni(run.input(in.gni));
    run.config()["classes"] = in.classes.empty() ? "bundled" : in.classes;
    run.config()["thresholds"] = in.thresholds.empty() ? "bundled" : in.thresholds;
    if (!in.gni.empty()) run.config()["gni"] = in.gni;
    return t;
}

void add_table_options(CLI::App* app, TableInputs& in) {
    app->add_option("--classes", in.classes, "nation,year,class table (default: bundled)");
    app->add_option("--thresholds", in.thresholds, "year,low_max,lm_max,um_max table (default: bundled)");
    app->add_option("--gni", in.gni, "nation,year,gni_per_capita observations");
}

// ---- simulate ----------------------------------------------------------------

struct SimulateArgs {
    sim::SimSpec spec;
    std::string out = ".";
    std::vector<std::string> feature_effects;
};

void cmd_simulate(const SimulateArgs& a) {
    Run run("simulate", a.out);
    sim::SimSpec spec = a.spec;
    for (const auto& fe : a.feature_effects) {
        const auto eq = fe.find('=');
        if (eq == std::string::npos) throw UsageError("--feature-effect expects term=value, got '" + fe + "'");
        const std::string term = fe.substr(0, eq);
        try {
            canonical_term(term);
            spec.feature_effects.emplace_back(term, csv::to_double(fe.substr(eq + 1), "--feature-effect"));
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    try {
        spec.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    const auto sample = sim::simulate(spec);
    auto& c = run.config();
    c["seed"] = spec.seed;
    c["rng"] = "mt19937_64 per stream, seeded splitmix64(seed + stream * 0x9E3779B97F4A7C15); Box-Muller normals";
    c["n_firms"] = spec.n_firms;
    c["n_days"] = spec.n_days;
    c["market_drift"] = spec.market_drift;
    c["market_vol"] = spec.market_vol;
    c["idiosyncratic_vol"] = spec.idiosyncratic_vol;
    c["innovations"] = spec.innovations == sim::Innovations::Normal ? "normal" : "student_t";
    c["student_dof"] = spec.student_dof;
    c["event_effect"] = spec.event_effect;
    c["event_offsets"] = spec.event_offsets;
    Json fe = Json::object();
    for (const auto& [t, v] : spec.feature_effects) fe[t] = v;
    c["feature_effects"] = fe;
    c["control_fraction"] = spec.control_fraction;
    c["decoy_fraction"] = spec.decoy_fraction;

    std::vector<const PriceSeries*> series{&sample.market.benchmark};
    for (const auto& f : sample.market.firms) series.push_back(&f);
    run.output("prices.csv", io::write_prices(series));
    run.output("calendar.csv", io::write_calendar(sample.market.calendar));
    run.output("deals.csv", io::write_deals(sample.deals));
    run.output("benchmarks.csv", io::write_benchmarks(sample.benchmarks));
    run.finish();
}

// ---- classify ----------------------------------------------------------------

struct ClassifyArgs {
    std::string deals, out = ".";
    TableInputs tables;
    bool dump_tables = false;
};

void cmd_classify(const ClassifyArgs& a) {
    Run run("classify", a.out);
    const auto tables = load_tables(run, a.tables);
    if (a.dump_tables) {
        run.output("thresholds.csv", io::write_thresholds(tables.thresholds));
        run.output("classes.csv", io::write_classes(tables.classes));
    }
    if (!a.deals.empty()) {
        const auto deals = io::read_deals(run.input(a.deals), warn);
        std::vector<io::ScreenedDeal> labeled;
        std::size_t unclassified = 0;
        for (const auto& d : deals) {
            labeled.push_back(pipeline::label(d, tables.view()));
            if (!labeled.back().acquirer_class && !is_vietnam(d.acquirer_nation)) ++unclassified;
        }
        if (unclassified) warn("WARNING: " + std::to_string(unclassified) + " foreign acquirer(s) have no income class");
        run.output("classified.csv", io::write_screened(labeled));
    } else if (!a.dump_tables) {
        throw UsageError("classify needs --deals or --dump-tables");
    }
    run.finish();
}

// ---- screen ----------------------------------------------------------------

struct ScreenArgs {
    std::string deals, prices, out = ".";
    TableInputs tables;
    long min_history = 195;
};

void cmd_screen(const ScreenArgs& a) {
    Run run("screen", a.out);
    const auto tables = load_tables(run, a.tables);
    const auto deals = io::read_deals(run.input(a.deals), warn);
    std::optional<HistoryCounts> history;
    if (!a.prices.empty()) {
        history = pipeline::history_counts(deals, io::read_prices(run.input(a.prices)));
    } else {
        warn("WARNING: no --prices given; the trading-history criterion is not evaluated");
    }
    FunnelConfig config;
    config.min_history_days = a.min_history;
    run.config()["min_history_days"] = a.min_history;
    run.config()["history_evaluated"] = history.has_value();
    const auto result = pipeline::screen(deals, tables.view(), history, config);

    std::vector<std::pair<Sample, OwnershipGrid>> grids;
    for (Sample s : kSamples) {
        std::vector<DealRecord> in;
        for (const auto& d : result.screened)
            if (d.sample == s) in.push_back(d.deal);
        grids.emplace_back(s, ownership_transition_matrix(in));
    }
    run.report("funnel", report::funnel(result.funnel));
    run.report("ownership", report::ownership(grids));
    run.output("screened.csv", io::write_screened(result.screened));
    run.finish();
}

// ---- study ------------------------------------------------------------------

struct StudyArgs {
    std::string deals, prices, calendar, benchmarks, windows, out = ".";
    EstimationConfig est;
    unsigned threads = 1;
};

void cmd_study(const StudyArgs& a) {
    Run run("study", a.out);
    StudyOptions opt;
    opt.config = a.est;
    try {
        opt.config.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    opt.windows = windows_arg(a.windows);
    opt.extra_offsets = {-1, 0, 1}; // dollar value gains need the three-day ARs
    opt.threads = a.threads;
    auto& c = run.config();
    c["est_start"] = opt.config.est_start_offset;
    c["est_end"] = opt.config.est_end_offset;
    c["min_obs"] = opt.config.min_obs;
    c["windows"] = windows_json(opt.windows);
    c["day0_rule"] = "first trading day on or after the announcement";

    const auto deals = io::read_deals(run.input(a.deals), warn);
    MarketStore store;
    store.prices = io::read_prices(run.input(a.prices));
    if (!a.calendar.empty()) store.calendars = io::read_calendars(run.input(a.calendar));
    const auto benchmarks = io::read_benchmarks(run.input(a.benchmarks));
    const auto result = run_event_study(deals, store, benchmarks, opt);
    if (!result.exclusions.empty())
        warn("WARNING: " + std::to_string(result.exclusions.size()) + " deal(s) excluded; see exclusions.csv");
    run.output("cars.csv", io::write_cars(result.results));
    run.output("ars.csv", io::write_ars(result.results));
    run.output("exclusions.csv", io::write_exclusions(result.exclusions));
    run.finish();
}

// ---- shared loading for downstream commands ------------------------------------

struct Downstream {
    std::vector<io::ScreenedDeal> screened;
    std::vector<CarResult> cars;
    std::vector<DealObservation> obs;
    std::vector<EventWindow> windows;
};

Downstream load_downstream(Run& run, const std::string& screened, const std::string& cars, const std::string& ars,
                           const std::string& windows) {
    Downstream d;
    d.screened = io::read_screened(run.input(screened));
    std::optional<csv::Table> ars_table;
    if (!ars.empty()) ars_table = run.input(ars);
    d.cars = io::read_cars(run.input(cars), ars_table ? &*ars_table : nullptr);
    d.obs = pipeline::observations(d.screened, d.cars);
    d.windows = windows.empty() ? io::windows_of(d.cars) : windows_arg(windows);
    const auto available = io::windows_of(d.cars);
    for (const auto& w : d.windows)
        if (std::find(available.begin(), available.end(), w) == available.end())
            fail(ErrorKind::InvalidArgument, "window " + w.label() + " is not present in " + cars);
    run.config()["windows"] = windows_json(d.windows);
    return d;
}

// ---- summarize ---------------------------------------------------------------

struct SummarizeArgs {
    std::string screened, cars, ars, windows, tail = "one", out = ".";
    bool strict_literal = false;
};

void cmd_summarize(const SummarizeArgs& a) {
    Run run("summarize", a.out);
    const Tail tail = tail_arg(a.tail);
    const auto d = load_downstream(run, a.screened, a.cars, a.ars, a.windows);
    run.config()["tail"] = a.tail;
    run.config()["strict_literal"] = a.strict_literal;
    std::vector<std::pair<Sample, OwnershipGrid>> grids;
    for (Sample s : kSamples) {
        std::vector<DealRecord> in;
        for (const auto& o : d.obs)
            if (o.sample == s) in.push_back(o.deal);
        grids.emplace_back(s, ownership_transition_matrix(in));
    }
    run.report("summary", report::summary(summary_table(d.obs, d.windows)));
    run.report("sector_cars", report::sector_cars(sector_car_table(d.obs, d.windows, tail)));
    run.report("ownership", report::ownership(grids));
    run.report("distribution", report::distribution(report::distribution_table(d.obs, d.windows)));
    run.report("significance",
               report::significance(report::significance_rows(d.obs, d.windows, {a.strict_literal}), tail));
    run.finish();
}

// ---- regress ----------------------------------------------------------------

struct RegressArgs {
    std::string screened, cars, windows, specs = "table7,table9", sample = "DM-VN", out = ".";
    std::vector<std::string> custom;
};

void cmd_regress(const RegressArgs& a) {
    Run run("regress", a.out);
    const auto d = load_downstream(run, a.screened, a.cars, "", a.windows);
    run.config()["specs"] = a.specs;
    run.config()["table7_sample"] = a.sample;
    const auto resp = pipeline::responses(d.cars, d.windows);
    std::vector<RegressionTable> tables;
    std::string list = a.specs;
    std::vector<std::string> names;
    for (std::size_t p = 0; p <= list.size();) {
        const auto q = std::min(list.find(',', p), list.size());
        if (q > p) names.push_back(list.substr(p, q - p));
        p = q + 1;
    }
    const auto t7_sample = sample_arg(a.sample);
    for (const auto& n : names) {
        if (n == "table7") tables.push_back(run_table7(pipeline::features_for(d.obs, t7_sample), resp));
        else if (n == "table9") tables.push_back(run_table9(pipeline::features_for(d.obs), pipeline::samples_of(d.obs), resp));
        else throw UsageError("unknown --specs entry '" + n + "' (expected table7 or table9)");
    }
    if (!a.custom.empty()) {
        RegressionTable custom;
        custom.title = "Custom specifications";
        for (const auto& spec : a.custom) {
            const auto eq = spec.find('=');
            if (eq == std::string::npos) throw UsageError("--spec expects id=term+term, got '" + spec + "'");
            SpecColumn col{spec.substr(0, eq), spec.substr(0, eq), {}};
            std::string rest = spec.substr(eq + 1);
            for (std::size_t p = 0; p <= rest.size();) {
                const auto q = std::min(rest.find('+', p), rest.size());
                if (q > p) {
                    try {
                        col.terms.push_back(canonical_term(rest.substr(p, q - p)));
                    } catch (const Error& e) {
                        throw UsageError(e.what());
                    }
                }
                p = q + 1;
            }
            custom.columns.push_back(col);
        }
        const auto feats = pipeline::features_for(d.obs, t7_sample);
        custom.windows = d.windows;
        for (const auto& col : custom.columns) {
            std::vector<RegressionCell> row;
            for (const auto& [w, r] : resp) row.push_back(detail::run_cell(r, feats, col.terms));
            custom.cells.push_back(std::move(row));
        }
        detail::collect_terms(custom);
        tables.push_back(std::move(custom));
    }
    std::string text, csv_all;
    csv::Writer all({"spec_id", "window", "term", "coef", "se", "t", "p", "stars", "n", "adj_r2"});
    for (const auto& t : tables) {
        const auto r = report::regression(t);
        text += r.text + "\n";
        const auto body = r.csv.substr(r.csv.find('\n') + 1);
        csv_all += body;
    }
    const std::string header = all.str();
    run.output("regress.csv", header + csv_all,
               static_cast<std::size_t>(std::count(csv_all.begin(), csv_all.end(), '\n')));
    run.output("regress.txt", text);
    try {
        run.report("correlation", report::correlation(correlation_matrix(pipeline::features_for(d.obs),
                                                                         table9_terms(true))));
    } catch (const Error& e) {
        warn(std::string("WARNING: correlation matrix skipped: ") + e.what());
    }
    run.finish();
}

// ---- gains ------------------------------------------------------------------

struct GainsArgs {
    std::string screened, cars, ars, market_caps, sample = "DM-VN", out = ".";
};

void cmd_gains(const GainsArgs& a) {
    Run run("gains", a.out);
    const auto d = load_downstream(run, a.screened, a.cars, a.ars, "");
    const auto sample = sample_arg(a.sample);
    if (!sample) throw UsageError("--sample must name one sample (DM-VN, EM-VN or VN-VN)");
    run.config()["sample"] = a.sample;
    run.config()["dvg_window"] = "(-1,1)";
    std::optional<pipeline::CapSeries> caps;
    if (!a.market_caps.empty()) caps = io::read_market_caps(run.input(a.market_caps));
    run.config()["market_cap_source"] = caps ? "series at offset -1" : "acquirer_market_cap field";
    const auto rows = pipeline::value_gains(d.obs, d.cars, *sample, caps ? &*caps : nullptr);
    std::size_t no_dvg = 0;
    for (const auto& g : rows)
        if (!g.dollar_value_gain) ++no_dvg;
    if (no_dvg) warn("WARNING: " + std::to_string(no_dvg) + " deal(s) lack a market cap or ARs at -1..1; no dollar value gain");
    std::vector<EventWindow> ws;
    for (const auto& w : liquidity_windows())
        if (std::find(d.windows.begin(), d.windows.end(), w) != d.windows.end()) ws.push_back(w);
    run.output("gains.csv", io::write_gains(rows));
    run.report("gains_report", report::gains(gains_panel(rows, ws)));
    run.finish();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-study engine for cross-border M&A announcement returns"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    SimulateArgs sim_a;
    auto* sim = app.add_subcommand("simulate", "write a synthetic market and deal sample");
    sim->add_option("--seed", sim_a.spec.seed, "random seed");
    sim->add_option("--out", sim_a.out, "output directory");
    sim->add_option("--firms", sim_a.spec.n_firms, "number of acquirers, one deal each");
    sim->add_option("--days", sim_a.spec.n_days, "trading days of prices (>= 250)");
    sim->add_option("--market-drift", sim_a.spec.market_drift);
    sim->add_option("--market-vol", sim_a.spec.market_vol);
    sim->add_option("--idio-vol", sim_a.spec.idiosyncratic_vol, "daily idiosyncratic volatility");
    sim->add_option("--student-dof", sim_a.spec.student_dof, "use Student-t innovations with this dof")
        ->each([&](const std::string&) { sim_a.spec.innovations = sim::Innovations::StudentT; });
    sim->add_option("--effect", sim_a.spec.event_effect, "log-return shock at each event offset");
    sim->add_option("--effect-offsets", sim_a.spec.event_offsets, "offsets receiving the shock")->delimiter(',');
    sim->add_option("--feature-effect", sim_a.feature_effects, "extra day-0 shock per regressor unit, term=value");
    sim->add_option("--control-fraction", sim_a.spec.control_fraction);
    sim->add_option("--dm-fraction", sim_a.spec.dm_fraction);
    sim->add_option("--em-fraction", sim_a.spec.em_fraction);
    sim->add_option("--decoy-fraction", sim_a.spec.decoy_fraction, "share of deals failing a sample criterion");

    ClassifyArgs cls_a;
    auto* cls = app.add_subcommand("classify", "label acquirers by income class and sample");
    cls->add_option("--deals", cls_a.deals, "deals.csv");
    cls->add_option("--out", cls_a.out, "output directory");
    cls->add_flag("--dump-tables", cls_a.dump_tables, "write the classification tables in use");
    add_table_options(cls, cls_a.tables);

    ScreenArgs scr_a;
    auto* scr = app.add_subcommand("screen", "apply the sample criteria and label samples");
    scr->add_option("--deals", scr_a.deals, "deals.csv")->required();
    scr->add_option("--prices", scr_a.prices, "prices.csv, for the trading-history criterion");
    scr->add_option("--min-history", scr_a.min_history, "trading days required before announcement");
    scr->add_option("--out", scr_a.out, "output directory");
    add_table_options(scr, scr_a.tables);

    StudyArgs stu_a;
    auto* stu = app.add_subcommand("study", "estimate market models and CARs");
    stu->add_option("--deals", stu_a.deals, "deals.csv or screened.csv")->required();
    stu->add_option("--prices", stu_a.prices, "prices.csv")->required();
    stu->add_option("--calendar", stu_a.calendar, "calendar.csv");
    stu->add_option("--benchmarks", stu_a.benchmarks, "benchmarks.csv")->required();
    stu->add_option("--windows", stu_a.windows, "event windows, e.g. \"0:1,-1:1,-2:1\"");
    stu->add_option("--est-start", stu_a.est.est_start_offset, "first estimation offset");
    stu->add_option("--est-end", stu_a.est.est_end_offset, "last estimation offset");
    stu->add_option("--min-obs", stu_a.est.min_obs, "minimum estimation returns");
    stu->add_option("--threads", stu_a.threads, "worker threads");
    stu->add_option("--out", stu_a.out, "output directory");

    SummarizeArgs sum_a;
    auto* sum = app.add_subcommand("summarize", "summary, sector, distribution and significance reports");
    sum->add_option("--screened", sum_a.screened, "screened.csv")->required();
    sum->add_option("--cars", sum_a.cars, "cars.csv")->required();
    sum->add_option("--ars", sum_a.ars, "ars.csv");
    sum->add_option("--windows", sum_a.windows, "subset of windows to report");
    sum->add_option("--tail", sum_a.tail, "one or two");
    sum->add_flag("--strict-literal", sum_a.strict_literal, "use fixed 131/130 divisors in the Brown-Warner variance");
    sum->add_option("--out", sum_a.out, "output directory");

    RegressArgs reg_a;
    auto* reg = app.add_subcommand("regress", "cross-sectional CAR regressions");
    reg->add_option("--screened", reg_a.screened, "screened.csv")->required();
    reg->add_option("--cars", reg_a.cars, "cars.csv")->required();
    reg->add_option("--windows", reg_a.windows, "windows to regress");
    reg->add_option("--specs", reg_a.specs, "comma-separated: table7, table9");
    reg->add_option("--spec", reg_a.custom, "custom column id=term+term (repeatable)");
    reg->add_option("--sample", reg_a.sample, "sample for table7 and custom specs (ALL for every sample)");
    reg->add_option("--out", reg_a.out, "output directory");

    GainsArgs gai_a;
    auto* gai = app.add_subcommand("gains", "dollar value gains and net synergy");
    gai->add_option("--screened", gai_a.screened, "screened.csv")->required();
    gai->add_option("--cars", gai_a.cars, "cars.csv")->required();
    gai->add_option("--ars", gai_a.ars, "ars.csv")->required();
    gai->add_option("--market-caps", gai_a.market_caps, "instrument_id,date,market_cap series");
    gai->add_option("--sample", gai_a.sample, "sample to report");
    gai->add_option("--out", gai_a.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) cmd_simulate(sim_a);
        else if (cls->parsed()) cmd_classify(cls_a);
        else if (scr->parsed()) cmd_screen(scr_a);
        else if (stu->parsed()) cmd_study(stu_a);
        else if (sum->parsed()) cmd_summarize(sum_a);
        else if (reg->parsed()) cmd_regress(reg_a);
        else if (gai->parsed()) cmd_gains(gai_a);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
