#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mastudy/error.hpp"
#include "mastudy/event_engine.hpp"
#include "mastudy/inference.hpp"
#include "mastudy/screening.hpp"

namespace mastudy {

/// Canonical regressor name for a feature or alias.
inline std::string canonical_term(const std::string& name) {
    static const std::map<std::string, std::string, std::less<>> aliases{
        {"control", "control"},
        {"dm", "dm"},
        {"dm_acquirer", "dm"},
        {"listed", "listed"},
        {"listed_target", "listed"},
        {"non_diversified", "non_diversified"},
        {"diversifying", "diversifying"},
        {"dummy95", "dummy95"},
        {"time_trend", "time_trend"},
        {"mv", "mv"},
        {"log_mv", "mv"},
        {"log_post_ownership", "log_post_ownership"},
        {"post_ownership", "log_post_ownership"},
        {"log_transaction_value", "log_transaction_value"},
        {"transaction_value", "log_transaction_value"},
    };
    const auto star = name.find('*');
    if (star != std::string::npos)
        return canonical_term(name.substr(0, star)) + "*" + canonical_term(name.substr(star + 1));
    const auto it = aliases.find(name);
    if (it == aliases.end()) fail(ErrorKind::UnknownFeature, "unknown regressor '" + name + "'");
    return it->second;
}

/// Value of a (possibly interacted) regressor for one deal; nullopt when an
/// optional input is absent.
inline std::optional<double> feature_value(const DealFeatures& f, const std::string& name) {
    const std::string term = canonical_term(name);
    const auto star = term.find('*');
    if (star != std::string::npos) {
        const auto a = feature_value(f, term.substr(0, star));
        const auto b = feature_value(f, term.substr(star + 1));
        if (!a || !b) return std::nullopt;
        return *a * *b;
    }
    auto flag = [](bool b) { return b ? 1.0 : 0.0; };
    if (term == "control") return flag(f.control);
    if (term == "dm") return flag(f.dm_acquirer);
    if (term == "listed") return flag(f.listed_target);
    if (term == "non_diversified") return flag(!f.diversifying);
    if (term == "diversifying") return flag(f.diversifying);
    if (term == "dummy95") return flag(f.dummy95);
    if (term == "time_trend") return static_cast<double>(f.time_trend);
    if (term == "mv") return f.log_mv;
    if (term == "log_post_ownership") return f.log_post_ownership;
    if (term == "log_transaction_value") return f.log_transaction_value;
    fail(ErrorKind::UnknownFeature, "unknown regressor '" + name + "'");
}

inline const std::string kIntercept = "intercept";

struct DesignMatrix {
    std::vector<std::string> deal_ids;
    std::vector<std::string> columns; // intercept first
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    std::size_t dropped = 0;
};

/// Deal id -> response value (a CAR for one window).
using Response = std::map<std::string, double, std::less<>>;

inline Response response_for(const std::vector<CarResult>& cars, const EventWindow& window) {
    Response out;
    for (const auto& c : cars)
        if (const auto v = c.car(window)) out[c.deal_id] = *v;
    return out;
}

/// Rows follow `features` order; deals lacking a response or any requested
/// regressor are dropped and counted.
inline DesignMatrix build_design(const Response& response, const std::vector<DealFeatures>& features,
                                 const std::vector<std::string>& spec) {
    DesignMatrix d;
    d.columns.push_back(kIntercept);
    for (const auto& name : spec) d.columns.push_back(canonical_term(name));

    std::vector<std::vector<double>> rows;
    std::vector<double> ys;
    for (const auto& f : features) {
        const auto r = response.find(f.deal_id);
        if (r == response.end()) {
            ++d.dropped;
            continue;
        }
        std::vector<double> row{1.0};
        bool complete = true;
        for (std::size_t j = 1; j < d.columns.size() && complete; ++j) {
            const auto v = feature_value(f, d.columns[j]);
            if (v) row.push_back(*v);
            else complete = false;
        }
        if (!complete) {
            ++d.dropped;
            continue;
        }
        rows.push_back(std::move(row));
        ys.push_back(r->second);
        d.deal_ids.push_back(f.deal_id);
    }

    d.x.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d.columns.size()));
    d.y.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        d.y(static_cast<Eigen::Index>(i)) = ys[i];
    }
    for (Eigen::Index j = 1; j < d.x.cols(); ++j) {
        const bool constant = d.x.rows() == 0 || (d.x.col(j).array() == d.x(0, j)).all();
        if (constant)
            fail(ErrorKind::DegenerateDesign, "column '" + d.columns[static_cast<std::size_t>(j)] +
                                                  "' is constant over " + std::to_string(d.x.rows()) + " deals");
    }
    return d;
}

inline DesignMatrix build_design(const std::vector<CarResult>& cars, const std::vector<DealFeatures>& features,
                                 const std::vector<std::string>& spec, const EventWindow& window) {
    return build_design(response_for(cars, window), features, spec);
}

struct RegressionResult {
    std::vector<std::string> terms; // intercept first
    std::vector<double> coefficients;
    std::vector<double> std_errors;
    std::vector<double> t_stats;
    std::vector<double> p_values; // two-tailed, t with n - p - 1 dof
    std::vector<double> residuals;
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    double residual_variance = 0.0;
    std::size_t n_used = 0;
    std::size_t dropped = 0;

    std::optional<std::size_t> index_of(const std::string& term) const {
        const std::string key = term == kIntercept ? term : canonical_term(term);
        for (std::size_t i = 0; i < terms.size(); ++i)
            if (terms[i] == key) return i;
        return std::nullopt;
    }
    double coefficient(const std::string& term) const { return coefficients.at(*index_of(term)); }
    double std_error(const std::string& term) const { return std_errors.at(*index_of(term)); }
};

/// 1 - (1 - r2)(n - 1)/(n - p - 1), p regressors excluding the intercept.
inline double adjusted_r_squared(double r_squared, std::size_t n, std::size_t p) {
    return 1.0 - (1.0 - r_squared) * (static_cast<double>(n) - 1.0) / (static_cast<double>(n) - static_cast<double>(p) - 1.0);
}

/// Least squares by column-pivoted Householder QR with classical
/// homoskedastic standard errors s^2 (X'X)^-1, s^2 = SSR / (n - p - 1).
inline RegressionResult ols(const DesignMatrix& design) {
    const auto n = design.x.rows();
    const auto k = design.x.cols();
    if (n <= k)
        fail(ErrorKind::InsufficientObservations,
             std::to_string(n) + " observations for " + std::to_string(k) + " coefficients");
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.x);
    if (qr.rank() < k) fail(ErrorKind::SingularDesign, "design matrix has rank " + std::to_string(qr.rank()) +
                                                           " < " + std::to_string(k));
    const Eigen::VectorXd beta = qr.solve(design.y);
    const Eigen::VectorXd resid = design.y - design.x * beta;

    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.template triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(k, k));
    const auto& perm = qr.colsPermutation();
    const Eigen::MatrixXd xtx_inv = perm * (r_inv * r_inv.transpose()) * perm.transpose();

    RegressionResult out;
    out.terms = design.columns;
    out.n_used = static_cast<std::size_t>(n);
    out.dropped = design.dropped;
    const double dof = static_cast<double>(n - k);
    const double ssr = resid.squaredNorm();
    const double mean_y = design.y.mean();
    const double sst = (design.y.array() - mean_y).square().sum();
    out.residual_variance = ssr / dof;
    out.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
    out.adj_r_squared = adjusted_r_squared(out.r_squared, out.n_used, static_cast<std::size_t>(k - 1));
    out.residuals.assign(resid.data(), resid.data() + resid.size());
    for (Eigen::Index j = 0; j < k; ++j) {
        const double b = beta(j);
        const double se = std::sqrt(std::max(0.0, out.residual_variance * xtx_inv(j, j)));
        double t = 0.0;
        if (se > 0.0) t = b / se;
        else if (b != 0.0) t = std::copysign(std::numeric_limits<double>::infinity(), b);
        const double p = std::isinf(t) ? 0.0 : 2.0 * (1.0 - student_t_cdf(std::fabs(t), dof));
        out.coefficients.push_back(b);
        out.std_errors.push_back(se);
        out.t_stats.push_back(t);
        out.p_values.push_back(std::min(1.0, p));
    }
    return out;
}

struct CorrelationMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;
    std::size_t n_used = 0;
};

/// Pearson correlations over deals with every named regressor present.
inline CorrelationMatrix correlation_matrix(const std::vector<DealFeatures>& features,
                                            const std::vector<std::string>& names) {
    std::vector<std::vector<double>> columns(names.size());
    CorrelationMatrix out;
    for (const auto& n : names) out.names.push_back(canonical_term(n));
    for (const auto& f : features) {
        std::vector<double> row;
        for (const auto& n : out.names) {
            const auto v = feature_value(f, n);
            if (!v) break;
            row.push_back(*v);
        }
        if (row.size() != names.size()) continue;
        for (std::size_t j = 0; j < row.size(); ++j) columns[j].push_back(row[j]);
        ++out.n_used;
    }
    if (out.n_used < 2) fail(ErrorKind::EmptySample, "correlation needs at least 2 complete deals");
    std::vector<double> mean(names.size()), norm(names.size());
    for (std::size_t j = 0; j < names.size(); ++j) {
        for (double v : columns[j]) mean[j] += v;
        mean[j] /= static_cast<double>(out.n_used);
        for (double v : columns[j]) norm[j] += (v - mean[j]) * (v - mean[j]);
        if (!(norm[j] > 0.0)) fail(ErrorKind::ConstantColumn, "column '" + out.names[j] + "' is constant");
    }
    out.values.assign(names.size(), std::vector<double>(names.size(), 1.0));
    for (std::size_t a = 0; a < names.size(); ++a)
        for (std::size_t b = a + 1; b < names.size(); ++b) {
            double cross = 0.0;
            for (std::size_t i = 0; i < out.n_used; ++i) cross += (columns[a][i] - mean[a]) * (columns[b][i] - mean[b]);
            const double r = std::clamp(cross / std::sqrt(norm[a] * norm[b]), -1.0, 1.0);
            out.values[a][b] = out.values[b][a] = r;
        }
    return out;
}

/// One regression column of a results table.
struct SpecColumn {
    std::string id;
    std::string label;
    std::vector<std::string> terms;
};

struct RegressionCell {
    std::optional<RegressionResult> result;
    std::string error; // set when the regression failed
};

struct RegressionTable {
    std::string title;
    std::vector<SpecColumn> columns;
    std::vector<EventWindow> windows;
    std::vector<std::vector<RegressionCell>> cells; // [column][window]
    std::vector<std::string> row_terms;             // union of terms in first-appearance order

    /// Smallest n_used across windows of a column (deals dropped per window differ only by missing CARs).
    std::optional<std::size_t> n_for(std::size_t column) const {
        std::optional<std::size_t> n;
        for (const auto& c : cells[column])
            if (c.result) n = n ? std::min(*n, c.result->n_used) : c.result->n_used;
        return n;
    }
};

inline std::vector<SpecColumn> table7_specs() {
    return {
        {"T7-1", "(1)", {"control"}},
        {"T7-2", "(2)", {"control", "time_trend"}},
        {"T7-3", "(3)", {"control", "listed"}},
        {"T7-4", "(4)", {"control", "non_diversified"}},
        {"T7-5", "(5)", {"log_post_ownership"}},
        {"T7-6", "(6)", {"control", "log_post_ownership"}},
        {"T7-7", "(7)", {"control", "dummy95"}},
        {"T7-8", "(8)", {"control", "dummy95", "log_transaction_value"}},
    };
}

inline std::vector<std::string> table9_terms(bool include_dm) {
    if (include_dm) return {"control", "dm", "control*dm", "listed", "non_diversified", "mv", "mv*control"};
    return {"control", "listed", "non_diversified", "mv", "mv*control"};
}

namespace detail {

inline void collect_terms(RegressionTable& table) {
    for (const auto& col : table.columns)
        for (const auto& t : col.terms) {
            const std::string c = canonical_term(t);
            if (std::find(table.row_terms.begin(), table.row_terms.end(), c) == table.row_terms.end())
                table.row_terms.push_back(c);
        }
}

inline RegressionCell run_cell(const Response& response, const std::vector<DealFeatures>& features,
                               const std::vector<std::string>& terms) {
    RegressionCell cell;
    try {
        cell.result = ols(build_design(response, features, terms));
    } catch (const Error& e) {
        cell.error = e.what();
    }
    return cell;
}

} // namespace detail

/// Window -> deal id -> CAR.
using ResponsesByWindow = std::vector<std::pair<EventWindow, Response>>;

/// The eight control-effect regressions over one sample, per window.
inline RegressionTable run_table7(const std::vector<DealFeatures>& sample, const ResponsesByWindow& responses) {
    RegressionTable table;
    table.title = "Majority control and acquirer returns (DM-VN)";
    table.columns = table7_specs();
    for (const auto& [w, _] : responses) table.windows.push_back(w);
    for (const auto& col : table.columns) {
        std::vector<RegressionCell> row;
        for (const auto& [w, response] : responses) row.push_back(detail::run_cell(response, sample, col.terms));
        table.cells.push_back(std::move(row));
    }
    detail::collect_terms(table);
    return table;
}

/// Pooled, cross-border and domestic regressions. `samples` gives each
/// deal's sample label keyed by deal id.
inline RegressionTable run_table9(const std::vector<DealFeatures>& features,
                                  const std::map<std::string, Sample, std::less<>>& samples,
                                  const ResponsesByWindow& responses) {
    RegressionTable table;
    table.title = "Control gains across acquirer origins";
    table.columns = {
        {"T9-ALL", "1 (All-VN)", table9_terms(true)},
        {"T9-CB", "2 (CB-VN)", table9_terms(true)},
        {"T9-VN", "3 (VN-VN)", table9_terms(false)},
    };
    for (const auto& [w, _] : responses) table.windows.push_back(w);
    auto subset = [&](auto keep) {
        std::vector<DealFeatures> out;
        for (const auto& f : features) {
            const auto it = samples.find(f.deal_id);
            if (it != samples.end() && keep(it->second)) out.push_back(f);
        }
        return out;
    };
    const std::vector<std::vector<DealFeatures>> groups{
        subset([](Sample s) { return s != Sample::Excluded; }),
        subset([](Sample s) { return s == Sample::DmVn || s == Sample::EmVn; }),
        subset([](Sample s) { return s == Sample::VnVn; }),
    };
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        std::vector<RegressionCell> row;
        for (const auto& [w, response] : responses)
            row.push_back(detail::run_cell(response, groups[c], table.columns[c].terms));
        table.cells.push_back(std::move(row));
    }
    detail::collect_terms(table);
    return table;
}

} // namespace mastudy
