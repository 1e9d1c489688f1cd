#include "resample/cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "resample/cli/report.hpp"
#include "resample/core/csv.hpp"
#include "resample/failure/model.hpp"
#include "resample/oracle/oracle.hpp"
#include "resample/regression/disturbed.hpp"
#include "resample/regression/regression.hpp"
#include "resample/renewal/inventory.hpp"
#include "resample/renewal/renewal.hpp"

namespace resample::cli {
namespace {

using regression::RegressionDataset;

struct Options {
    std::optional<std::uint64_t> seed;
    std::string format = "csv";
    std::string out_path;

    // shared inputs
    std::string data;
    std::string x_row;
    std::size_t k = 0;
    std::size_t realizations = 1000;
    bool enumerate = false;
    bool lower_median = false;
    std::string method;

    // regression bias
    std::size_t false_row = 0;
    std::size_t predict_row = 0;
    std::vector<std::size_t> ks;

    // failure
    double rate = 0.0;
    std::string dist;
    double t = 0.0;
    std::size_t l = 0;
    std::size_t max_i = 0;
    std::size_t l_min = 3;
    std::size_t l_max = 8;
    std::size_t trials = 0;
    std::string intervals;
    std::string degenerations;

    // renewal / inventory
    std::string demand;
    std::string supply;
    std::string demand_gen;
    std::string supply_gen;
    std::size_t m = 0;
    std::size_t n_x = 0;
    std::size_t n_y = 0;
    std::optional<double> truth;
    std::string economics;
    std::string source = "truth";
    std::optional<std::size_t> k_min;
    std::optional<std::size_t> k_max;
    std::size_t path_trials = 0;

    // oracle / plot
    std::string suite;
    std::string report;
    std::string x_column;
    std::vector<std::string> series;
};

std::uint64_t require_seed(const Options& o, const std::string& what)
{
    if (!o.seed) {
        fail(ErrorKind::usage, what + " is randomized; pass --seed");
    }
    return *o.seed;
}

RegressionDataset load_regression(const std::string& path)
{
    const auto table = read_numeric_csv(path);
    if (table.header.size() < 2 || table.header.front() != "y") {
        fail(ErrorKind::data, path + ": expected header y,x1,...,xm");
    }
    if (table.rows.empty()) {
        fail(ErrorKind::data, path + ": no observations");
    }
    const auto n = static_cast<Eigen::Index>(table.rows.size());
    const auto m = static_cast<Eigen::Index>(table.header.size() - 1);
    Eigen::MatrixXd X(n, m);
    Eigen::VectorXd Y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = table.rows[static_cast<std::size_t>(i)];
        Y(i) = row[0];
        for (Eigen::Index j = 0; j < m; ++j) {
            X(i, j) = row[static_cast<std::size_t>(j + 1)];
        }
    }
    return RegressionDataset(std::move(X), std::move(Y));
}

Json vector_json(const Eigen::VectorXd& v)
{
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

Json optional_json(const std::optional<Quantity>& q)
{
    if (!q) {
        return nullptr;
    }
    return {{"value", q->value}, {"provenance", std::string(to_string(q->provenance))}};
}

Json estimator_json(const EstimatorReport& r)
{
    return {{"estimate", r.estimate},
            {"method", std::string(to_string(r.method))},
            {"expectation", optional_json(r.expectation)},
            {"variance", optional_json(r.variance)},
            {"bias", optional_json(r.bias)},
            {"mse", optional_json(r.mse)}};
}

std::size_t to_row_index(std::size_t one_based, const char* flag)
{
    if (one_based < 1) {
        fail(ErrorKind::usage, std::string(flag) + " is 1-based");
    }
    return one_based - 1;
}

regression::ResampleOptions resample_options(const Options& o)
{
    return {o.enumerate ? regression::ResampleMode::enumerate : regression::ResampleMode::random,
            regression::kEnumerationCap};
}

// regress ------------------------------------------------------------------

void regress_fit(const Options& o, Report& report)
{
    const auto data = load_regression(o.data);
    const auto beta = regression::lse_fit(data);
    report.results["observations"] = data.observations();
    report.results["factors"] = data.factors();
    report.table.columns = {"parameter", "estimate"};
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        report.table.rows.push_back({"beta" + std::to_string(j + 1), beta(j)});
    }
}

void regress_predict(const Options& o, Report& report)
{
    const auto data = load_regression(o.data);
    const auto xv = parse_vector(o.x_row);
    const Eigen::RowVectorXd x = Eigen::Map<const Eigen::RowVectorXd>(xv.data(), static_cast<Eigen::Index>(xv.size()));
    report.results["lse"] = regression::predict(x, regression::lse_fit(data));
    if (o.method == "resampling" || o.method == "median") {
        const std::size_t k = o.k ? o.k : data.observations() - 1;
        const ResamplePlan plan{k, o.realizations, false, o.enumerate ? o.seed.value_or(0) : require_seed(o, "resampling prediction")};
        if (o.method == "resampling") {
            const auto fit = regression::resampling_fit(data, plan, resample_options(o));
            report.results["resampling"] = regression::predict(x, fit.mean);
        } else {
            const auto med = regression::resampling_median_predict(data, x, plan, resample_options(o), o.lower_median);
            report.results["median"] = med.value;
        }
    } else if (o.method != "lse") {
        fail(ErrorKind::usage, "--method must be lse, resampling or median");
    }
}

void regress_resample(const Options& o, Report& report)
{
    const auto data = load_regression(o.data);
    const ResamplePlan plan{o.k, o.realizations, false, o.enumerate ? o.seed.value_or(0) : require_seed(o, "regress resample")};
    const auto fit = regression::resampling_fit(data, plan, resample_options(o));
    const auto lse = regression::lse_fit(data);
    report.results["k"] = o.k;
    report.results["realizations_used"] = fit.estimates.size();
    report.results["singular_count"] = fit.singular_count;
    report.results["exhaustive"] = fit.exhaustive;
    report.table.columns = {"parameter", "lse", "resampling"};
    for (Eigen::Index j = 0; j < lse.size(); ++j) {
        report.table.rows.push_back({"beta" + std::to_string(j + 1), lse(j), fit.mean(j)});
    }
}

void regress_median(const Options& o, Report& report)
{
    const auto data = load_regression(o.data);
    const auto xv = parse_vector(o.x_row);
    const Eigen::RowVectorXd x = Eigen::Map<const Eigen::RowVectorXd>(xv.data(), static_cast<Eigen::Index>(xv.size()));
    const ResamplePlan plan{o.k, o.realizations, false, o.enumerate ? o.seed.value_or(0) : require_seed(o, "regress median")};
    const auto med = regression::resampling_median_predict(data, x, plan, resample_options(o), o.lower_median);
    report.results["median_prediction"] = med.value;
    report.results["realization"] = med.realization + 1;
    report.results["beta"] = vector_json(med.beta);
    report.results["lse_prediction"] = regression::predict(x, regression::lse_fit(data));
}

void regress_screen(const Options& o, Report& report)
{
    const auto data = load_regression(o.data);
    // Constant columns (an intercept) carry no distance information.
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < data.X().cols(); ++j) {
        const auto col = data.X().col(j);
        if (col.maxCoeff() != col.minCoeff()) {
            keep.push_back(j);
        }
    }
    if (keep.empty()) {
        fail(ErrorKind::screening_unavailable, "every factor column is constant");
    }
    Eigen::MatrixXd factors(data.X().rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        factors.col(static_cast<Eigen::Index>(j)) = data.X().col(keep[j]);
    }
    const auto d = regression::mahalanobis_distances(factors);
    Eigen::Index worst = 0;
    d.maxCoeff(&worst);
    report.results["factors_used"] = keep.size();
    report.results["sum"] = d.sum();
    report.results["most_distant_row"] = worst + 1;
    report.table.columns = {"row", "distance"};
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        report.table.rows.push_back({i + 1, d(i)});
    }
}

void regress_bias(const Options& o, Report& report)
{
    const auto data = load_regression(o.data);
    const std::size_t fr = to_row_index(o.false_row, "--false-row");
    if (o.ks.empty()) {
        fail(ErrorKind::usage, "pass at least one --k");
    }
    const auto table = regression::data_mode_bias(data, fr, o.ks, regression::kEnumerationCap, o.seed.value_or(0));
    for (const auto& b : table.resampling) {
        if (!b.exhaustive && !o.seed) {
            fail(ErrorKind::usage, "some k exceeds the enumeration cap; pass --seed for the sampled average");
        }
    }
    report.results["false_row"] = o.false_row;
    report.results["shift"] = table.shift;
    report.results["beta_clean"] = vector_json(table.beta_clean);
    report.table.columns = {"quantity", "classical"};
    for (std::size_t k : table.ks) {
        report.table.columns.push_back("k" + std::to_string(k));
    }
    for (Eigen::Index j = 0; j < table.classical.size(); ++j) {
        std::vector<Json> row{"bias_beta" + std::to_string(j + 1), table.classical(j)};
        for (const auto& b : table.resampling) {
            row.emplace_back(b.value(j));
        }
        report.table.rows.push_back(std::move(row));
    }
    if (o.predict_row) {
        const std::size_t pr = to_row_index(o.predict_row, "--predict-row");
        const auto med = regression::data_mode_median_bias(data, fr, pr, o.ks);
        std::vector<Json> row{"median_bias_y" + std::to_string(o.predict_row), med.lse};
        for (double v : med.median) {
            row.emplace_back(v);
        }
        report.table.rows.push_back(std::move(row));
    }
}

// failure ------------------------------------------------------------------

failure::DegenerationDistribution to_degeneration(const oracle::GeneratorSpec& g)
{
    if (const auto* e = std::get_if<oracle::ExponentialGen>(&g.kind())) {
        return failure::DegenerationDistribution{failure::Exponential{e->rate}};
    }
    if (const auto* t = std::get_if<oracle::TriangularGen>(&g.kind())) {
        return failure::DegenerationDistribution{failure::Triangular{t->min, t->mode, t->max}};
    }
    if (const auto* s = std::get_if<oracle::EmpiricalGen>(&g.kind())) {
        return failure::DegenerationDistribution{failure::Empirical{s->sample}};
    }
    fail(ErrorKind::usage, "degeneration times must be exponential, triangular or empirical");
}

failure::FailureModelSpec model_spec(const Options& o, const oracle::GeneratorSpec& g)
{
    failure::FailureModelSpec spec{o.rate, to_degeneration(g), o.t};
    try {
        spec.validate();
    } catch (const Error& e) {
        fail(ErrorKind::usage, e.what());
    }
    return spec;
}

void failure_table(const Options& o, Report& report)
{
    const auto gen = parse_generator(o.dist);
    const auto spec = model_spec(o, gen);
    if (o.k < 1 || o.l < 1) {
        fail(ErrorKind::usage, "--k and --l must be at least 1");
    }
    const std::size_t rows = (o.max_i ? o.max_i : std::max(o.k, o.l)) + 1;
    const auto seed = require_seed(o, "failure table");
    // Each draw is a fresh sample pair replayed once, so the column means
    // estimate the expectations of the estimators.
    const auto mc = oracle::mc_failure_estimators(spec, gen, o.k, o.l, 1, rows, o.realizations, seed);
    const auto lambdas = failure::true_lambdas(spec);
    std::vector<double> plug(rows);
    std::vector<double> res(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        plug[i] = mc.plugin_pmf[i].mean;
        res[i] = mc.resampling_pmf[i].mean;
    }
    const auto combined = failure::combine_pmf(res, plug, o.l);
    report.results["draws"] = o.realizations;
    report.results["lambda"] = lambdas.initial;
    report.results["q1"] = failure::survival_fraction(spec);
    report.table.columns = {"i", "plug_in", "resampling", "resampling_analytic", "combined", "real"};
    for (std::size_t i = 0; i < rows; ++i) {
        Json analytic = nullptr;
        if (i <= o.l) {
            analytic = failure::expected_resampling_pmf(spec, o.l, i);
        }
        report.table.rows.push_back(
            {i, plug[i], res[i], analytic, i < combined.size() ? combined[i] : 0.0, failure::true_pmf(lambdas.initial, i)});
    }
}

void failure_estimate(const Options& o, Report& report)
{
    const failure::FailureSamples samples{read_sample_csv(o.intervals), read_sample_csv(o.degenerations)};
    const auto seed = require_seed(o, "failure estimate");
    const auto plug = failure::plugin_estimate(samples, o.t);
    const auto res = failure::resampling_estimate(samples, o.t, o.realizations, seed);
    const auto combined = failure::combine_pmf(res.initial_pmf, plug.initial_pmf, samples.degenerations.size());
    report.results["rate"] = plug.rate;
    report.results["initial_plug_in"] = plug.initial.estimate;
    report.results["initial_resampling"] = res.initial.estimate;
    report.results["terminal_plug_in"] = plug.terminal.estimate;
    report.results["terminal_resampling"] = res.terminal.estimate;
    std::size_t rows = std::max(res.initial_pmf.size(), combined.size());
    while (rows > res.initial_pmf.size() && combined[rows - 1] < 1e-9) {
        --rows;
    }
    report.table.columns = {"i", "plug_in", "resampling", "combined"};
    for (std::size_t i = 0; i < rows; ++i) {
        report.table.rows.push_back({i, i < plug.initial_pmf.size() ? plug.initial_pmf[i] : 0.0,
                                     i < res.initial_pmf.size() ? res.initial_pmf[i] : 0.0, combined[i]});
    }
}

void failure_expectations(const Options& o, Report& report)
{
    const auto gen = parse_generator(o.dist);
    const auto spec = model_spec(o, gen);
    if (o.l_min < 1 || o.l_min > o.l_max) {
        fail(ErrorKind::usage, "need 1 <= --l-min <= --l-max");
    }
    const auto lambdas = failure::true_lambdas(spec);
    report.results["lambda"] = lambdas.initial;
    report.results["trials"] = o.trials;
    report.table.columns = {"l", "analytic_resampling_mean"};
    const std::uint64_t seed = o.trials ? require_seed(o, "failure expectations with --trials") : 0;
    if (o.trials) {
        report.results["realizations"] = o.realizations;
        for (const char* c : {"plug_in_mean", "plug_in_variance", "plug_in_mse", "resampling_mean",
                              "resampling_variance", "resampling_mse"}) {
            report.table.columns.emplace_back(c);
        }
    }
    for (std::size_t l = o.l_min; l <= o.l_max; ++l) {
        std::vector<Json> row{l, failure::expected_resampling_initial(spec, l)};
        if (o.trials) {
            const auto mc = oracle::mc_failure_estimators(spec, gen, l, l, o.realizations, 1, o.trials, seed + l);
            row.insert(row.end(), {mc.plugin_initial.mean, mc.plugin_initial.variance,
                                   mc.plugin_initial.mse(lambdas.initial), mc.resampling_initial.mean,
                                   mc.resampling_initial.variance, mc.resampling_initial.mse(lambdas.initial)});
        }
        report.table.rows.push_back(std::move(row));
    }
}

// renewal ------------------------------------------------------------------

renewal::RenewalComparisonSpec comparison(const Options& o)
{
    if (o.m < 1 || o.k > o.m) {
        fail(ErrorKind::usage, "need --m >= 1 and 0 <= --k <= --m");
    }
    return {read_sample_csv(o.demand), read_sample_csv(o.supply), o.m, o.m - o.k};
}

void renewal_theta(const Options& o, Report& report)
{
    const auto spec = comparison(o);
    EstimatorReport est;
    if (o.method == "classical-exp") {
        est = renewal::classical_theta_exponential(spec);
    } else if (o.method == "classical-norm") {
        est = renewal::classical_theta_normal(spec);
    } else if (o.method == "resampling") {
        const auto seed = require_seed(o, "resampling theta");
        est = renewal::resampling_theta(spec, o.realizations, seed);
        const auto var = renewal::theta_variance_alpha(spec, o.realizations, {4'000'000, 200'000, seed});
        est.variance = Quantity{var.variance, var.exhaustive ? Provenance::analytic : Provenance::empirical};
        report.results["realizations"] = o.realizations;
    } else {
        fail(ErrorKind::usage, "--method must be classical-exp, classical-norm or resampling");
    }
    if (o.truth) {
        est.attach_truth(*o.truth);
    }
    report.results["m"] = o.m;
    report.results["k"] = o.k;
    report.results["theta"] = estimator_json(est);
}

void renewal_variance(const Options& o, Report& report)
{
    if (o.m < 1 || o.k > o.m) {
        fail(ErrorKind::usage, "need --m >= 1 and 0 <= --k <= --m");
    }
    renewal::AlphaVarianceResult var;
    if (!o.demand_gen.empty() || !o.supply_gen.empty()) {
        const auto dg = parse_generator(o.demand_gen);
        const auto sg = parse_generator(o.supply_gen);
        const auto* dn = std::get_if<oracle::NormalGen>(&dg.kind());
        const auto* sn = std::get_if<oracle::NormalGen>(&sg.kind());
        if (!dn || !sn) {
            fail(ErrorKind::usage, "the population route needs normal generators");
        }
        if (o.n_x < 1 || o.n_y < 1) {
            fail(ErrorKind::usage, "the population route needs --n-x and --n-y");
        }
        var = renewal::theta_variance_alpha_normal(dn->mean, dn->sd, sn->mean, sn->sd, o.n_x, o.n_y, o.m, o.m - o.k,
                                                   o.realizations);
        report.results["route"] = "population";
    } else {
        const auto spec = comparison(o);
        var = renewal::theta_variance_alpha(spec, o.realizations, {4'000'000, 200'000, o.seed.value_or(0)});
        if (!var.exhaustive && !o.seed) {
            fail(ErrorKind::usage, "enumeration is infeasible for these sizes; pass --seed for Monte Carlo");
        }
        report.results["route"] = "data";
    }
    report.results["realizations"] = o.realizations;
    report.results["mu"] = var.mu;
    report.results["mu11"] = var.mu11;
    report.results["mu_squared"] = var.mu_squared;
    report.results["raw_variance"] = var.raw_variance;
    report.results["variance"] = var.variance;
    report.results["exhaustive"] = var.exhaustive;
    if (var.standard_error) {
        report.results["standard_error"] = *var.standard_error;
    }
    report.table.columns = {"alpha_x", "alpha_y", "probability", "mu11"};
    for (const auto& c : var.cells) {
        report.table.rows.push_back({c.alpha_x, c.alpha_y, c.probability, c.conditional_moment});
    }
}

// inventory ----------------------------------------------------------------

renewal::InventoryEconomics load_economics(const Options& o)
{
    std::ifstream in(o.economics);
    if (!in) {
        fail(ErrorKind::data, "cannot open " + o.economics);
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const std::exception& e) {
        fail(ErrorKind::data, o.economics + ": " + e.what());
    }
    renewal::InventoryEconomics econ;
    for (const char* key : {"c_d", "c_s", "b0", "b1"}) {
        if (!doc.contains(key) || !doc[key].is_number()) {
            fail(ErrorKind::data, o.economics + ": missing numeric key " + key);
        }
    }
    econ.c_d = doc["c_d"].get<double>();
    econ.c_s = doc["c_s"].get<double>();
    econ.b0 = doc["b0"].get<double>();
    econ.b1 = doc["b1"].get<double>();
    econ.m = o.m;
    econ.k_min = o.k_min.value_or(0);
    econ.k_max = o.k_max.value_or(o.m);
    try {
        econ.validate();
    } catch (const Error& e) {
        fail(ErrorKind::usage, e.what());
    }
    return econ;
}

renewal::ProbabilitySource probability_source(const Options& o)
{
    if (o.source == "truth") {
        const auto dg = parse_generator(o.demand_gen);
        const auto sg = parse_generator(o.supply_gen);
        if (const auto* dn = std::get_if<oracle::NormalGen>(&dg.kind())) {
            if (const auto* sn = std::get_if<oracle::NormalGen>(&sg.kind())) {
                return renewal::NormalTruth{dn->mean, dn->sd, sn->mean, sn->sd};
            }
        }
        if (const auto* de = std::get_if<oracle::ExponentialGen>(&dg.kind())) {
            if (const auto* se = std::get_if<oracle::ExponentialGen>(&sg.kind())) {
                return renewal::ExponentialTruth{de->rate, se->rate};
            }
        }
        fail(ErrorKind::usage, "true probabilities need two normal or two exponential generators");
    }
    Sample d = read_sample_csv(o.demand);
    Sample s = read_sample_csv(o.supply);
    if (o.source == "classical-norm") {
        return renewal::ClassicalNormal{std::move(d), std::move(s)};
    }
    if (o.source == "classical-exp") {
        return renewal::ClassicalExponential{std::move(d), std::move(s)};
    }
    if (o.source == "resampling") {
        return renewal::ResamplingSource{std::move(d), std::move(s), o.realizations,
                                         require_seed(o, "resampling probabilities")};
    }
    fail(ErrorKind::usage, "--source must be truth, classical-norm, classical-exp or resampling");
}

void inventory_profit(const Options& o, Report& report)
{
    auto econ = load_economics(o);
    const auto source = probability_source(o);
    const auto probs = renewal::shortage_profile(econ.m, o.k, source);
    report.results["m"] = econ.m;
    report.results["k"] = o.k;
    report.results["income"] = renewal::average_income(econ, o.k, probs);
    report.results["damage"] = renewal::average_damage(econ, o.k, probs);
    report.table.columns = {"i", "shortage_probability"};
    for (std::size_t i = 0; i < probs.size(); ++i) {
        report.table.rows.push_back({i + 1, probs[i]});
    }
}

void inventory_optimize(const Options& o, Report& report)
{
    const auto econ = load_economics(o);
    const auto source = probability_source(o);
    const auto best = renewal::optimal_k(econ, source);
    report.results["m"] = econ.m;
    report.results["k_star"] = best.k;
    report.results["income"] = best.income;
    report.table.columns = {"k", "income", "damage"};
    std::optional<oracle::GeneratorSpec> dg;
    std::optional<oracle::GeneratorSpec> sg;
    if (o.path_trials) {
        if (o.demand_gen.empty() || o.supply_gen.empty()) {
            fail(ErrorKind::usage, "--path-trials needs --demand-gen and --supply-gen");
        }
        dg = parse_generator(o.demand_gen);
        sg = parse_generator(o.supply_gen);
        report.table.columns.emplace_back("path_shortage");
    }
    const std::uint64_t seed = o.path_trials ? require_seed(o, "path-cumulative simulation") : 0;
    for (const auto& p : best.profile) {
        std::vector<Json> row{p.k, p.income, p.damage};
        if (o.path_trials) {
            row.emplace_back(oracle::mc_path_shortage(*dg, *sg, econ.m, p.k, o.path_trials, seed + p.k).mean);
        }
        report.table.rows.push_back(std::move(row));
    }
}

// oracle / plot --------------------------------------------------------------

void oracle_validate(const Options& o, Report& report)
{
    const auto seed = require_seed(o, "oracle validate");
    const auto checks = oracle::validate_suite(oracle::parse_suite(o.suite), o.trials ? o.trials : 2000, seed);
    bool all = true;
    report.table.columns = {"check", "observed", "expected", "tolerance", "passed"};
    for (const auto& c : checks) {
        all = all && c.passed;
        report.table.rows.push_back({c.name, c.observed, c.expected, c.tolerance, c.passed});
    }
    report.results["suite"] = o.suite;
    report.results["all_passed"] = all;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::data, "cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Small-sample resampling estimators", "resample"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", o.seed, "Seed for every randomized step (decimal 64-bit)");
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", o.out_path, "Write the report here instead of stdout");

    std::function<void(const Options&, Report&)> action;
    bool plot = false;
    auto leaf = [&](CLI::App* parent, const char* name, const char* help,
                    std::function<void(const Options&, Report&)> fn) {
        auto* sub = parent->add_subcommand(name, help);
        sub->callback([&action, fn] { action = fn; });
        return sub;
    };

    auto* regress = app.add_subcommand("regress", "Linear regression estimators")->require_subcommand(1);
    auto* fit = leaf(regress, "fit", "Least-squares fit", regress_fit);
    fit->add_option("--data", o.data, "CSV with header y,x1,...,xm")->required();
    auto* pred = leaf(regress, "predict", "Predict y at a factor row", regress_predict);
    pred->add_option("--data", o.data)->required();
    pred->add_option("--x", o.x_row, "Comma-separated factor values")->required();
    pred->add_option("--method", o.method, "lse, resampling or median")->default_val("lse");
    pred->add_option("--k", o.k, "Resample size (default n - 1)");
    pred->add_option("--realizations", o.realizations);
    pred->add_flag("--enumerate", o.enumerate, "Use every k-subset");
    pred->add_flag("--lower-median", o.lower_median, "Allow an even number of realizations");
    auto* res = leaf(regress, "resample", "Resampling estimator", regress_resample);
    res->add_option("--data", o.data)->required();
    res->add_option("--k", o.k, "Resample size")->required();
    res->add_option("--realizations", o.realizations);
    res->add_flag("--enumerate", o.enumerate, "Use every k-subset");
    auto* med = leaf(regress, "median", "Resampling median predictor", regress_median);
    med->add_option("--data", o.data)->required();
    med->add_option("--x", o.x_row)->required();
    med->add_option("--k", o.k)->required();
    med->add_option("--realizations", o.realizations);
    med->add_flag("--enumerate", o.enumerate);
    med->add_flag("--lower-median", o.lower_median);
    auto* scr = leaf(regress, "screen", "Mahalanobis distances of the factor rows", regress_screen);
    scr->add_option("--data", o.data)->required();
    auto* bias = leaf(regress, "bias", "Bias of classical and resampling estimators for a false row", regress_bias);
    bias->add_option("--data", o.data)->required();
    bias->add_option("--false-row", o.false_row, "1-based index of the suspected row")->required();
    bias->add_option("--k", o.ks, "Resample sizes (repeatable)")->required();
    bias->add_option("--predict-row", o.predict_row, "Also report median-predictor bias at this 1-based row");

    auto* failure_cmd = app.add_subcommand("failure", "Initial/terminal failure model")->require_subcommand(1);
    auto model_flags = [&](CLI::App* sub) {
        sub->add_option("--rate", o.rate, "Poisson rate of initial failures")->required();
        sub->add_option("--dist", o.dist, "Degeneration time distribution, e.g. triangular:0,2,4")->required();
        sub->add_option("--t", o.t, "Horizon")->required();
    };
    auto* ftable = leaf(failure_cmd, "table", "Expectations of the estimators of P_i(t)", failure_table);
    model_flags(ftable);
    ftable->add_option("--k", o.k, "Interval sample size")->required();
    ftable->add_option("--l", o.l, "Degeneration sample size")->required();
    ftable->add_option("--realizations", o.realizations, "Simulated sample pairs")->default_val(100000);
    ftable->add_option("--max-i", o.max_i, "Largest i to report (default max(k, l))");
    auto* fest = leaf(failure_cmd, "estimate", "Estimates from observed samples", failure_estimate);
    fest->add_option("--intervals", o.intervals, "Sample CSV of inter-arrival intervals")->required();
    fest->add_option("--degenerations", o.degenerations, "Sample CSV of degeneration times")->required();
    fest->add_option("--t", o.t)->required();
    fest->add_option("--realizations", o.realizations);
    auto* fexp = leaf(failure_cmd, "expectations", "Mean and MSE of the estimators of Lambda(t)", failure_expectations);
    model_flags(fexp);
    fexp->add_option("--l-min", o.l_min);
    fexp->add_option("--l-max", o.l_max);
    fexp->add_option("--trials", o.trials, "Simulated sample pairs per l (0: analytic only)");
    fexp->add_option("--realizations", o.realizations)->default_val(100);

    auto* renewal_cmd = app.add_subcommand("renewal", "Renewal process comparison")->require_subcommand(1);
    auto* theta = leaf(renewal_cmd, "theta", "Estimate P{D_m > S_(m-K)}", renewal_theta);
    theta->add_option("--demand", o.demand)->required();
    theta->add_option("--supply", o.supply)->required();
    theta->add_option("--m", o.m)->required();
    theta->add_option("--k", o.k)->required();
    theta->add_option("--method", o.method)->required();
    theta->add_option("--realizations", o.realizations);
    theta->add_option("--truth", o.truth, "Known Theta, to report bias and mse");
    auto* var = leaf(renewal_cmd, "variance", "Variance of the resampling estimator via overlap pairs", renewal_variance);
    var->add_option("--demand", o.demand);
    var->add_option("--supply", o.supply);
    var->add_option("--demand-gen", o.demand_gen, "Population route: demand distribution");
    var->add_option("--supply-gen", o.supply_gen, "Population route: supply distribution");
    var->add_option("--n-x", o.n_x);
    var->add_option("--n-y", o.n_y);
    var->add_option("--m", o.m)->required();
    var->add_option("--k", o.k)->required();
    var->add_option("--realizations", o.realizations);

    auto* inventory = app.add_subcommand("inventory", "Initial inventory level")->require_subcommand(1);
    auto inventory_flags = [&](CLI::App* sub) {
        sub->add_option("--economics", o.economics, "JSON with c_d, c_s, b0, b1")->required();
        sub->add_option("--m", o.m)->required();
        sub->add_option("--source", o.source, "truth, classical-norm, classical-exp or resampling");
        sub->add_option("--demand-gen", o.demand_gen);
        sub->add_option("--supply-gen", o.supply_gen);
        sub->add_option("--demand", o.demand);
        sub->add_option("--supply", o.supply);
        sub->add_option("--realizations", o.realizations);
    };
    auto* profit = leaf(inventory, "profit", "Average income for one K", inventory_profit);
    inventory_flags(profit);
    profit->add_option("--k", o.k)->required();
    auto* optimize = leaf(inventory, "optimize", "Scan K for the largest average income", inventory_optimize);
    inventory_flags(optimize);
    optimize->add_option("--k-min", o.k_min);
    optimize->add_option("--k-max", o.k_max);
    optimize->add_option("--path-trials", o.path_trials, "Also simulate the path-cumulative shortage probability");

    auto* oracle_cmd = app.add_subcommand("oracle", "Independent verification")->require_subcommand(1);
    auto* validate = leaf(oracle_cmd, "validate", "Cross-check formulas against simulation", oracle_validate);
    validate->add_option("--suite", o.suite)->required()->check(CLI::IsMember({"regression", "failure", "renewal"}));
    validate->add_option("--trials", o.trials);

    auto* plot_cmd = app.add_subcommand("plot", "Long-format plot data from a report");
    plot_cmd->add_option("--report", o.report, "Report written by this tool")->required();
    plot_cmd->add_option("--x", o.x_column, "Column for the x axis")->required();
    plot_cmd->add_option("--series", o.series, "Columns to plot")->required()->delimiter(',');
    plot_cmd->callback([&plot] { plot = true; });

    auto error_out = [&](std::string_view kind, const std::string& message, int code) {
        Json e = {{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
        err << e.dump() << '\n';
        return code;
    };

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        return error_out("usage", e.what(), 2);
    } catch (const Error& e) {
        return error_out(to_string(e.kind()), e.what(), exit_code(e.kind()));
    }

    try {
        std::string text;
        if (plot) {
            text = emit_plot_data(slurp(o.report), o.x_column, o.series);
        } else {
            Report report;
            report.argv.push_back("resample");
            report.argv.insert(report.argv.end(), args.begin(), args.end());
            report.seed = o.seed;
            action(o, report);
            text = o.format == "json" ? to_json(report).dump(2) + "\n" : to_csv(report);
        }
        if (o.out_path.empty()) {
            out << text;
        } else {
            std::ofstream file(o.out_path, std::ios::binary);
            if (!file) {
                fail(ErrorKind::data, "cannot write " + o.out_path);
            }
            file << text;
        }
    } catch (const Error& e) {
        return error_out(to_string(e.kind()), e.what(), exit_code(e.kind()));
    } catch (const CLI::Error& e) {
        return error_out("usage", e.what(), 2);
    } catch (const std::exception& e) {
        return error_out("internal", e.what(), 4);
    }
    return 0;
}

}  // namespace resample::cli
