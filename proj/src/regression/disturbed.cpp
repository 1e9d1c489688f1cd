#include "resample/regression/disturbed.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "resample/core/combinatorics.hpp"
#include "resample/core/error.hpp"
#include "resample/core/resample.hpp"
#include "resample/core/rng.hpp"

namespace resample::regression {
namespace {

MatrixXd select_rows(const MatrixXd& X, std::span<const std::size_t> rows)
{
    MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

bool full_rank(const MatrixXd& A)
{
    if (A.rows() < A.cols()) {
        return false;
    }
    Eigen::ColPivHouseholderQR<MatrixXd> qr(A);
    return qr.rank() == A.cols();
}

/// Bias contribution of one false row x appended to the true rows `Xu`.
std::optional<VectorXd> leave_in_bias(const MatrixXd& Xu, const RowVectorXd& x, double shift)
{
    if (full_rank(Xu)) {
        const MatrixXd gram = Xu.transpose() * Xu;
        Eigen::LDLT<MatrixXd> ldlt(gram);
        const VectorXd g_inv_xt = ldlt.solve(x.transpose());
        const double leverage = x.dot(g_inv_xt);
        return VectorXd(g_inv_xt * (shift / (1.0 + leverage)));
    }
    MatrixXd XJ(Xu.rows() + 1, Xu.cols());
    XJ << Xu, x;
    if (!full_rank(XJ)) {
        return std::nullopt;
    }
    const MatrixXd gram = XJ.transpose() * XJ;
    Eigen::LDLT<MatrixXd> ldlt(gram);
    return VectorXd(ldlt.solve(x.transpose()) * shift);
}

}  // namespace

void DisturbanceSpec::validate(const MatrixXd& X) const
{
    if (false_row >= static_cast<std::size_t>(X.rows())) {
        fail(ErrorKind::invalid_input, "false row index out of range");
    }
    if (beta_true.size() != X.cols() || beta_false.size() != X.cols()) {
        fail(ErrorKind::invalid_input, "parameter vectors must have one entry per factor");
    }
    if (!beta_true.allFinite() || !beta_false.allFinite()) {
        fail(ErrorKind::invalid_input, "parameter vectors must be finite");
    }
    if (!(noise_variance >= 0.0)) {
        fail(ErrorKind::invalid_input, "noise variance must be non-negative");
    }
}

double DisturbanceSpec::shift(const MatrixXd& X) const
{
    validate(X);
    return X.row(static_cast<Eigen::Index>(false_row)).dot(beta_true - beta_false);
}

VectorXd DisturbanceSpec::expected_response(const MatrixXd& X) const
{
    validate(X);
    VectorXd y = X * beta_true;
    const auto f = static_cast<Eigen::Index>(false_row);
    y(f) = X.row(f).dot(beta_false);
    return y;
}

VectorXd classical_bias(const MatrixXd& X, std::size_t false_row, double shift)
{
    if (false_row >= static_cast<std::size_t>(X.rows())) {
        fail(ErrorKind::invalid_input, "false row index out of range");
    }
    std::vector<std::size_t> true_rows;
    for (std::size_t i = 0; i < static_cast<std::size_t>(X.rows()); ++i) {
        if (i != false_row) {
            true_rows.push_back(i);
        }
    }
    const MatrixXd Xt = select_rows(X, true_rows);
    if (!full_rank(Xt)) {
        fail(ErrorKind::singular_design, "X_t'X_t is singular");
    }
    return *leave_in_bias(Xt, X.row(static_cast<Eigen::Index>(false_row)), shift);
}

VectorXd disturbed_classical_expectation(const MatrixXd& X, const DisturbanceSpec& spec)
{
    return spec.beta_true - classical_bias(X, spec.false_row, spec.shift(X));
}

ResamplingBias resampling_bias(const MatrixXd& X, std::size_t false_row, double shift,
                               std::size_t k, std::size_t enumeration_cap, std::uint64_t seed)
{
    const auto n = static_cast<std::size_t>(X.rows());
    const auto m = static_cast<std::size_t>(X.cols());
    if (false_row >= n) {
        fail(ErrorKind::invalid_input, "false row index out of range");
    }
    if (k < m || k > n) {
        fail(ErrorKind::invalid_plan, "resample size k must satisfy m <= k <= n");
    }
    const RowVectorXd x = X.row(static_cast<Eigen::Index>(false_row));

    // Contribution of one k-subset; nullopt when its design is singular.
    auto contribution = [&](std::span<const std::size_t> subset) -> std::optional<VectorXd> {
        std::vector<std::size_t> truth;
        truth.reserve(k);
        bool holds_false = false;
        for (auto i : subset) {
            if (i == false_row) {
                holds_false = true;
            } else {
                truth.push_back(i);
            }
        }
        const MatrixXd Xu = select_rows(X, truth);
        if (!holds_false) {
            if (!full_rank(Xu)) {
                return std::nullopt;
            }
            return VectorXd(VectorXd::Zero(static_cast<Eigen::Index>(m)));
        }
        return leave_in_bias(Xu, x, shift);
    };

    ResamplingBias out;
    out.value = VectorXd::Zero(static_cast<Eigen::Index>(m));
    if (binomial(n, k) <= static_cast<double>(enumeration_cap)) {
        for_each_combination(n, k, [&](std::span<const std::size_t> subset) {
            if (auto c = contribution(subset)) {
                out.value += *c;
                ++out.subsets_used;
            } else {
                ++out.singular_skipped;
            }
        });
        if (out.subsets_used == 0) {
            fail(ErrorKind::degenerate_dataset, "every k-row design is singular");
        }
        out.value /= static_cast<double>(out.subsets_used);
        return out;
    }

    out.exhaustive = false;
    VectorXd sum_sq = VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t draw = 0; draw < enumeration_cap; ++draw) {
        auto rng = CounterRng::stream(seed, StreamDomain::regression, draw);
        auto subset = draw_subsample(n, k, false, rng);
        std::sort(subset.begin(), subset.end());
        if (auto c = contribution(subset)) {
            out.value += *c;
            sum_sq += c->cwiseProduct(*c);
            ++out.subsets_used;
        } else {
            ++out.singular_skipped;
        }
    }
    if (out.subsets_used < 2) {
        fail(ErrorKind::degenerate_dataset, "too few nonsingular sampled designs");
    }
    const double used = static_cast<double>(out.subsets_used);
    out.value /= used;
    const VectorXd var = (sum_sq / used - out.value.cwiseProduct(out.value)) * (used / (used - 1.0));
    out.standard_error = (var.cwiseMax(0.0) / used).cwiseSqrt();
    return out;
}

ResamplingBias disturbed_resampling_expectation(const MatrixXd& X, const DisturbanceSpec& spec,
                                                std::size_t k, std::size_t enumeration_cap,
                                                std::uint64_t seed)
{
    auto bias = resampling_bias(X, spec.false_row, spec.shift(X), k, enumeration_cap, seed);
    bias.value = spec.beta_true - bias.value;
    return bias;
}

DataModeBias data_mode_bias(const RegressionDataset& data, std::size_t false_row,
                            std::span<const std::size_t> ks, std::size_t enumeration_cap,
                            std::uint64_t seed)
{
    if (false_row >= data.observations()) {
        fail(ErrorKind::invalid_input, "false row index out of range");
    }
    DataModeBias out;
    out.beta_clean = lse_fit(data.without_row(false_row));
    const auto f = static_cast<Eigen::Index>(false_row);
    out.shift = data.X().row(f).dot(out.beta_clean) - data.Y()(f);
    out.classical = classical_bias(data.X(), false_row, out.shift);
    for (std::size_t k : ks) {
        out.ks.push_back(k);
        out.resampling.push_back(resampling_bias(data.X(), false_row, out.shift, k, enumeration_cap, seed));
    }
    return out;
}

MedianBias data_mode_median_bias(const RegressionDataset& data, std::size_t false_row,
                                 std::size_t predict_row, std::span<const std::size_t> ks,
                                 std::size_t enumeration_cap)
{
    if (false_row >= data.observations() || predict_row >= data.observations()) {
        fail(ErrorKind::invalid_input, "row index out of range");
    }
    const RowVectorXd x = data.X().row(static_cast<Eigen::Index>(predict_row));
    MedianBias out;
    out.clean_prediction = predict(x, lse_fit(data.without_row(false_row)));
    out.lse = std::abs(predict(x, lse_fit(data)) - out.clean_prediction);
    for (std::size_t k : ks) {
        if (binomial(data.observations(), k) > static_cast<double>(enumeration_cap)) {
            fail(ErrorKind::enumeration_cap_exceeded, "median bias needs exhaustive enumeration");
        }
        const ResamplePlan plan{k, 1, false, 0};
        const auto fit = resampling_fit(data, plan, {ResampleMode::enumerate, enumeration_cap});
        const auto med = median_of_predictions(x, fit.estimates, true);
        out.ks.push_back(k);
        out.median.push_back(std::abs(med.value - out.clean_prediction));
    }
    return out;
}

}  // namespace resample::regression
