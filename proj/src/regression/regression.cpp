#include "resample/regression/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "resample/core/combinatorics.hpp"
#include "resample/core/error.hpp"
#include "resample/core/rng.hpp"

namespace resample::regression {

RegressionDataset::RegressionDataset(MatrixXd design, VectorXd response)
    : design_(std::move(design)), response_(std::move(response))
{
    if (design_.rows() != response_.size()) {
        fail(ErrorKind::invalid_input, "X has " + std::to_string(design_.rows())
                                           + " rows but Y has " + std::to_string(response_.size()));
    }
    if (design_.cols() == 0 || design_.rows() <= design_.cols()) {
        fail(ErrorKind::invalid_input, "need more observations than factors (n > m)");
    }
    if (!design_.allFinite() || !response_.allFinite()) {
        fail(ErrorKind::invalid_input, "regression data must be finite");
    }
    Eigen::ColPivHouseholderQR<MatrixXd> qr(design_);
    if (qr.rank() < design_.cols()) {
        fail(ErrorKind::singular_design, "design matrix is not of full column rank");
    }
}

MatrixXd RegressionDataset::rows_of_X(std::span<const std::size_t> rows) const
{
    MatrixXd out(static_cast<Eigen::Index>(rows.size()), design_.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = design_.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

VectorXd RegressionDataset::rows_of_Y(std::span<const std::size_t> rows) const
{
    VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = response_(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

RegressionDataset RegressionDataset::without_row(std::size_t row) const
{
    if (row >= observations()) {
        fail(ErrorKind::invalid_input, "row index out of range");
    }
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < observations(); ++i) {
        if (i != row) {
            keep.push_back(i);
        }
    }
    return RegressionDataset(rows_of_X(keep), rows_of_Y(keep));
}

std::optional<VectorXd> try_lse_fit(const MatrixXd& X, const VectorXd& Y)
{
    Eigen::ColPivHouseholderQR<MatrixXd> qr(X);
    if (qr.rank() < X.cols()) {
        return std::nullopt;
    }
    return VectorXd(qr.solve(Y));
}

VectorXd lse_fit(const MatrixXd& X, const VectorXd& Y)
{
    auto beta = try_lse_fit(X, Y);
    if (!beta) {
        fail(ErrorKind::singular_design, "least squares on a rank-deficient design");
    }
    return *beta;
}

VectorXd lse_fit(const RegressionDataset& data) { return lse_fit(data.X(), data.Y()); }

double predict(const RowVectorXd& x, const VectorXd& beta)
{
    if (x.size() != beta.size()) {
        fail(ErrorKind::invalid_input, "predictor row has " + std::to_string(x.size())
                                           + " entries, parameter vector has "
                                           + std::to_string(beta.size()));
    }
    return x.dot(beta);
}

namespace {

void validate_resample(const RegressionDataset& data, const ResamplePlan& plan)
{
    if (plan.replacement) {
        fail(ErrorKind::invalid_plan, "regression resamples are drawn without replacement");
    }
    if (plan.resample_size < data.factors() || plan.resample_size > data.observations()) {
        fail(ErrorKind::invalid_plan, "resample size k must satisfy m <= k <= n");
    }
    plan.validate(data.observations());
}

VectorXd componentwise_mean(const std::vector<VectorXd>& estimates, Eigen::Index dim)
{
    // Column sums in a fixed order so the mean is reproducible bit for bit.
    VectorXd mean = VectorXd::Zero(dim);
    for (const auto& b : estimates) {
        mean += b;
    }
    return mean / static_cast<double>(estimates.size());
}

}  // namespace

RegressionResampleResult resampling_fit(const RegressionDataset& data, const ResamplePlan& plan,
                                        const ResampleOptions& options)
{
    validate_resample(data, plan);
    const std::size_t n = data.observations();
    const std::size_t k = plan.resample_size;
    RegressionResampleResult result;

    const double subsets = binomial(n, k);
    if (options.mode == ResampleMode::enumerate
        && subsets <= static_cast<double>(options.enumeration_cap)) {
        result.exhaustive = true;
        for_each_combination(n, k, [&](std::span<const std::size_t> idx) {
            auto beta = try_lse_fit(data.rows_of_X(idx), data.rows_of_Y(idx));
            if (!beta) {
                ++result.singular_count;
                return;
            }
            result.estimates.push_back(std::move(*beta));
            result.index_sets.emplace_back(idx.begin(), idx.end());
        });
        if (2 * result.singular_count > static_cast<std::size_t>(subsets)) {
            fail(ErrorKind::degenerate_dataset,
                 std::to_string(result.singular_count) + " of "
                     + std::to_string(static_cast<std::size_t>(subsets))
                     + " resample designs are singular");
        }
    } else {
        result.estimates.reserve(plan.realizations);
        for (std::size_t l = 0; l < plan.realizations; ++l) {
            auto rng = CounterRng::stream(plan.seed, StreamDomain::regression, l);
            while (true) {
                auto idx = draw_subsample(n, k, false, rng);
                std::sort(idx.begin(), idx.end());
                auto beta = try_lse_fit(data.rows_of_X(idx), data.rows_of_Y(idx));
                if (beta) {
                    result.estimates.push_back(std::move(*beta));
                    result.index_sets.push_back(std::move(idx));
                    break;
                }
                if (++result.singular_count > plan.realizations) {
                    fail(ErrorKind::degenerate_dataset,
                         "more than half of the drawn resample designs are singular");
                }
            }
        }
    }
    if (result.estimates.empty()) {
        fail(ErrorKind::degenerate_dataset, "no nonsingular resample design");
    }
    result.mean = componentwise_mean(result.estimates, static_cast<Eigen::Index>(data.factors()));
    return result;
}

MedianPrediction median_of_predictions(const RowVectorXd& x_d, std::span<const VectorXd> estimates,
                                       bool allow_lower_median)
{
    const std::size_t r = estimates.size();
    if (r == 0) {
        fail(ErrorKind::invalid_input, "no realization estimates");
    }
    if (r % 2 == 0 && !allow_lower_median) {
        fail(ErrorKind::invalid_plan, "median needs an odd number of realizations (r = 2s + 1), got "
                                          + std::to_string(r));
    }
    MedianPrediction out;
    out.predictions.reserve(r);
    for (const auto& b : estimates) {
        out.predictions.push_back(predict(x_d, b));
    }
    std::vector<std::size_t> order(r);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.predictions[a] < out.predictions[b];
    });
    const std::size_t middle = (r - 1) / 2;
    out.realization = order[middle];
    out.value = out.predictions[out.realization];
    out.beta = estimates[out.realization];
    return out;
}

MedianPrediction resampling_median_predict(const RegressionDataset& data, const RowVectorXd& x_d,
                                           const ResamplePlan& plan, const ResampleOptions& options,
                                           bool allow_lower_median)
{
    if (static_cast<std::size_t>(x_d.size()) != data.factors()) {
        fail(ErrorKind::invalid_input, "predictor row length does not match the factor count");
    }
    if (options.mode == ResampleMode::random && plan.realizations % 2 == 0 && !allow_lower_median) {
        fail(ErrorKind::invalid_plan, "median needs an odd number of realizations (r = 2s + 1), got "
                                          + std::to_string(plan.realizations));
    }
    auto fit = resampling_fit(data, plan, options);
    return median_of_predictions(x_d, fit.estimates, allow_lower_median);
}

VectorXd mahalanobis_distances(const MatrixXd& factors)
{
    const auto n = factors.rows();
    const auto m = factors.cols();
    if (n < 2 || m < 1) {
        fail(ErrorKind::screening_unavailable, "need at least two observations");
    }
    const RowVectorXd centre = factors.colwise().mean();
    const MatrixXd centred = factors.rowwise() - centre;
    Eigen::ColPivHouseholderQR<MatrixXd> rank_check(centred);
    if (rank_check.rank() < m) {
        fail(ErrorKind::screening_unavailable, "sample covariance of the factors is singular");
    }
    const MatrixXd covariance = (centred.transpose() * centred) / static_cast<double>(n - 1);
    Eigen::LDLT<MatrixXd> ldlt(covariance);
    if (ldlt.info() != Eigen::Success) {
        fail(ErrorKind::screening_unavailable, "sample covariance factorization failed");
    }
    const MatrixXd solved = ldlt.solve(centred.transpose());
    VectorXd distances(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        distances(i) = centred.row(i).dot(solved.col(i));
    }
    return distances;
}

}  // namespace resample::regression
