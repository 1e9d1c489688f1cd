#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "resample/core/resample.hpp"

namespace resample::regression {

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

/// Enumeration cap for exhaustive resampling: every C(n, k) at or below it is
/// walked subset by subset.
inline constexpr std::size_t kEnumerationCap = 200'000;

/// Design matrix X (n observations by m factors) and response Y.
/// Invariants: n > m, finite entries, X of full column rank.
class RegressionDataset {
public:
    RegressionDataset(MatrixXd design, VectorXd response);

    const MatrixXd& X() const noexcept { return design_; }
    const VectorXd& Y() const noexcept { return response_; }
    std::size_t observations() const noexcept { return static_cast<std::size_t>(design_.rows()); }
    std::size_t factors() const noexcept { return static_cast<std::size_t>(design_.cols()); }

    MatrixXd rows_of_X(std::span<const std::size_t> rows) const;
    VectorXd rows_of_Y(std::span<const std::size_t> rows) const;
    /// Copy without one observation (the "clean" data when that row is false).
    RegressionDataset without_row(std::size_t row) const;

private:
    MatrixXd design_;
    VectorXd response_;
};

/// Least squares via column-pivoting QR; nullopt when X is rank deficient.
std::optional<VectorXd> try_lse_fit(const MatrixXd& X, const VectorXd& Y);

/// Classical least-squares estimate. Throws singular-design when X is rank
/// deficient.
VectorXd lse_fit(const MatrixXd& X, const VectorXd& Y);
VectorXd lse_fit(const RegressionDataset& data);

double predict(const RowVectorXd& x, const VectorXd& beta);

enum class ResampleMode {
    /// plan.realizations uniform k-subsets; singular designs are redrawn.
    random,
    /// Every k-subset once when C(n, k) <= cap (singular ones skipped and
    /// counted); uniform random subsets beyond the cap.
    enumerate,
};

struct ResampleOptions {
    ResampleMode mode = ResampleMode::random;
    std::size_t enumeration_cap = kEnumerationCap;
};

struct RegressionResampleResult {
    std::vector<VectorXd> estimates;
    std::vector<std::vector<std::size_t>> index_sets;
    VectorXd mean;
    /// Redrawn designs (random mode) or skipped subsets (enumeration).
    std::size_t singular_count = 0;
    bool exhaustive = false;
};

/// Resampling estimator: average of the least-squares fits over resamples of
/// k rows drawn without replacement. Requires m <= k <= n.
RegressionResampleResult resampling_fit(const RegressionDataset& data, const ResamplePlan& plan,
                                        const ResampleOptions& options = {});

struct MedianPrediction {
    double value = 0.0;
    VectorXd beta;
    std::size_t realization = 0;
    std::vector<double> predictions;
};

/// Resampling median predictor: the middle order statistic of x_d . beta*(J(l))
/// over an odd number of realizations, together with the realization
/// estimate that produced it. Even counts are rejected unless
/// allow_lower_median is set, in which case the lower median is used.
MedianPrediction resampling_median_predict(const RegressionDataset& data, const RowVectorXd& x_d,
                                           const ResamplePlan& plan,
                                           const ResampleOptions& options = {},
                                           bool allow_lower_median = false);

/// Median selection over precomputed realization estimates.
MedianPrediction median_of_predictions(const RowVectorXd& x_d,
                                       std::span<const VectorXd> estimates,
                                       bool allow_lower_median = false);

/// Squared Mahalanobis distance of each row from the row centroid, with the
/// (n - 1)-divisor sample covariance. Sum equals m (n - 1).
VectorXd mahalanobis_distances(const MatrixXd& factors);

}  // namespace resample::regression
