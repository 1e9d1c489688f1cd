#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "resample/regression/regression.hpp"

namespace resample::regression {

/// One false observation: row `false_row` follows beta_false, every other row
/// follows beta_true; noise is iid with variance noise_variance.
struct DisturbanceSpec {
    std::size_t false_row = 0;
    VectorXd beta_true;
    VectorXd beta_false;
    double noise_variance = 0.0;

    /// x (beta_true - beta_false): the false row's expected excess over the
    /// true model. Both bias formulas depend on the betas only through it.
    double shift(const MatrixXd& X) const;
    /// E[Y] under the disturbed model.
    VectorXd expected_response(const MatrixXd& X) const;
    void validate(const MatrixXd& X) const;
};

/// beta - E beta_hat for the classical estimator with one false row whose
/// expected excess is `shift`:
///   (X_t'X_t)^-1 x' shift / (1 + x (X_t'X_t)^-1 x').
VectorXd classical_bias(const MatrixXd& X, std::size_t false_row, double shift);

/// E beta_hat under the disturbed model.
VectorXd disturbed_classical_expectation(const MatrixXd& X, const DisturbanceSpec& spec);

struct ResamplingBias {
    /// beta - E beta* (bias) and, in disturbed_resampling_expectation, E beta*.
    VectorXd value;
    /// Present when the subset average was sampled rather than enumerated.
    std::optional<VectorXd> standard_error;
    std::size_t subsets_used = 0;
    std::size_t singular_skipped = 0;
    bool exhaustive = true;
};

/// beta - E beta* for the resampling estimator over k-subsets. Subsets holding
/// the false row contribute the leave-in bias of their k - 1 true rows u:
///   (X(u)'X(u))^-1 x' shift / (1 + x (X(u)'X(u))^-1 x'),
/// falling back to (X_J'X_J)^-1 x' shift when X(u)'X(u) is singular but the
/// whole k-row design is not (k = m). Subsets without it contribute zero.
/// Singular k-row designs are skipped, matching resampling_fit's
/// enumeration, so the average runs over the same subsets the estimator uses.
/// Beyond the enumeration cap the average is sampled from `seed`.
ResamplingBias resampling_bias(const MatrixXd& X, std::size_t false_row, double shift,
                               std::size_t k, std::size_t enumeration_cap = kEnumerationCap,
                               std::uint64_t seed = 0);

/// E beta* under the disturbed model (value = beta_true - bias).
ResamplingBias disturbed_resampling_expectation(const MatrixXd& X, const DisturbanceSpec& spec,
                                                std::size_t k,
                                                std::size_t enumeration_cap = kEnumerationCap,
                                                std::uint64_t seed = 0);

/// Bias table for observed data with a suspected false row: beta is taken as
/// the least-squares fit without that row, and the shift as
/// x_f beta_clean - y_f.
struct DataModeBias {
    VectorXd beta_clean;
    double shift = 0.0;
    VectorXd classical;
    std::vector<std::size_t> ks;
    std::vector<ResamplingBias> resampling;
};

DataModeBias data_mode_bias(const RegressionDataset& data, std::size_t false_row,
                            std::span<const std::size_t> ks,
                            std::size_t enumeration_cap = kEnumerationCap, std::uint64_t seed = 0);

/// Absolute prediction error at row `predict_row` against the clean fit, for
/// the full least-squares fit and for the resampling median predictor over
/// every k-subset (lower median when the subset count is even).
struct MedianBias {
    double clean_prediction = 0.0;
    double lse = 0.0;
    std::vector<std::size_t> ks;
    std::vector<double> median;
};

MedianBias data_mode_median_bias(const RegressionDataset& data, std::size_t false_row,
                                 std::size_t predict_row, std::span<const std::size_t> ks,
                                 std::size_t enumeration_cap = kEnumerationCap);

}  // namespace resample::regression
