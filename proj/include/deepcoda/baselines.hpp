#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "deepcoda/composition.hpp"
#include "deepcoda/matrix.hpp"

namespace deepcoda {

enum class Transform { none, clr };

std::string_view to_string(Transform t) noexcept;
Transform parse_transform(std::string_view text);

// none: values unchanged; clr: row-wise centered log-ratio.
Matrix apply_transform(const Matrix& x, Transform t);
Matrix apply_transform(const CompositionMatrix& x, Transform t);

struct LassoModel {
  std::vector<double> coef;  // on the scale of the columns passed to the fit
  double intercept = 0.0;
  double lambda = 0.0;
  Transform transform = Transform::none;

  // intercept + coef . x for each row of an already transformed matrix.
  std::vector<double> decision_function(const Matrix& x) const;
};

struct LassoOptions {
  // Center and scale columns to unit variance before fitting and map the
  // coefficients back afterwards (the penalty acts on standardized
  // coefficients). Zero-variance columns get coefficient 0.
  bool standardize = true;
  double tolerance = 1e-8;          // relative objective change
  // Also required before stopping: the proximal gradient mapping is this
  // small in every coordinate.
  double stationarity_tolerance = 1e-9;
  std::size_t max_iterations = 10000;
};

// (1/N) sum_i logloss(y_i, intercept + coef . x_i) + lambda * sum_j |coef_j|
double lasso_objective(const Matrix& x, std::span<const int> y, std::span<const double> coef, double intercept,
                       double lambda);

// sign(u) * max(|u| - threshold, 0)
double soft_threshold(double u, double threshold) noexcept;

// L1-penalized logistic regression by accelerated proximal gradient with
// backtracking; the intercept is not penalized.
LassoModel lasso_logistic_fit(const Matrix& x, std::span<const int> y, double lambda, const LassoOptions& opts = {});

// 8 log-spaced values from 1e-4 to 1.
std::vector<double> default_lambda_grid();

struct CvOptions {
  std::size_t n_folds = 5;
  std::vector<double> lambda_grid = default_lambda_grid();
  std::uint64_t seed = 0;
  LassoOptions lasso;
};

// Stratified fold assignment: fold index per sample. Throws
// StratificationError when a class has fewer members than folds.
std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t n_folds, std::uint64_t seed);

// Grid value with the best mean held-out AUC; ties go to the larger lambda.
double cv_select_lambda(const Matrix& x, std::span<const int> y, const CvOptions& opts);

// Transform, select lambda by cross-validation, refit on all rows.
LassoModel fit_lasso_baseline(const Matrix& x, std::span<const int> y, Transform transform, const CvOptions& opts);

// |coef| rescaled to [0, 1] by min-max.
std::vector<double> minmax_scaled_magnitudes(std::span<const double> coef);

}  // namespace deepcoda
