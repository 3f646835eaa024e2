#include "deepcoda/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "deepcoda/error.hpp"
#include "deepcoda/evaluation.hpp"
#include "deepcoda/rng.hpp"

namespace deepcoda {

namespace {

void check_binary(std::span<const int> y, std::size_t n) {
  if (y.size() != n) throw InvalidInput("lasso: label count does not match sample count");
  bool pos = false, neg = false;
  for (int v : y) {
    if (v != 0 && v != 1) throw InvalidInput("lasso: labels must be 0 or 1");
    pos = pos || v == 1;
    neg = neg || v == 0;
  }
  if (!pos || !neg) throw InvalidInput("lasso: both classes must be present");
}

// log(1 + exp(eta)) - y * eta, stable for large |eta|.
double logloss(double eta, int y) {
  const double softplus = std::max(eta, 0.0) + std::log1p(std::exp(-std::abs(eta)));
  return softplus - y * eta;
}

// Design matrix in the coordinates the optimizer works in.
struct Design {
  Matrix z;
  std::vector<std::size_t> active;  // original column of each z column
  std::vector<double> center, scale;
};

Design make_design(const Matrix& x, bool standardize) {
  Design d;
  const std::size_t n = x.rows();
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double mean = 0.0, sd = 1.0;
    if (standardize) {
      for (std::size_t i = 0; i < n; ++i) mean += x(i, j);
      mean /= static_cast<double>(n);
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) ss += (x(i, j) - mean) * (x(i, j) - mean);
      sd = std::sqrt(ss / static_cast<double>(n));
      if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) continue;
    }
    d.active.push_back(j);
    d.center.push_back(mean);
    d.scale.push_back(sd);
  }
  d.z = Matrix(n, d.active.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d.active.size(); ++k) d.z(i, k) = (x(i, d.active[k]) - d.center[k]) / d.scale[k];
  }
  return d;
}

// theta = [intercept, coef...]
struct Smooth {
  const Matrix& z;
  std::span<const int> y;
  std::vector<double> eta;

  double value(std::span<const double> theta) {
    const std::size_t n = z.rows();
    eta.resize(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double e = theta[0];
      const auto row = z.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) e += theta[j + 1] * row[j];
      eta[i] = e;
      total += logloss(e, y[i]);
    }
    return total / static_cast<double>(n);
  }

  // Gradient at the point of the last value() call.
  void gradient(std::vector<double>& g) const {
    const std::size_t n = z.rows();
    std::fill(g.begin(), g.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = logistic_residual(eta[i], y[i]);
      g[0] += r;
      const auto row = z.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) g[j + 1] += r * row[j];
    }
    for (double& v : g) v /= static_cast<double>(n);
  }

  static double logistic_residual(double eta, int y) {
    const double p = eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta)) : std::exp(eta) / (1.0 + std::exp(eta));
    return p - y;
  }
};

double l1(std::span<const double> theta) {
  double s = 0.0;
  for (std::size_t j = 1; j < theta.size(); ++j) s += std::abs(theta[j]);
  return s;
}

}  // namespace

std::string_view to_string(Transform t) noexcept { return t == Transform::none ? "none" : "clr"; }

Transform parse_transform(std::string_view text) {
  if (text == "none") return Transform::none;
  if (text == "clr") return Transform::clr;
  throw InvalidInput("unknown transform '" + std::string(text) + "' (expected none or clr)");
}

Matrix apply_transform(const Matrix& x, Transform t) {
  return t == Transform::none ? x : clr_rows(x);
}

Matrix apply_transform(const CompositionMatrix& x, Transform t) { return apply_transform(x.values, t); }

std::vector<double> LassoModel::decision_function(const Matrix& x) const {
  if (x.cols() != coef.size()) throw InvalidInput("lasso: column count does not match model");
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double e = intercept;
    const auto row = x.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) e += coef[j] * row[j];
    out[i] = e;
  }
  return out;
}

double soft_threshold(double u, double threshold) noexcept {
  if (u > threshold) return u - threshold;
  if (u < -threshold) return u + threshold;
  return 0.0;
}

double lasso_objective(const Matrix& x, std::span<const int> y, std::span<const double> coef, double intercept,
                       double lambda) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double e = intercept;
    const auto row = x.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) e += coef[j] * row[j];
    total += logloss(e, y[i]);
  }
  double penalty = 0.0;
  for (double c : coef) penalty += std::abs(c);
  return total / static_cast<double>(x.rows()) + lambda * penalty;
}

LassoModel lasso_logistic_fit(const Matrix& x, std::span<const int> y, double lambda, const LassoOptions& opts) {
  if (x.rows() < 2) throw InvalidInput("lasso: need at least 2 samples");
  check_binary(y, x.rows());
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("lasso: lambda must be finite and >= 0");
  for (double v : x.data()) {
    if (!std::isfinite(v)) throw InvalidInput("lasso: non-finite input");
  }

  const Design design = make_design(x, opts.standardize);
  const std::size_t p = design.active.size() + 1;
  Smooth f{design.z, y, {}};

  std::vector<double> theta(p, 0.0), prev(p, 0.0), point(p, 0.0), grad(p, 0.0), trial(p, 0.0);
  double lipschitz = 1.0;
  double momentum = 1.0;
  double objective = f.value(theta) + lambda * l1(theta);

  for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
    const double f_point = f.value(point);
    f.gradient(grad);
    lipschitz *= 0.9;
    double f_trial = 0.0;
    while (true) {
      const double step = 1.0 / lipschitz;
      trial[0] = point[0] - step * grad[0];
      for (std::size_t j = 1; j < p; ++j) trial[j] = soft_threshold(point[j] - step * grad[j], lambda * step);
      f_trial = f.value(trial);
      double linear = 0.0, quad = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        const double d = trial[j] - point[j];
        linear += grad[j] * d;
        quad += d * d;
      }
      if (f_trial <= f_point + linear + 0.5 * lipschitz * quad + 1e-15 * std::abs(f_point)) break;
      lipschitz *= 2.0;
    }
    const double trial_objective = f_trial + lambda * l1(trial);
    double mapping = 0.0;  // sup norm of the proximal gradient mapping
    for (std::size_t j = 0; j < p; ++j) mapping = std::max(mapping, lipschitz * std::abs(point[j] - trial[j]));

    if (trial_objective > objective) {
      // A plain proximal step cannot increase the objective beyond rounding.
      if (momentum == 1.0) break;
      // Momentum overshot: restart from the last iterate.
      point = theta;
      momentum = 1.0;
      continue;
    }
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double blend = (momentum - 1.0) / next_momentum;
    prev = theta;
    theta = trial;
    for (std::size_t j = 0; j < p; ++j) point[j] = theta[j] + blend * (theta[j] - prev[j]);
    momentum = next_momentum;

    const double change = std::abs(objective - trial_objective);
    objective = trial_objective;
    if (iter > 0 && change <= opts.tolerance * std::max(1.0, std::abs(objective)) &&
        mapping <= opts.stationarity_tolerance) {
      break;
    }
  }

  LassoModel model;
  model.lambda = lambda;
  model.coef.assign(x.cols(), 0.0);
  model.intercept = theta[0];
  for (std::size_t k = 0; k < design.active.size(); ++k) {
    const double c = theta[k + 1] / design.scale[k];
    model.coef[design.active[k]] = c;
    model.intercept -= c * design.center[k];
  }
  return model;
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid(8);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = std::pow(10.0, -4.0 + 4.0 * static_cast<double>(k) / 7.0);
  return grid;
}

std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw InvalidInput("cross-validation needs at least 2 folds");
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] == 1 ? pos : neg).push_back(i);
  if (pos.size() < n_folds || neg.size() < n_folds) {
    throw StratificationError("cross-validation: each class needs at least " + std::to_string(n_folds) +
                              " samples so every fold holds both classes");
  }
  CounterRng rng(seed, /*stream=*/0xf01d);
  shuffle<std::size_t>(pos, rng);
  shuffle<std::size_t>(neg, rng);
  std::vector<std::size_t> fold(y.size());
  for (std::size_t k = 0; k < pos.size(); ++k) fold[pos[k]] = k % n_folds;
  for (std::size_t k = 0; k < neg.size(); ++k) fold[neg[k]] = k % n_folds;
  return fold;
}

double cv_select_lambda(const Matrix& x, std::span<const int> y, const CvOptions& opts) {
  if (opts.lambda_grid.empty()) throw InvalidInput("cross-validation: lambda grid is empty");
  if (x.rows() < opts.n_folds) throw InvalidInput("cross-validation: fewer samples than folds");
  check_binary(y, x.rows());
  if (opts.lambda_grid.size() == 1) return opts.lambda_grid.front();

  const auto fold = stratified_folds(y, opts.n_folds, opts.seed);
  std::vector<double> mean_auc(opts.lambda_grid.size(), 0.0);
  for (std::size_t f = 0; f < opts.n_folds; ++f) {
    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t i = 0; i < fold.size(); ++i) (fold[i] == f ? test_idx : train_idx).push_back(i);
    const Matrix x_train = x.select_rows(train_idx);
    const Matrix x_test = x.select_rows(test_idx);
    std::vector<int> y_train, y_test;
    for (std::size_t i : train_idx) y_train.push_back(y[i]);
    for (std::size_t i : test_idx) y_test.push_back(y[i]);
    for (std::size_t k = 0; k < opts.lambda_grid.size(); ++k) {
      const auto model = lasso_logistic_fit(x_train, y_train, opts.lambda_grid[k], opts.lasso);
      mean_auc[k] += auc(model.decision_function(x_test), y_test) / static_cast<double>(opts.n_folds);
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < mean_auc.size(); ++k) {
    const bool better = mean_auc[k] > mean_auc[best];
    const bool tie_larger = mean_auc[k] == mean_auc[best] && opts.lambda_grid[k] > opts.lambda_grid[best];
    if (better || tie_larger) best = k;
  }
  return opts.lambda_grid[best];
}

LassoModel fit_lasso_baseline(const Matrix& x, std::span<const int> y, Transform transform, const CvOptions& opts) {
  const Matrix xt = apply_transform(x, transform);
  const double lambda = cv_select_lambda(xt, y, opts);
  LassoModel model = lasso_logistic_fit(xt, y, lambda, opts.lasso);
  model.transform = transform;
  return model;
}

std::vector<double> minmax_scaled_magnitudes(std::span<const double> coef) {
  std::vector<double> out(coef.size());
  if (coef.empty()) return out;
  double lo = std::abs(coef[0]), hi = lo;
  for (double c : coef) {
    lo = std::min(lo, std::abs(c));
    hi = std::max(hi, std::abs(c));
  }
  for (std::size_t j = 0; j < coef.size(); ++j) {
    out[j] = hi > lo ? (std::abs(coef[j]) - lo) / (hi - lo) : (hi > 0.0 ? 1.0 : 0.0);
  }
  return out;
}

}  // namespace deepcoda
