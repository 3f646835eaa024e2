#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "deepcoda/matrix.hpp"

namespace deepcoda {

// How the B log-contrasts are combined into the logit.
//   self_explain: s = w(z) . z, with w produced by a one-hidden-layer ReLU MLP
//   linear:       s = v0 + v . z, one global weight vector for all samples
enum class Head { self_explain, linear };

std::string_view to_string(Head head) noexcept;
Head parse_head(std::string_view text);

inline constexpr std::size_t kDefaultHiddenUnits = 16;

// Parameters of a DeepCoDA network with D input parts, B log-bottlenecks
// and H hidden units in the self-explanation MLP. Both head variants keep
// all tensors allocated; the inactive head's tensors are ignored.
struct DeepCodaParams {
  Head head = Head::self_explain;
  Matrix beta;                  // D x B, log-contrast powers
  std::vector<double> beta0;    // B, log-contrast intercepts
  Matrix mlp_w1;                // B x H
  std::vector<double> mlp_b1;   // H
  Matrix mlp_w2;                // H x B
  std::vector<double> mlp_b2;   // B
  std::vector<double> linear_v; // B
  double linear_v0 = 0.0;

  static DeepCodaParams zeros(std::size_t n_features, std::size_t n_bottlenecks,
                              std::size_t hidden = kDefaultHiddenUnits, Head head = Head::self_explain);

  std::size_t n_features() const noexcept { return beta.rows(); }
  std::size_t n_bottlenecks() const noexcept { return beta.cols(); }
  std::size_t n_hidden() const noexcept { return mlp_b1.size(); }

  // Throws InvalidInput on inconsistent shapes or non-finite values.
  void validate() const;

  // Sum of powers per bottleneck; zero for an exact log-contrast.
  std::vector<double> constraint_residuals() const;

  // Flat view in a fixed order: beta, beta0, mlp_w1, mlp_b1, mlp_w2, mlp_b2,
  // linear_v, linear_v0.
  std::vector<double> flatten() const;
  void assign_flat(std::span<const double> flat);
  std::size_t parameter_count() const noexcept;

  bool operator==(const DeepCodaParams&) const = default;
};

struct ForwardTrace {
  std::vector<double> z;  // log-contrast values
  std::vector<double> w;  // sample-specific weights (global v for the linear head)
  double s = 0.0;         // logit
  double yhat = 0.0;      // logistic(s)
};

// Numerically stable logistic function.
double logistic(double s) noexcept;

ForwardTrace forward(const DeepCodaParams& p, std::span<const double> x);

// Same as forward but takes ln(x) directly.
ForwardTrace forward_from_logs(const DeepCodaParams& p, std::span<const double> log_x);

// Element-wise natural log; throws InvalidInput on any entry <= 0.
Matrix log_inputs(const Matrix& x);

std::vector<double> predict_proba(const DeepCodaParams& p, const Matrix& x);

struct Penalty {
  double lambda_c = 1.0;  // weight of (sum_d beta_db)^2
  double lambda_s = 0.01; // weight of sum_d |beta_db|
};

// sum_i (yhat_i - y_i)^2 + sum_b lambda_c (sum_d beta_db)^2 + sum_b lambda_s sum_d |beta_db|
double loss(const DeepCodaParams& p, const Matrix& x, std::span<const int> y, Penalty penalty);

struct LossAndGradient {
  double loss = 0.0;
  DeepCodaParams gradient;  // same shapes as the parameters
};

// Analytic gradient of `loss`. Subgradient conventions: d|b|/db = 0 at
// b = 0, and the ReLU derivative is 0 at a pre-activation of exactly 0.
LossAndGradient gradients(const DeepCodaParams& p, const Matrix& x, std::span<const int> y, Penalty penalty);

// Same computation on pre-computed ln(x); used by the trainer.
LossAndGradient gradients_from_logs(const DeepCodaParams& p, const Matrix& log_x, std::span<const int> y,
                                    Penalty penalty);

}  // namespace deepcoda
