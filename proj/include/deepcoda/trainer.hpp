#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "deepcoda/matrix.hpp"
#include "deepcoda/network.hpp"

namespace deepcoda {

struct TrainConfig {
  std::size_t n_bottlenecks = 5;
  double lambda_c = 1.0;
  double lambda_s = 0.01;
  double learning_rate = 0.01;
  std::size_t epochs = 2000;
  std::uint64_t seed = 0;
  Head head = Head::self_explain;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;

  // Throws InvalidInput on non-positive sizes or rates.
  void validate() const;
};

// Flat `key = value` config; keys are the TrainConfig field names and
// unknown keys are rejected. Missing keys keep their defaults.
TrainConfig parse_train_config(std::istream& in);
void write_train_config(std::ostream& out, const TrainConfig& cfg);

struct TrainReport {
  std::vector<double> loss_history;              // loss before each epoch's update
  std::vector<double> final_constraint_residuals; // sum_d beta_db of the returned params
  DeepCodaParams params;
};

// beta, MLP weights and linear_v ~ U(-0.1, 0.1) from a CounterRng keyed by
// `seed`; all biases are zero.
DeepCodaParams init_params(std::size_t n_features, std::size_t n_bottlenecks, std::size_t hidden, std::uint64_t seed,
                           Head head = Head::self_explain);

// Full-batch Adam on `loss` for cfg.epochs steps. Deterministic in
// (x, y, cfg). Throws TrainingDiverged on a non-finite loss.
TrainReport train(const Matrix& x, std::span<const int> y, const TrainConfig& cfg);

// Plain Adam over a flat parameter vector.
class AdamState {
 public:
  AdamState(std::size_t size, double learning_rate, double beta1, double beta2, double eps);
  void step(std::span<double> params, std::span<const double> grad);
  std::size_t steps() const noexcept { return t_; }

 private:
  std::vector<double> m_, v_;
  double lr_, beta1_, beta2_, eps_;
  double beta1_t_ = 1.0, beta2_t_ = 1.0;
  std::size_t t_ = 0;
};

}  // namespace deepcoda
