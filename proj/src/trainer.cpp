#include "deepcoda/trainer.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "deepcoda/error.hpp"
#include "deepcoda/model_io.hpp"
#include "deepcoda/rng.hpp"
#include "deepcoda/text.hpp"

namespace deepcoda {

void TrainConfig::validate() const {
  if (n_bottlenecks == 0) throw InvalidInput("config: n_bottlenecks must be >= 1");
  if (epochs == 0) throw InvalidInput("config: epochs must be >= 1");
  if (!(lambda_c >= 0.0) || !(lambda_s >= 0.0)) throw InvalidInput("config: penalties must be >= 0");
  if (!(learning_rate > 0.0)) throw InvalidInput("config: learning_rate must be > 0");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw InvalidInput("config: adam betas must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw InvalidInput("config: adam_eps must be > 0");
}

TrainConfig parse_train_config(std::istream& in) {
  TrainConfig cfg;
  for (const auto& [key, value] : parse_key_values(in, "config")) {
    if (key == "n_bottlenecks") {
      cfg.n_bottlenecks = parse_size(value, key);
    } else if (key == "lambda_c") {
      cfg.lambda_c = parse_double(value, key);
    } else if (key == "lambda_s") {
      cfg.lambda_s = parse_double(value, key);
    } else if (key == "learning_rate") {
      cfg.learning_rate = parse_double(value, key);
    } else if (key == "epochs") {
      cfg.epochs = parse_size(value, key);
    } else if (key == "seed") {
      cfg.seed = parse_size(value, key);
    } else if (key == "head") {
      cfg.head = parse_head(value);
    } else if (key == "adam_beta1") {
      cfg.adam_beta1 = parse_double(value, key);
    } else if (key == "adam_beta2") {
      cfg.adam_beta2 = parse_double(value, key);
    } else if (key == "adam_eps") {
      cfg.adam_eps = parse_double(value, key);
    } else {
      throw InvalidInput("config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

void write_train_config(std::ostream& out, const TrainConfig& cfg) {
  out << "n_bottlenecks = " << cfg.n_bottlenecks << '\n'
      << "lambda_c = " << format_double(cfg.lambda_c) << '\n'
      << "lambda_s = " << format_double(cfg.lambda_s) << '\n'
      << "learning_rate = " << format_double(cfg.learning_rate) << '\n'
      << "epochs = " << cfg.epochs << '\n'
      << "seed = " << cfg.seed << '\n'
      << "head = " << to_string(cfg.head) << '\n'
      << "adam_beta1 = " << format_double(cfg.adam_beta1) << '\n'
      << "adam_beta2 = " << format_double(cfg.adam_beta2) << '\n'
      << "adam_eps = " << format_double(cfg.adam_eps) << '\n';
}

DeepCodaParams init_params(std::size_t n_features, std::size_t n_bottlenecks, std::size_t hidden, std::uint64_t seed,
                           Head head) {
  DeepCodaParams p = DeepCodaParams::zeros(n_features, n_bottlenecks, hidden, head);
  // One stream per tensor so adding a tensor never shifts the others.
  auto fill = [seed](std::vector<double>& values, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    for (double& v : values) v = rng.uniform(-0.1, 0.1);
  };
  fill(p.beta.data(), 1);
  fill(p.mlp_w1.data(), 2);
  fill(p.mlp_w2.data(), 3);
  fill(p.linear_v, 4);
  return p;
}

AdamState::AdamState(std::size_t size, double learning_rate, double beta1, double beta2, double eps)
    : m_(size, 0.0), v_(size, 0.0), lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void AdamState::step(std::span<double> params, std::span<const double> grad) {
  ++t_;
  beta1_t_ *= beta1_;
  beta2_t_ *= beta2_;
  const double c1 = 1.0 - beta1_t_;
  const double c2 = 1.0 - beta2_t_;
  for (std::size_t k = 0; k < params.size(); ++k) {
    m_[k] = beta1_ * m_[k] + (1.0 - beta1_) * grad[k];
    v_[k] = beta2_ * v_[k] + (1.0 - beta2_) * grad[k] * grad[k];
    const double m_hat = m_[k] / c1;
    const double v_hat = v_[k] / c2;
    params[k] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
  }
}

TrainReport train(const Matrix& x, std::span<const int> y, const TrainConfig& cfg) {
  cfg.validate();
  if (x.rows() < 2) throw InvalidInput("train: need at least 2 samples");
  if (y.size() != x.rows()) throw InvalidInput("train: label count does not match sample count");
  bool has_case = false, has_control = false;
  for (int v : y) {
    has_case = has_case || v == 1;
    has_control = has_control || v == 0;
  }
  if (!has_case || !has_control) throw InvalidInput("train: both classes must be present");

  const Matrix log_x = log_inputs(x);
  const Penalty penalty{cfg.lambda_c, cfg.lambda_s};

  TrainReport report;
  report.params = init_params(x.cols(), cfg.n_bottlenecks, kDefaultHiddenUnits, cfg.seed, cfg.head);
  report.loss_history.reserve(cfg.epochs);

  std::vector<double> flat = report.params.flatten();
  AdamState adam(flat.size(), cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    LossAndGradient lg;
    try {
      lg = gradients_from_logs(report.params, log_x, y, penalty);
    } catch (const NumericError&) {
      throw TrainingDiverged(epoch);
    }
    if (!std::isfinite(lg.loss)) throw TrainingDiverged(epoch);
    report.loss_history.push_back(lg.loss);

    const std::vector<double> grad = lg.gradient.flatten();
    adam.step(flat, grad);
    report.params.assign_flat(flat);
  }
  report.final_constraint_residuals = report.params.constraint_residuals();
  return report;
}

}  // namespace deepcoda
