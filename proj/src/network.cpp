#include "deepcoda/network.hpp"

#include <algorithm>
#include <cmath>

#include "deepcoda/error.hpp"

namespace deepcoda {

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void check_labels(std::span<const int> y, std::size_t n) {
  if (y.size() != n) throw InvalidInput("labels: expected " + std::to_string(n) + " labels, got " + std::to_string(y.size()));
  for (int v : y) {
    if (v != 0 && v != 1) throw InvalidInput("labels must be 0 or 1");
  }
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Scratch space for one sample's forward pass; hidden pre-activations are
// kept for the backward pass.
struct Workspace {
  std::vector<double> z, a, h, w;
  double s = 0.0;
  double yhat = 0.0;

  explicit Workspace(const DeepCodaParams& p)
      : z(p.n_bottlenecks()), a(p.n_hidden()), h(p.n_hidden()), w(p.n_bottlenecks()) {}
};

void run_forward(const DeepCodaParams& p, std::span<const double> log_x, Workspace& ws) {
  const std::size_t d_count = p.n_features();
  const std::size_t b_count = p.n_bottlenecks();
  const std::size_t h_count = p.n_hidden();

  for (std::size_t b = 0; b < b_count; ++b) ws.z[b] = p.beta0[b];
  for (std::size_t d = 0; d < d_count; ++d) {
    const double lx = log_x[d];
    const auto beta_row = p.beta.row(d);
    for (std::size_t b = 0; b < b_count; ++b) ws.z[b] += beta_row[b] * lx;
  }

  if (p.head == Head::self_explain) {
    for (std::size_t k = 0; k < h_count; ++k) ws.a[k] = p.mlp_b1[k];
    for (std::size_t b = 0; b < b_count; ++b) {
      const auto w1_row = p.mlp_w1.row(b);
      for (std::size_t k = 0; k < h_count; ++k) ws.a[k] += ws.z[b] * w1_row[k];
    }
    for (std::size_t k = 0; k < h_count; ++k) ws.h[k] = ws.a[k] > 0.0 ? ws.a[k] : 0.0;
    for (std::size_t b = 0; b < b_count; ++b) ws.w[b] = p.mlp_b2[b];
    for (std::size_t k = 0; k < h_count; ++k) {
      const auto w2_row = p.mlp_w2.row(k);
      for (std::size_t b = 0; b < b_count; ++b) ws.w[b] += ws.h[k] * w2_row[b];
    }
    ws.s = 0.0;
    for (std::size_t b = 0; b < b_count; ++b) ws.s += ws.w[b] * ws.z[b];
  } else {
    ws.s = p.linear_v0;
    for (std::size_t b = 0; b < b_count; ++b) {
      ws.w[b] = p.linear_v[b];
      ws.s += p.linear_v[b] * ws.z[b];
    }
  }
  if (!std::isfinite(ws.s)) throw NumericError("forward: non-finite logit");
  ws.yhat = logistic(ws.s);
}

void check_input(const DeepCodaParams& p, std::span<const double> x) {
  if (x.size() != p.n_features()) {
    throw InvalidInput("forward: expected " + std::to_string(p.n_features()) + " parts, got " + std::to_string(x.size()));
  }
}

}  // namespace

std::string_view to_string(Head head) noexcept {
  return head == Head::self_explain ? "self_explain" : "linear";
}

Head parse_head(std::string_view text) {
  if (text == "self_explain") return Head::self_explain;
  if (text == "linear") return Head::linear;
  throw InvalidInput("unknown head '" + std::string(text) + "' (expected self_explain or linear)");
}

DeepCodaParams DeepCodaParams::zeros(std::size_t n_features, std::size_t n_bottlenecks, std::size_t hidden,
                                     Head head) {
  if (n_features == 0 || n_bottlenecks == 0 || hidden == 0) {
    throw InvalidInput("DeepCodaParams: dimensions must be positive");
  }
  DeepCodaParams p;
  p.head = head;
  p.beta = Matrix(n_features, n_bottlenecks);
  p.beta0.assign(n_bottlenecks, 0.0);
  p.mlp_w1 = Matrix(n_bottlenecks, hidden);
  p.mlp_b1.assign(hidden, 0.0);
  p.mlp_w2 = Matrix(hidden, n_bottlenecks);
  p.mlp_b2.assign(n_bottlenecks, 0.0);
  p.linear_v.assign(n_bottlenecks, 0.0);
  p.linear_v0 = 0.0;
  return p;
}

void DeepCodaParams::validate() const {
  const std::size_t d = n_features(), b = n_bottlenecks(), h = n_hidden();
  if (d == 0 || b == 0 || h == 0) throw InvalidInput("DeepCodaParams: empty dimension");
  if (beta0.size() != b || mlp_w1.rows() != b || mlp_w1.cols() != h || mlp_w2.rows() != h ||
      mlp_w2.cols() != b || mlp_b2.size() != b || linear_v.size() != b) {
    throw InvalidInput("DeepCodaParams: inconsistent tensor shapes");
  }
  if (!all_finite(flatten())) throw InvalidInput("DeepCodaParams: non-finite parameter");
}

std::vector<double> DeepCodaParams::constraint_residuals() const {
  std::vector<double> r(n_bottlenecks(), 0.0);
  for (std::size_t d = 0; d < n_features(); ++d) {
    for (std::size_t b = 0; b < n_bottlenecks(); ++b) r[b] += beta(d, b);
  }
  return r;
}

std::size_t DeepCodaParams::parameter_count() const noexcept {
  return beta.size() + beta0.size() + mlp_w1.size() + mlp_b1.size() + mlp_w2.size() + mlp_b2.size() +
         linear_v.size() + 1;
}

std::vector<double> DeepCodaParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(parameter_count());
  auto append = [&flat](const std::vector<double>& v) { flat.insert(flat.end(), v.begin(), v.end()); };
  append(beta.data());
  append(beta0);
  append(mlp_w1.data());
  append(mlp_b1);
  append(mlp_w2.data());
  append(mlp_b2);
  append(linear_v);
  flat.push_back(linear_v0);
  return flat;
}

void DeepCodaParams::assign_flat(std::span<const double> flat) {
  if (flat.size() != parameter_count()) throw InvalidInput("DeepCodaParams: flat vector has wrong length");
  std::size_t pos = 0;
  auto take = [&](std::vector<double>& v) {
    std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
              flat.begin() + static_cast<std::ptrdiff_t>(pos + v.size()), v.begin());
    pos += v.size();
  };
  take(beta.data());
  take(beta0);
  take(mlp_w1.data());
  take(mlp_b1);
  take(mlp_w2.data());
  take(mlp_b2);
  take(linear_v);
  linear_v0 = flat[pos];
}

double logistic(double s) noexcept {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

Matrix log_inputs(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double v = x.data()[k];
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("inputs must be finite and strictly positive");
    out.data()[k] = std::log(v);
  }
  return out;
}

ForwardTrace forward_from_logs(const DeepCodaParams& p, std::span<const double> log_x) {
  check_input(p, log_x);
  Workspace ws(p);
  run_forward(p, log_x, ws);
  return ForwardTrace{std::move(ws.z), std::move(ws.w), ws.s, ws.yhat};
}

ForwardTrace forward(const DeepCodaParams& p, std::span<const double> x) {
  check_input(p, x);
  std::vector<double> log_x(x.size());
  for (std::size_t d = 0; d < x.size(); ++d) {
    if (!(x[d] > 0.0) || !std::isfinite(x[d])) throw InvalidInput("forward: inputs must be finite and > 0");
    log_x[d] = std::log(x[d]);
  }
  return forward_from_logs(p, log_x);
}

std::vector<double> predict_proba(const DeepCodaParams& p, const Matrix& x) {
  if (x.cols() != p.n_features()) throw InvalidInput("predict_proba: column count does not match model");
  const Matrix log_x = log_inputs(x);
  Workspace ws(p);
  std::vector<double> out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    run_forward(p, log_x.row(i), ws);
    out[i] = ws.yhat;
  }
  return out;
}

double loss(const DeepCodaParams& p, const Matrix& x, std::span<const int> y, Penalty penalty) {
  if (x.cols() != p.n_features()) throw InvalidInput("loss: column count does not match model");
  check_labels(y, x.rows());
  const Matrix log_x = log_inputs(x);
  Workspace ws(p);
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    run_forward(p, log_x.row(i), ws);
    const double r = ws.yhat - y[i];
    total += r * r;
  }
  const auto residuals = p.constraint_residuals();
  for (std::size_t b = 0; b < p.n_bottlenecks(); ++b) {
    double l1 = 0.0;
    for (std::size_t d = 0; d < p.n_features(); ++d) l1 += std::abs(p.beta(d, b));
    total += penalty.lambda_c * residuals[b] * residuals[b] + penalty.lambda_s * l1;
  }
  return total;
}

LossAndGradient gradients(const DeepCodaParams& p, const Matrix& x, std::span<const int> y, Penalty penalty) {
  if (x.cols() != p.n_features()) throw InvalidInput("gradients: column count does not match model");
  return gradients_from_logs(p, log_inputs(x), y, penalty);
}

LossAndGradient gradients_from_logs(const DeepCodaParams& p, const Matrix& log_x, std::span<const int> y,
                                    Penalty penalty) {
  if (log_x.cols() != p.n_features()) throw InvalidInput("gradients: column count does not match model");
  check_labels(y, log_x.rows());

  const std::size_t d_count = p.n_features();
  const std::size_t b_count = p.n_bottlenecks();
  const std::size_t h_count = p.n_hidden();

  LossAndGradient out;
  out.gradient = DeepCodaParams::zeros(d_count, b_count, h_count, p.head);
  DeepCodaParams& g = out.gradient;

  Workspace ws(p);
  std::vector<double> dz(b_count), dh(h_count);

  for (std::size_t i = 0; i < log_x.rows(); ++i) {
    const auto lx = log_x.row(i);
    run_forward(p, lx, ws);
    const double r = ws.yhat - y[i];
    out.loss += r * r;
    const double ds = 2.0 * r * ws.yhat * (1.0 - ws.yhat);

    if (p.head == Head::self_explain) {
      // s = sum_b w_b z_b, w = W2^T relu(W1^T z + b1) + b2
      for (std::size_t b = 0; b < b_count; ++b) {
        const double dw = ds * ws.z[b];
        g.mlp_b2[b] += dw;
        dz[b] = ds * ws.w[b];
      }
      for (std::size_t k = 0; k < h_count; ++k) {
        const auto w2_row = p.mlp_w2.row(k);
        auto g_w2_row = g.mlp_w2.row(k);
        double acc = 0.0;
        for (std::size_t b = 0; b < b_count; ++b) {
          const double dw = ds * ws.z[b];
          g_w2_row[b] += dw * ws.h[k];
          acc += dw * w2_row[b];
        }
        dh[k] = ws.a[k] > 0.0 ? acc : 0.0;
        g.mlp_b1[k] += dh[k];
      }
      for (std::size_t b = 0; b < b_count; ++b) {
        const auto w1_row = p.mlp_w1.row(b);
        auto g_w1_row = g.mlp_w1.row(b);
        for (std::size_t k = 0; k < h_count; ++k) {
          g_w1_row[k] += ws.z[b] * dh[k];
          dz[b] += w1_row[k] * dh[k];
        }
      }
    } else {
      g.linear_v0 += ds;
      for (std::size_t b = 0; b < b_count; ++b) {
        g.linear_v[b] += ds * ws.z[b];
        dz[b] = ds * p.linear_v[b];
      }
    }

    for (std::size_t b = 0; b < b_count; ++b) g.beta0[b] += dz[b];
    for (std::size_t d = 0; d < d_count; ++d) {
      auto g_beta_row = g.beta.row(d);
      for (std::size_t b = 0; b < b_count; ++b) g_beta_row[b] += dz[b] * lx[d];
    }
  }

  const auto residuals = p.constraint_residuals();
  for (std::size_t b = 0; b < b_count; ++b) {
    double l1 = 0.0;
    for (std::size_t d = 0; d < d_count; ++d) {
      const double v = p.beta(d, b);
      l1 += std::abs(v);
      g.beta(d, b) += 2.0 * penalty.lambda_c * residuals[b] + penalty.lambda_s * sign(v);
    }
    out.loss += penalty.lambda_c * residuals[b] * residuals[b] + penalty.lambda_s * l1;
  }
  return out;
}

}  // namespace deepcoda
