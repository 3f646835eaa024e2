// Randomized invariant checks, 1000 cases per property unless noted.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "deepcoda/baselines.hpp"
#include "deepcoda/composition.hpp"
#include "deepcoda/evaluation.hpp"
#include "deepcoda/explain.hpp"
#include "deepcoda/network.hpp"
#include "oracles.hpp"

using namespace deepcoda;

namespace {

constexpr int kCases = 1000;

struct Gen {
  std::mt19937_64 engine;
  explicit Gen(std::uint64_t seed) : engine(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  std::size_t integer(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(engine);
  }
  std::vector<double> positive(std::size_t n) { return oracle::positive_vector(engine, n); }
  // Random powers that sum to exactly zero in floating point over `support`.
  std::vector<double> zero_sum(std::size_t n, std::span<const std::size_t> support) {
    std::vector<double> beta(n, 0.0);
    for (std::size_t k = 0; k + 1 < support.size(); ++k) beta[support[k]] = std::ldexp(std::round(uniform(-1, 1) * 1024), -10);
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < support.size(); ++k) s += beta[support[k]];
    beta[support.back()] = -s;
    return beta;
  }
};

CompositionMatrix single_row(const std::vector<double>& v, AbundanceKind kind) {
  CompositionMatrix m;
  m.values = Matrix(1, v.size());
  std::copy(v.begin(), v.end(), m.values.row(0).begin());
  m.kind = kind;
  return m;
}

}  // namespace

TEST_CASE("closure is scale invariant and idempotent") {
  Gen g(101);
  double worst = 0.0;
  for (int t = 0; t < kCases; ++t) {
    const auto v = g.positive(g.integer(2, 30));
    const double c = std::exp(g.uniform(-10, 10));
    std::vector<double> scaled(v);
    for (double& x : scaled) x *= c;
    const auto a = closure(v), b = closure(scaled), aa = closure(a);
    for (std::size_t j = 0; j < v.size(); ++j) worst = std::max({worst, std::abs(a[j] - b[j]), std::abs(a[j] - aa[j])});
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("clr rows sum to zero") {
  Gen g(102);
  double worst = 0.0;
  for (int t = 0; t < kCases; ++t) {
    const auto c = clr(g.positive(g.integer(2, 30)));
    worst = std::max(worst, std::abs(std::accumulate(c.begin(), c.end(), 0.0)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("zero-sum log-contrasts ignore scaling and closure") {
  Gen g(103);
  double worst = 0.0;
  for (int t = 0; t < kCases; ++t) {
    const std::size_t d = g.integer(2, 20);
    std::vector<std::size_t> all(d);
    std::iota(all.begin(), all.end(), 0);
    const auto beta = g.zero_sum(d, all);
    const auto x = g.positive(d);
    const double c = std::exp(g.uniform(-10, 10));
    std::vector<double> scaled(x);
    for (double& v : scaled) v *= c;
    const double b0 = g.uniform(-1, 1);
    const double base = log_contrast(x, beta, b0);
    worst = std::max({worst, std::abs(base - log_contrast(scaled, beta, b0)),
                      std::abs(base - log_contrast(closure(x), beta, b0))});
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("sub-compositional coherence") {
  Gen g(104);
  double worst = 0.0;
  for (int t = 0; t < kCases; ++t) {
    const std::size_t d = g.integer(3, 20);
    std::vector<std::size_t> keep(d);
    std::iota(keep.begin(), keep.end(), 0);
    std::shuffle(keep.begin(), keep.end(), g.engine);
    keep.resize(g.integer(2, d - 1));
    const auto beta = g.zero_sum(d, keep);
    std::vector<double> sub_beta;
    for (std::size_t j : keep) sub_beta.push_back(beta[j]);

    const auto full = single_row(closure(g.positive(d)), AbundanceKind::relative);
    const auto sub = subcomposition(full, keep);
    worst = std::max(worst, std::abs(log_contrast(full.values.row(0), beta, 0.0) -
                                     log_contrast(sub.values.row(0), sub_beta, 0.0)));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("zero replacement keeps row sums and nonzero ratios") {
  Gen g(105);
  for (int t = 0; t < kCases; ++t) {
    const std::size_t d = g.integer(2, 15);
    auto v = g.positive(d);
    const std::size_t zeros = g.integer(1, d - 1);
    for (std::size_t k = 0; k < zeros; ++k) v[k] = 0.0;
    std::shuffle(v.begin(), v.end(), g.engine);
    const auto m = single_row(v, AbundanceKind::absolute);
    const auto r = replace_zeros(m, g.uniform(0.01, 0.99));
    const auto row = r.values.row(0);
    const double s0 = std::accumulate(v.begin(), v.end(), 0.0);
    const double s1 = std::accumulate(row.begin(), row.end(), 0.0);
    CHECK(std::abs(s1 - s0) <= 1e-12 * s0);
    std::size_t first = d;
    for (std::size_t j = 0; j < d; ++j) {
      CHECK(row[j] > 0.0);
      if (v[j] == 0.0) continue;
      if (first == d) {
        first = j;
        continue;
      }
      CHECK(std::abs(row[j] / row[first] - v[j] / v[first]) <= 1e-12 * (v[j] / v[first]));
    }
  }
}

TEST_CASE("network: scale sensitivity is exactly sum(beta) * ln c") {
  Gen g(106);
  for (int t = 0; t < kCases; ++t) {
    const std::size_t d = g.integer(2, 10), b = g.integer(1, 5);
    auto p = DeepCodaParams::zeros(d, b, 4, t % 2 ? Head::linear : Head::self_explain);
    auto flat = p.flatten();
    for (double& v : flat) v = g.uniform(-1, 1);
    p.assign_flat(flat);
    const auto x = g.positive(d);
    const double c = std::exp(g.uniform(-5, 5));
    std::vector<double> scaled(x);
    for (double& v : scaled) v *= c;
    const auto a = forward(p, x), s = forward(p, scaled);
    const auto residual = p.constraint_residuals();
    for (std::size_t k = 0; k < b; ++k) CHECK(std::abs((s.z[k] - a.z[k]) - residual[k] * std::log(c)) <= 1e-9);
  }
}

TEST_CASE("network: exact log-contrasts make the forward pass scale free") {
  Gen g(107);
  for (int t = 0; t < kCases; ++t) {
    const std::size_t d = g.integer(2, 10), b = g.integer(1, 5);
    auto p = DeepCodaParams::zeros(d, b, 4, t % 2 ? Head::linear : Head::self_explain);
    auto flat = p.flatten();
    for (double& v : flat) v = g.uniform(-1, 1);
    p.assign_flat(flat);
    std::vector<std::size_t> all(d);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t k = 0; k < b; ++k) {
      const auto col = g.zero_sum(d, all);
      for (std::size_t j = 0; j < d; ++j) p.beta(j, k) = col[j];
    }
    const auto x = g.positive(d);
    const double c = std::exp(g.uniform(-5, 5));
    std::vector<double> scaled(x);
    for (double& v : scaled) v *= c;
    CHECK(std::abs(forward(p, x).yhat - forward(p, scaled).yhat) <= 1e-9);
  }
}

TEST_CASE("network: decomposition identity and permutation-invariant loss") {
  Gen g(108);
  for (int t = 0; t < 200; ++t) {
    const std::size_t d = g.integer(2, 8), b = g.integer(1, 4), n = g.integer(2, 12);
    auto p = DeepCodaParams::zeros(d, b, 5);
    auto flat = p.flatten();
    for (double& v : flat) v = g.uniform(-1, 1);
    p.assign_flat(flat);
    Matrix x(n, d);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = g.positive(d);
      std::copy(row.begin(), row.end(), x.row(i).begin());
      y[i] = static_cast<int>(g.integer(0, 1));
      const auto f = forward(p, x.row(i));
      double s = 0.0;
      for (std::size_t k = 0; k < b; ++k) s += f.w[k] * f.z[k];
      CHECK(std::abs(logistic(s) - f.yhat) <= 1e-12);
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), g.engine);
    std::vector<int> yp(n);
    for (std::size_t i = 0; i < n; ++i) yp[i] = y[perm[i]];
    const double l0 = loss(p, x, y, {});
    CHECK(std::abs(l0 - loss(p, x.select_rows(perm), yp, {})) <= 1e-12 * std::max(1.0, l0));
  }
}

TEST_CASE("network: linear B=1 head is a log-linear logistic model") {
  Gen g(109);
  for (int t = 0; t < kCases; ++t) {
    const std::size_t d = g.integer(2, 10);
    auto p = DeepCodaParams::zeros(d, 1, 1, Head::linear);
    for (std::size_t j = 0; j < d; ++j) p.beta(j, 0) = g.uniform(-1, 1);
    p.beta0[0] = g.uniform(-1, 1);
    p.linear_v[0] = 1.0;
    const auto x = g.positive(d);
    double eta = p.beta0[0];
    for (std::size_t j = 0; j < d; ++j) eta += p.beta(j, 0) * std::log(x[j]);
    CHECK(std::abs(forward(p, x).yhat - 1.0 / (1.0 + std::exp(-eta))) <= 1e-12);
  }
}

TEST_CASE("auc: pairwise oracle and monotone invariance") {
  Gen g(110);
  for (int t = 0; t < kCases; ++t) {
    const std::size_t n = g.integer(2, 50);
    std::vector<double> s(n);
    std::vector<int> y(n);
    const bool ties = t % 2 == 0;
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = ties ? static_cast<double>(g.integer(0, 5)) : g.uniform(-3, 3);
      y[i] = static_cast<int>(g.integer(0, 1));
    }
    y[0] = 0;
    y[n - 1] = 1;
    const double a = auc(s, y);
    CHECK(a == oracle::auc_bruteforce(s, y));
    std::vector<double> transformed(s);
    for (double& v : transformed) v = std::exp(2.0 * v) + 7.0;
    CHECK(auc(transformed, y) == a);
  }
}

TEST_CASE("soft threshold closed form") {
  Gen g(111);
  for (int t = 0; t < kCases; ++t) {
    const double u = g.uniform(-10, 10), th = g.uniform(0, 5);
    CHECK(soft_threshold(u, th) == std::copysign(1.0, u) * std::max(std::abs(u) - th, 0.0));
  }
}

TEST_CASE("canonical correlations: bounded and invariant to invertible affine maps") {
  Gen g(112);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = g.integer(12, 60), k = g.integer(1, 4);
    Matrix w(n, k), z(n, k);
    for (double& v : w.data()) v = normal(g.engine);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j) z(i, j) = normal(g.engine) + g.uniform(0, 1) * w(i, (j + 1) % k);
    const auto base = weight_contrast_correlation(w, z);
    for (double v : base.pearson.data()) CHECK(std::abs(v) <= 1.0);
    for (double r : base.canonical) {
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
    }
    // Mix W's columns with a well-conditioned random matrix and shift them.
    Matrix a(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) a(i, j) = (i == j ? 2.0 : 0.0) + g.uniform(-0.5, 0.5);
    Matrix w2(n, k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        double s = 5.0 * static_cast<double>(j) - 1.0;
        for (std::size_t m = 0; m < k; ++m) s += w(i, m) * a(m, j);
        w2(i, j) = s;
      }
    const auto mixed = weight_contrast_correlation(w2, z);
    for (std::size_t r = 0; r < k; ++r) CHECK(std::abs(mixed.canonical[r] - base.canonical[r]) <= 1e-6);
  }
}
