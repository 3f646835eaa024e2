#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "deepcoda/composition.hpp"
#include "deepcoda/error.hpp"
#include "oracles.hpp"

using namespace deepcoda;

namespace {

CompositionMatrix make(std::size_t rows, std::size_t cols, std::vector<double> values, AbundanceKind kind) {
  CompositionMatrix m;
  m.values = Matrix(rows, cols);
  m.values.data() = std::move(values);
  m.kind = kind;
  return m;
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_SUITE("closure") {
  TEST_CASE("absolute measurements close to proportions") {
    const std::vector<double> v{4, 10, 6};
    const auto c = closure(v);
    CHECK(c[0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(c[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(c[2] == doctest::Approx(0.3).epsilon(1e-15));
  }

  TEST_CASE("uniform vector") {
    const std::vector<double> v{1, 1, 1, 1};
    for (double x : closure(v)) CHECK(x == 0.25);
  }

  TEST_CASE("idempotent and scale invariant") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int t = 0; t < 200; ++t) {
      const auto v = oracle::positive_vector(gen, 6);
      const auto once = closure(v);
      const auto twice = closure(once);
      std::vector<double> scaled(v);
      const double c = scale(gen);
      for (double& x : scaled) x *= c;
      const auto closed_scaled = closure(scaled);
      for (std::size_t j = 0; j < v.size(); ++j) {
        CHECK(std::abs(twice[j] - once[j]) <= 1e-12);
        CHECK(std::abs(closed_scaled[j] - once[j]) <= 1e-12);
      }
    }
  }

  TEST_CASE("rejects all-zero and negative input") {
    CHECK_THROWS_AS(closure(std::vector<double>{0, 0, 0}), InvalidInput);
    CHECK_THROWS_AS(closure(std::vector<double>{1, -1, 2}), InvalidInput);
  }
}

TEST_SUITE("replace_zeros") {
  TEST_CASE("zero becomes half the smallest nonzero and ratios survive") {
    const auto m = make(1, 3, {0, 2, 2}, AbundanceKind::absolute);
    const auto r = replace_zeros(m, 0.5);
    CHECK(r.values(0, 0) == 1.0);
    CHECK(r.values(0, 1) / r.values(0, 2) == 1.0);
    CHECK(r.values(0, 1) == doctest::Approx(1.5));
    CHECK(sum(r.values.row(0)) == doctest::Approx(4.0));
  }

  TEST_CASE("matrix without zeros is returned unchanged") {
    const auto m = make(2, 3, {0.1, 0.2, 0.7, 0.3, 0.3, 0.4}, AbundanceKind::relative);
    const auto r = replace_zeros(m, 0.5);
    CHECK(r.values == m.values);
  }

  TEST_CASE("row sums preserved on a 3x3 matrix with one zero per row") {
    const auto m = make(3, 3, {0.0, 0.25, 0.75, 0.6, 0.0, 0.4, 0.125, 0.875, 0.0}, AbundanceKind::relative);
    const auto r = replace_zeros(m, 0.5);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(sum(r.values.row(i)) - sum(m.values.row(i))) <= 1e-12);
      for (double v : r.values.row(i)) CHECK(v > 0.0);
    }
    // nonzero ratios in row 0
    CHECK(r.values(0, 2) / r.values(0, 1) == doctest::Approx(3.0).epsilon(1e-14));
  }

  TEST_CASE("many zeros in a row stay positive") {
    const auto m = make(1, 6, {0, 0, 0, 0, 1, 1}, AbundanceKind::absolute);
    const auto r = replace_zeros(m, 0.5);
    for (double v : r.values.row(0)) CHECK(v > 0.0);
    CHECK(sum(r.values.row(0)) == doctest::Approx(2.0));
    CHECK(r.values(0, 4) == r.values(0, 5));
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(replace_zeros(make(1, 3, {0, 0, 0}, AbundanceKind::absolute), 0.5), InvalidInput);
    CHECK_THROWS_AS(replace_zeros(make(1, 2, {0, 1}, AbundanceKind::absolute), 1.5), InvalidInput);
  }
}

TEST_SUITE("clr") {
  TEST_CASE("identity case") {
    for (double v : clr(std::vector<double>{1, 1, 1, 1})) CHECK(v == 0.0);
  }

  TEST_CASE("matches ln x - mean ln x") {
    const std::vector<double> x{0.2, 0.5, 0.3};
    const auto got = clr(x);
    const auto want = oracle::clr(x);
    for (std::size_t j = 0; j < x.size(); ++j) CHECK(std::abs(got[j] - want[j]) <= 1e-15);
  }

  TEST_CASE("rows sum to zero") {
    std::mt19937_64 gen(11);
    for (int t = 0; t < 200; ++t) CHECK(std::abs(sum(clr(oracle::positive_vector(gen, 9)))) <= 1e-12);
  }

  TEST_CASE("rejects nonpositive") { CHECK_THROWS_AS(clr(std::vector<double>{1, 0, 2}), InvalidInput); }
}

TEST_SUITE("log_contrast") {
  TEST_CASE("same value on absolute and closed data") {
    const std::vector<double> beta{0.5, 0.5, -1.0};
    const double abs_value = log_contrast(std::vector<double>{4, 10, 6}, beta, 0.0);
    const double rel_value = log_contrast(std::vector<double>{0.2, 0.5, 0.3}, beta, 0.0);
    CHECK(std::abs(abs_value - rel_value) <= 1e-12);
    CHECK(abs_value == doctest::Approx(std::log(std::sqrt(4.0 * 10.0) / 6.0)).epsilon(1e-14));
  }

  TEST_CASE("zero powers give the intercept") {
    CHECK(log_contrast(std::vector<double>{3, 7}, std::vector<double>{0, 0}, 1.25) == 1.25);
  }

  TEST_CASE("scale invariant when powers sum to zero") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0), c(0.001, 1000.0);
    for (int t = 0; t < 200; ++t) {
      const auto x = oracle::positive_vector(gen, 5);
      std::vector<double> beta(5);
      for (double& b : beta) b = u(gen);
      beta[4] = -(beta[0] + beta[1] + beta[2] + beta[3]);
      const double k = c(gen);
      std::vector<double> scaled(x);
      for (double& v : scaled) v *= k;
      CHECK(std::abs(log_contrast(x, beta, 0.3) - log_contrast(scaled, beta, 0.3)) <= 1e-9);
    }
  }

  TEST_CASE("rejects nonpositive") {
    CHECK_THROWS_AS(log_contrast(std::vector<double>{1, -2}, std::vector<double>{1, -1}, 0.0), InvalidInput);
  }
}

TEST_SUITE("subcomposition") {
  TEST_CASE("keeping every column re-closes to the input") {
    const auto m = make(1, 3, {0.2, 0.5, 0.3}, AbundanceKind::relative);
    const std::vector<std::size_t> all{0, 1, 2};
    const auto s = subcomposition(m, all);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(s.values(0, j) - m.values(0, j)) <= 1e-15);
  }

  TEST_CASE("two of three parts") {
    const auto m = make(1, 3, {0.2, 0.5, 0.3}, AbundanceKind::relative);
    const std::vector<std::size_t> keep{0, 1};
    const auto s = subcomposition(m, keep);
    CHECK(s.values(0, 0) == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
    CHECK(s.values(0, 1) == doctest::Approx(5.0 / 7.0).epsilon(1e-15));
  }

  TEST_CASE("log-contrast on the kept parts is unchanged") {
    const auto m = make(2, 4, {0.1, 0.2, 0.3, 0.4, 0.25, 0.25, 0.4, 0.1}, AbundanceKind::relative);
    const std::vector<std::size_t> keep{1, 3};
    const auto s = subcomposition(m, keep);
    const std::vector<double> full_beta{0.0, 1.0, 0.0, -1.0};
    const std::vector<double> sub_beta{1.0, -1.0};
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(std::abs(log_contrast(m.values.row(i), full_beta, 0.0) - log_contrast(s.values.row(i), sub_beta, 0.0)) <=
            1e-12);
    }
  }

  TEST_CASE("empty keep set and bad index") {
    const auto m = make(1, 2, {0.5, 0.5}, AbundanceKind::relative);
    CHECK_THROWS_AS(subcomposition(m, std::vector<std::size_t>{}), InvalidInput);
    CHECK_THROWS_AS(subcomposition(m, std::vector<std::size_t>{2}), InvalidInput);
  }
}

TEST_CASE("validate flags relative rows that do not sum to 1") {
  auto m = make(1, 2, {0.5, 0.6}, AbundanceKind::relative);
  CHECK_THROWS_AS(m.validate(), InvalidInput);
  m.kind = AbundanceKind::absolute;
  CHECK_NOTHROW(m.validate());
}
