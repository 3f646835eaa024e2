#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "deepcoda/matrix.hpp"

namespace deepcoda {

enum class AbundanceKind { absolute, relative };

// N samples x D parts. Entries are finite and non-negative; strictly
// positive once zeros have been replaced. Relative matrices have unit
// row sums.
struct CompositionMatrix {
  Matrix values;
  std::vector<std::string> sample_ids;
  std::vector<std::string> feature_names;
  AbundanceKind kind = AbundanceKind::absolute;

  std::size_t n_samples() const noexcept { return values.rows(); }
  std::size_t n_features() const noexcept { return values.cols(); }

  // Throws InvalidInput when the shape or value invariants do not hold.
  void validate() const;
  bool strictly_positive() const noexcept;
};

// Default sample ids ("s1".."sN") and feature names ("f1".."fD").
std::vector<std::string> default_sample_ids(std::size_t n);
std::vector<std::string> default_feature_names(std::size_t d);

// v / sum(v). Rejects negative entries and all-zero input.
std::vector<double> closure(std::span<const double> v);

// Row-wise closure; the result has kind == relative.
CompositionMatrix close_rows(const CompositionMatrix& m);

// Multiplicative zero replacement. In row i every zero becomes
// delta_i = delta_fraction * (smallest nonzero of row i), capped at
// delta_fraction * row_sum / zero_count, and the nonzero parts are scaled
// by (1 - zero_count * delta_i / row_sum). Row sums and ratios among the
// nonzero parts are preserved. Rows without zeros are copied untouched.
CompositionMatrix replace_zeros(const CompositionMatrix& m, double delta_fraction = 0.5);

bool has_zeros(const Matrix& values) noexcept;

// ln(x_j / g(x)) where g is the geometric mean.
std::vector<double> clr(std::span<const double> x);

Matrix clr_rows(const Matrix& x);

// beta0 + sum_d beta_d * ln x_d.
double log_contrast(std::span<const double> x, std::span<const double> beta, double beta0);

// Restrict to the columns in `keep` (in that order); relative input is
// re-closed.
CompositionMatrix subcomposition(const CompositionMatrix& m, std::span<const std::size_t> keep);

}  // namespace deepcoda
