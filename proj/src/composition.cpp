#include "deepcoda/composition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "deepcoda/error.hpp"

namespace deepcoda {

namespace {

void require_positive(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidInput(std::string(what) + ": entries must be finite and > 0");
    }
  }
}

double row_sum(std::span<const double> row) {
  double s = 0.0;
  for (double v : row) s += v;
  return s;
}

}  // namespace

void CompositionMatrix::validate() const {
  if (!sample_ids.empty() && sample_ids.size() != values.rows()) {
    throw InvalidInput("composition: sample id count does not match row count");
  }
  if (!feature_names.empty() && feature_names.size() != values.cols()) {
    throw InvalidInput("composition: feature name count does not match column count");
  }
  for (double v : values.data()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidInput("composition: entries must be finite and non-negative");
    }
  }
  if (kind == AbundanceKind::relative) {
    for (std::size_t i = 0; i < values.rows(); ++i) {
      if (std::abs(row_sum(values.row(i)) - 1.0) > 1e-9) {
        throw InvalidInput("composition: relative row " + std::to_string(i) + " does not sum to 1");
      }
    }
  }
}

bool CompositionMatrix::strictly_positive() const noexcept {
  return std::all_of(values.data().begin(), values.data().end(), [](double v) { return v > 0.0; });
}

std::vector<std::string> default_sample_ids(std::size_t n) {
  std::vector<std::string> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = "s" + std::to_string(i + 1);
  return ids;
}

std::vector<std::string> default_feature_names(std::size_t d) {
  std::vector<std::string> names(d);
  for (std::size_t j = 0; j < d; ++j) names[j] = "f" + std::to_string(j + 1);
  return names;
}

std::vector<double> closure(std::span<const double> v) {
  double total = 0.0;
  for (double x : v) {
    if (!std::isfinite(x) || x < 0.0) throw InvalidInput("closure: entries must be finite and non-negative");
    total += x;
  }
  if (!(total > 0.0)) throw InvalidInput("closure: input has no positive entry");
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = v[j] / total;
  return out;
}

CompositionMatrix close_rows(const CompositionMatrix& m) {
  CompositionMatrix out = m;
  out.kind = AbundanceKind::relative;
  for (std::size_t i = 0; i < m.values.rows(); ++i) {
    const auto closed = closure(m.values.row(i));
    std::copy(closed.begin(), closed.end(), out.values.row(i).begin());
  }
  return out;
}

bool has_zeros(const Matrix& values) noexcept {
  return std::any_of(values.data().begin(), values.data().end(), [](double v) { return v == 0.0; });
}

CompositionMatrix replace_zeros(const CompositionMatrix& m, double delta_fraction) {
  if (!(delta_fraction > 0.0 && delta_fraction < 1.0)) {
    throw InvalidInput("replace_zeros: delta_fraction must lie in (0, 1)");
  }
  for (double v : m.values.data()) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidInput("replace_zeros: entries must be finite and non-negative");
  }
  CompositionMatrix out = m;
  for (std::size_t i = 0; i < m.values.rows(); ++i) {
    auto row = out.values.row(i);
    std::size_t zeros = 0;
    double smallest = std::numeric_limits<double>::infinity();
    for (double v : row) {
      if (v == 0.0) {
        ++zeros;
      } else {
        smallest = std::min(smallest, v);
      }
    }
    if (zeros == 0) continue;
    if (zeros == row.size()) {
      throw InvalidInput("replace_zeros: row " + std::to_string(i) + " is all zeros");
    }
    const double total = row_sum(row);
    const double k = static_cast<double>(zeros);
    const double delta = std::min(delta_fraction * smallest, delta_fraction * total / k);
    const double scale = 1.0 - k * delta / total;
    for (double& v : row) v = (v == 0.0) ? delta : v * scale;
  }
  return out;
}

std::vector<double> clr(std::span<const double> x) {
  require_positive(x, "clr");
  std::vector<double> out(x.size());
  double mean_log = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    out[j] = std::log(x[j]);
    mean_log += out[j];
  }
  mean_log /= static_cast<double>(x.size());
  for (double& v : out) v -= mean_log;
  return out;
}

Matrix clr_rows(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto r = clr(x.row(i));
    std::copy(r.begin(), r.end(), out.row(i).begin());
  }
  return out;
}

double log_contrast(std::span<const double> x, std::span<const double> beta, double beta0) {
  if (x.size() != beta.size()) throw InvalidInput("log_contrast: x and beta differ in length");
  require_positive(x, "log_contrast");
  double z = beta0;
  for (std::size_t d = 0; d < x.size(); ++d) z += beta[d] * std::log(x[d]);
  return z;
}

CompositionMatrix subcomposition(const CompositionMatrix& m, std::span<const std::size_t> keep) {
  if (keep.empty()) throw InvalidInput("subcomposition: keep set is empty");
  for (std::size_t j : keep) {
    if (j >= m.n_features()) throw InvalidInput("subcomposition: column index out of range");
  }
  CompositionMatrix out;
  out.kind = m.kind;
  out.sample_ids = m.sample_ids;
  out.values = Matrix(m.n_samples(), keep.size());
  if (!m.feature_names.empty()) {
    for (std::size_t j : keep) out.feature_names.push_back(m.feature_names[j]);
  }
  for (std::size_t i = 0; i < m.n_samples(); ++i) {
    for (std::size_t k = 0; k < keep.size(); ++k) out.values(i, k) = m.values(i, keep[k]);
  }
  if (m.kind == AbundanceKind::relative) return close_rows(out);
  return out;
}

}  // namespace deepcoda
