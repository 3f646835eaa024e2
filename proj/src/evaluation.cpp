#include "deepcoda/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <tuple>

#include "deepcoda/error.hpp"
#include "deepcoda/model_io.hpp"
#include "deepcoda/rng.hpp"

namespace deepcoda {

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InvalidInput("auc: scores and labels differ in length");
  for (double s : scores) {
    if (std::isnan(s)) throw InvalidInput("auc: NaN score");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of 2 * mid-rank over positives; ranks are 1-based, so doubled
  // mid-ranks are integers and the sum is exact.
  double twice_rank_sum = 0.0;
  std::size_t n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double twice_mid_rank = static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      const int label = labels[order[k]];
      if (label == 1) {
        ++n_pos;
        twice_rank_sum += twice_mid_rank;
      } else if (label == 0) {
        ++n_neg;
      } else {
        throw InvalidInput("auc: labels must be 0 or 1");
      }
    }
    i = j;
  }
  if (n_pos == 0 || n_neg == 0) throw InvalidInput("auc: both classes must be present");
  const double np = static_cast<double>(n_pos);
  // U counts (pos > neg) pairs plus half of the tied pairs.
  const double u = 0.5 * (twice_rank_sum - np * (np + 1.0));
  return u / (np * static_cast<double>(n_neg));
}

SplitIndices split(std::size_t n, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw InvalidInput("split: test_fraction must lie in (0, 1)");
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));
  if (n_test == 0 || n_test >= n) {
    throw InvalidInput("split: " + std::to_string(n) + " samples cannot give non-empty train and test sets");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  CounterRng rng(seed, /*stream=*/0x5b17);
  shuffle<std::size_t>(perm, rng);
  SplitIndices out;
  out.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_test));
  out.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_test), perm.end());
  std::sort(out.test.begin(), out.test.end());
  std::sort(out.train.begin(), out.train.end());
  return out;
}

std::string deepcoda_method_name(const TrainConfig& cfg) {
  return "deepcoda:" + std::string(to_string(cfg.head)) + ":B=" + std::to_string(cfg.n_bottlenecks) +
         ":lambda_s=" + format_double(cfg.lambda_s);
}

Method deepcoda_method(const TrainConfig& cfg) {
  cfg.validate();
  return Method{deepcoda_method_name(cfg),
                [cfg](const Matrix& x_train, std::span<const int> y_train, const Matrix& x_test, std::uint64_t seed) {
                  TrainConfig run = cfg;
                  run.seed = cfg.seed + seed;
                  const auto report = train(x_train, y_train, run);
                  return predict_proba(report.params, x_test);
                }};
}

Method lasso_method(Transform transform, const CvOptions& cv) {
  return Method{"lasso:" + std::string(to_string(transform)),
                [transform, cv](const Matrix& x_train, std::span<const int> y_train, const Matrix& x_test,
                                std::uint64_t seed) {
                  CvOptions run = cv;
                  run.seed = cv.seed + seed;
                  const auto model = fit_lasso_baseline(x_train, y_train, transform, run);
                  return model.decision_function(apply_transform(x_test, transform));
                }};
}

Method constant_method(double value) {
  return Method{"constant", [value](const Matrix&, std::span<const int>, const Matrix& x_test, std::uint64_t) {
                  return std::vector<double>(x_test.rows(), value);
                }};
}

std::vector<BenchmarkResult> benchmark(const BenchmarkDataset& dataset, std::span<const Method> methods,
                                       std::size_t n_splits, std::uint64_t base_seed, double test_fraction) {
  if (dataset.y.size() != dataset.x.rows()) throw InvalidInput("benchmark: label count does not match sample count");
  for (double v : dataset.x.data()) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput("benchmark: data must be strictly positive");
  }
  for (int v : dataset.y) {
    if (v != 0 && v != 1) throw InvalidInput("benchmark: labels must be 0 or 1");
  }

  std::vector<BenchmarkResult> results;
  results.reserve(methods.size() * n_splits);
  for (std::size_t s = 0; s < n_splits; ++s) {
    const std::uint64_t seed = base_seed + s;
    const SplitIndices parts = split(dataset.x.rows(), test_fraction, seed);
    const Matrix x_train = dataset.x.select_rows(parts.train);
    const Matrix x_test = dataset.x.select_rows(parts.test);
    std::vector<int> y_train, y_test;
    for (std::size_t i : parts.train) y_train.push_back(dataset.y[i]);
    for (std::size_t i : parts.test) y_test.push_back(dataset.y[i]);

    for (const Method& method : methods) {
      const std::string where = "benchmark [method " + method.name + ", split " + std::to_string(s) + "]: ";
      try {
        const auto scores = method.fit_score(x_train, y_train, x_test, seed);
        results.push_back({dataset.name, method.name, s, auc(scores, y_test), 0.0});
      } catch (const NumericError& e) {
        throw NumericError(where + e.what());
      } catch (const Error& e) {
        throw InvalidInput(where + e.what());
      }
    }
  }
  std::sort(results.begin(), results.end(), [](const BenchmarkResult& a, const BenchmarkResult& b) {
    return std::tie(a.dataset, a.method, a.split_index) < std::tie(b.dataset, b.method, b.split_index);
  });
  return standardize_scores(std::move(results));
}

std::vector<BenchmarkResult> standardize_scores(std::vector<BenchmarkResult> results) {
  std::map<std::string, std::pair<double, std::size_t>> totals;
  for (const auto& r : results) {
    auto& [sum, count] = totals[r.dataset];
    sum += r.auc;
    ++count;
  }
  for (auto& r : results) {
    const auto& [sum, count] = totals[r.dataset];
    r.standardized_auc = r.auc - sum / static_cast<double>(count);
  }
  return results;
}

std::vector<BenchmarkResult> grid_search(const BenchmarkDataset& dataset, const GridSpec& grid,
                                         const TrainConfig& base, std::size_t n_splits, std::uint64_t base_seed) {
  std::vector<Method> methods;
  for (Head head : grid.heads) {
    for (std::size_t b : grid.bottlenecks) {
      for (double lambda_s : grid.lambda_s) {
        TrainConfig cfg = base;
        cfg.head = head;
        cfg.n_bottlenecks = b;
        cfg.lambda_s = lambda_s;
        methods.push_back(deepcoda_method(cfg));
      }
    }
  }
  return benchmark(dataset, methods, n_splits, base_seed);
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidInput("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<ConfigSummary> summarize(std::span<const BenchmarkResult> results) {
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : results) {
    auto& [raw, standardized] = groups[r.method];
    raw.push_back(r.auc);
    standardized.push_back(r.standardized_auc);
  }
  std::vector<ConfigSummary> out;
  for (const auto& [method, values] : groups) {
    const auto& [raw, standardized] = values;
    ConfigSummary s;
    s.method = method;
    s.n = raw.size();
    s.mean_auc = std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(raw.size());
    s.median_auc = median(raw);
    s.mean_standardized_auc =
        std::accumulate(standardized.begin(), standardized.end(), 0.0) / static_cast<double>(standardized.size());
    s.median_standardized_auc = median(standardized);
    out.push_back(std::move(s));
  }
  return out;
}

void write_results_csv(std::ostream& out, std::span<const BenchmarkResult> results) {
  out << "dataset,method,split,auc,standardized_auc\n";
  for (const auto& r : results) {
    out << r.dataset << ',' << r.method << ',' << r.split_index << ',' << format_double(r.auc) << ','
        << format_double(r.standardized_auc) << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const ConfigSummary> summary) {
  out << "method,n,mean_auc,median_auc,mean_standardized_auc,median_standardized_auc\n";
  for (const auto& s : summary) {
    out << s.method << ',' << s.n << ',' << format_double(s.mean_auc) << ',' << format_double(s.median_auc) << ','
        << format_double(s.mean_standardized_auc) << ',' << format_double(s.median_standardized_auc) << '\n';
  }
}

}  // namespace deepcoda
