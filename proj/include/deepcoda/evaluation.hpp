#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "deepcoda/baselines.hpp"
#include "deepcoda/matrix.hpp"
#include "deepcoda/trainer.hpp"

namespace deepcoda {

// Area under the ROC curve via the Mann-Whitney rank statistic with
// mid-ranks for ties. Throws InvalidInput unless both classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);

struct SplitIndices {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

// Uniform random split with |test| = round(test_fraction * n).
SplitIndices split(std::size_t n, double test_fraction, std::uint64_t seed);

// A named model family. `fit_score` trains on (x_train, y_train) and returns
// one score per row of x_test; higher means more likely class 1.
struct Method {
  std::string name;
  std::function<std::vector<double>(const Matrix& x_train, std::span<const int> y_train, const Matrix& x_test,
                                    std::uint64_t seed)>
      fit_score;
};

Method deepcoda_method(const TrainConfig& cfg);
Method lasso_method(Transform transform, const CvOptions& cv = {});
Method constant_method(double value = 0.5);

// Name used in result tables, e.g. "deepcoda:self_explain:B=5:lambda_s=0.01".
std::string deepcoda_method_name(const TrainConfig& cfg);

struct BenchmarkDataset {
  std::string name;
  Matrix x;             // strictly positive
  std::vector<int> y;
};

struct BenchmarkResult {
  std::string dataset;
  std::string method;
  std::size_t split_index = 0;
  double auc = 0.0;
  double standardized_auc = 0.0;
};

// For split s in [0, n_splits) the split seed is base_seed + s. Every
// method is fit on the training rows and scored by test AUC. Rows come back
// sorted by (dataset, method, split).
std::vector<BenchmarkResult> benchmark(const BenchmarkDataset& dataset, std::span<const Method> methods,
                                       std::size_t n_splits = 20, std::uint64_t base_seed = 0,
                                       double test_fraction = 0.1);

// standardized_auc = auc - mean auc of the same dataset.
std::vector<BenchmarkResult> standardize_scores(std::vector<BenchmarkResult> results);

struct GridSpec {
  std::vector<std::size_t> bottlenecks{1, 3, 5, 10};
  std::vector<double> lambda_s{0.001, 0.01, 0.1, 1.0};
  std::vector<Head> heads{Head::self_explain, Head::linear};
};

// Every (head, B, lambda_s) combination as a DeepCoDA method; `base`
// supplies the remaining training settings. Results are standardized.
std::vector<BenchmarkResult> grid_search(const BenchmarkDataset& dataset, const GridSpec& grid,
                                         const TrainConfig& base, std::size_t n_splits = 20,
                                         std::uint64_t base_seed = 0);

// Per-method summary of standardized AUC (the hyper-parameter comparison
// layout: one row per configuration).
struct ConfigSummary {
  std::string method;
  std::size_t n = 0;
  double mean_auc = 0.0;
  double median_auc = 0.0;
  double mean_standardized_auc = 0.0;
  double median_standardized_auc = 0.0;
};
std::vector<ConfigSummary> summarize(std::span<const BenchmarkResult> results);

double median(std::vector<double> values);

// CSV with header `dataset,method,split,auc,standardized_auc`.
void write_results_csv(std::ostream& out, std::span<const BenchmarkResult> results);
void write_summary_csv(std::ostream& out, std::span<const ConfigSummary> summary);

}  // namespace deepcoda
