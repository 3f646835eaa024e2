#include "deepcoda/synthgen.hpp"

#include <cmath>
#include <string>

#include "deepcoda/error.hpp"
#include "deepcoda/rng.hpp"

namespace deepcoda {

SyntheticDataset generate(const SyntheticDesign& design, std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 4) throw InvalidInput("synthetic data needs at least 4 samples, got " + std::to_string(n_samples));
  if (design.n_features < 2) throw InvalidInput("synthetic data needs at least 2 parts");

  const std::size_t d = design.n_features;
  SyntheticDataset out;
  out.constant_feature_index = 0;
  out.labels.resize(n_samples);
  out.absolute.values = Matrix(n_samples, d);
  out.absolute.sample_ids = default_sample_ids(n_samples);
  out.absolute.feature_names = default_feature_names(d);
  out.absolute.kind = AbundanceKind::absolute;

  CounterRng rng(seed, /*stream=*/0x5eed);
  const double mu = std::log(design.base_level);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const int label = static_cast<int>(i % 2);
    out.labels[i] = label;
    auto row = out.absolute.values.row(i);
    row[0] = design.base_level;
    for (std::size_t j = 1; j < d; ++j) {
      double v = std::exp(mu + design.log_sd * rng.normal());
      if (label == 1) v *= design.effect;
      row[j] = v;
    }
  }
  out.relative = close_rows(out.absolute);
  return out;
}

SyntheticDataset gen_toy(std::size_t n_samples, std::uint64_t seed) {
  return generate(SyntheticDesign{.n_features = 4, .effect = 4.0}, n_samples, seed);
}

SyntheticDataset gen_cmyc(std::size_t n_samples, std::uint64_t seed) {
  return generate(SyntheticDesign{.n_features = 10, .effect = 3.0}, n_samples, seed);
}

}  // namespace deepcoda
