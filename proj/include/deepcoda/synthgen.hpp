#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "deepcoda/composition.hpp"

namespace deepcoda {

// Paired absolute / relative views of one simulated experiment.
struct SyntheticDataset {
  CompositionMatrix absolute;
  CompositionMatrix relative;  // row-wise closure of `absolute`
  std::vector<int> labels;     // 1 = case
  std::size_t constant_feature_index = 0;
};

struct SyntheticDesign {
  std::size_t n_features = 4;
  double effect = 4.0;           // multiplicative class effect on the changing parts
  double base_level = 100.0;     // median absolute abundance, also the constant part's value
  double log_sd = 0.2;           // sd of ln(abundance) for the changing parts
};

// Samples alternate control, case, control, ... so any prefix is balanced.
// Part 0 is held at base_level in every sample; the remaining parts are
// log-normal around base_level and multiplied by `effect` in cases.
SyntheticDataset generate(const SyntheticDesign& design, std::size_t n_samples, std::uint64_t seed);

// 4 parts; parts 2-4 over-proliferate 4x in cases.
SyntheticDataset gen_toy(std::size_t n_samples, std::uint64_t seed);

// 10 parts; 90% of parts are produced 3x more in c-Myc positive samples.
SyntheticDataset gen_cmyc(std::size_t n_samples, std::uint64_t seed);

}  // namespace deepcoda
