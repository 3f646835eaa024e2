#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "deepcoda/composition.hpp"

namespace deepcoda {

struct LabeledComposition {
  CompositionMatrix data;
  std::vector<int> labels;
};

// Dataset CSV: header `sample_id,<feature>...,label`, one sample per row,
// non-negative finite abundances and labels in {0, 1}. At least two feature
// columns. The kind is `relative` when every row sums to 1 within 1e-9.
LabeledComposition read_dataset_csv(std::istream& in);
LabeledComposition read_dataset_csv(const std::filesystem::path& path);

void write_dataset_csv(std::ostream& out, const CompositionMatrix& data, std::span<const int> labels);
void write_dataset_csv(const std::filesystem::path& path, const CompositionMatrix& data, std::span<const int> labels);

// Zero replacement applied at ingestion, only when a zero is present.
LabeledComposition prepare_for_model(LabeledComposition in, double delta_fraction);

}  // namespace deepcoda
