#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "deepcoda/matrix.hpp"
#include "deepcoda/network.hpp"

namespace deepcoda {

// Predicted class from the product scores: positive (label 1) when their
// sum, the logit, exceeds zero.
enum class Decision { negative = 0, positive = 1 };

Decision decide(std::span<const double> product_scores) noexcept;

// Level 1: one sample's prediction as a sum of per-bottleneck product scores.
struct Explanation {
  std::string sample_id;
  std::vector<double> z;
  std::vector<double> w;
  std::vector<double> products;  // w[b] * z[b]
  double prediction = 0.0;       // logistic(sum of products)
  Decision decision = Decision::negative;
};

// Throws UnsupportedHead for linear-head models.
Explanation explain_sample(const DeepCodaParams& p, std::span<const double> x, std::string sample_id);

// Level 2: which parts a bottleneck's log-contrast is built from.
struct MembershipEntry {
  std::size_t feature_index = 0;
  std::string feature_name;
  double power = 0.0;  // > 0: numerator, < 0: denominator
};

struct ContrastMembership {
  std::size_t bottleneck = 0;
  std::vector<MembershipEntry> entries;  // |power| > threshold, by |power| descending (stable)

  std::vector<MembershipEntry> numerator() const;
  std::vector<MembershipEntry> denominator() const;
};

// feature_names may be empty, in which case "f1".."fD" are used.
ContrastMembership contrast_membership(const DeepCodaParams& p, std::size_t bottleneck,
                                       std::span<const std::string> feature_names = {},
                                       double magnitude_threshold = 1e-3);

struct WeightContrastCorrelation {
  Matrix pearson;                        // pearson(i, j) = corr(W[:, i], Z[:, j])
  std::vector<double> canonical;         // descending, in [0, 1]
  std::vector<std::size_t> constant_w;   // columns of W with zero variance
  std::vector<std::size_t> constant_z;   // columns of Z with zero variance
};

// Pearson cross-correlations and canonical correlations between the
// sample-specific weights W (N x B) and log-contrasts Z (N x B). Constant
// columns correlate 0 with everything and are reported. CCA runs on the
// correlation matrices with 1e-8 added to their diagonals.
WeightContrastCorrelation weight_contrast_correlation(const Matrix& w, const Matrix& z);

// CSV artifacts. Numbers use 17 significant digits.
//   explanations.csv: sample_id,z_1..z_B,w_1..w_B,prod_1..prod_B,prob,decision
//   memberships.csv:  bottleneck,rank,feature,power,role
//   correlations.csv: kind,i,j,value   (kind = pearson | canonical)
void write_explanations_csv(std::ostream& out, std::span<const Explanation> explanations, std::size_t n_bottlenecks);
void write_memberships_csv(std::ostream& out, std::span<const ContrastMembership> memberships);
void write_correlations_csv(std::ostream& out, const WeightContrastCorrelation& corr);

// Plain-text summary combining both levels.
std::string render_text_report(std::span<const Explanation> explanations,
                               std::span<const ContrastMembership> memberships,
                               const WeightContrastCorrelation* correlations);

}  // namespace deepcoda
