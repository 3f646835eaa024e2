#include "deepcoda/explain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "deepcoda/composition.hpp"
#include "deepcoda/error.hpp"
#include "deepcoda/model_io.hpp"

namespace deepcoda {

namespace {

constexpr double kRidge = 1e-8;

// Columns centered and scaled to unit (population) variance; constant
// columns become zero and are recorded.
Eigen::MatrixXd standardize_columns(const Matrix& m, std::vector<std::size_t>& constant) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  const auto k = static_cast<Eigen::Index>(m.cols());
  Eigen::MatrixXd out(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    double mean = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) mean += m(i, j);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) ss += (m(i, j) - mean) * (m(i, j) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
      constant.push_back(static_cast<std::size_t>(j));
      out.col(j).setZero();
      continue;
    }
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = (m(i, j) - mean) / sd;
  }
  return out;
}

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd& spd) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(spd);
  const Eigen::VectorXd inv = eig.eigenvalues().cwiseMax(kRidge).cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

Decision decide(std::span<const double> product_scores) noexcept {
  double sum = 0.0;
  for (double v : product_scores) sum += v;
  return sum > 0.0 ? Decision::positive : Decision::negative;
}

Explanation explain_sample(const DeepCodaParams& p, std::span<const double> x, std::string sample_id) {
  if (p.head != Head::self_explain) {
    throw UnsupportedHead("explain: sample-level explanations need a self_explain model");
  }
  ForwardTrace trace = forward(p, x);
  Explanation e;
  e.sample_id = std::move(sample_id);
  e.products.resize(trace.z.size());
  double logit = 0.0;
  for (std::size_t b = 0; b < trace.z.size(); ++b) {
    e.products[b] = trace.w[b] * trace.z[b];
    logit += e.products[b];
  }
  e.z = std::move(trace.z);
  e.w = std::move(trace.w);
  e.prediction = logistic(logit);
  e.decision = decide(e.products);
  return e;
}

std::vector<MembershipEntry> ContrastMembership::numerator() const {
  std::vector<MembershipEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out), [](const auto& e) { return e.power > 0.0; });
  return out;
}

std::vector<MembershipEntry> ContrastMembership::denominator() const {
  std::vector<MembershipEntry> out;
  std::copy_if(entries.begin(), entries.end(), std::back_inserter(out), [](const auto& e) { return e.power < 0.0; });
  return out;
}

ContrastMembership contrast_membership(const DeepCodaParams& p, std::size_t bottleneck,
                                       std::span<const std::string> feature_names, double magnitude_threshold) {
  if (bottleneck >= p.n_bottlenecks()) throw InvalidInput("membership: bottleneck index out of range");
  if (!feature_names.empty() && feature_names.size() != p.n_features()) {
    throw InvalidInput("membership: feature name count does not match model");
  }
  const auto fallback = default_feature_names(p.n_features());
  ContrastMembership out;
  out.bottleneck = bottleneck;
  for (std::size_t d = 0; d < p.n_features(); ++d) {
    const double power = p.beta(d, bottleneck);
    if (std::abs(power) > magnitude_threshold) {
      out.entries.push_back({d, feature_names.empty() ? fallback[d] : feature_names[d], power});
    }
  }
  std::stable_sort(out.entries.begin(), out.entries.end(),
                   [](const auto& a, const auto& b) { return std::abs(a.power) > std::abs(b.power); });
  return out;
}

WeightContrastCorrelation weight_contrast_correlation(const Matrix& w, const Matrix& z) {
  if (w.rows() != z.rows()) throw InvalidInput("correlation: W and Z differ in row count");
  const std::size_t k = std::max(w.cols(), z.cols());
  if (w.rows() <= k) {
    throw InsufficientSamples("correlation: need more samples (" + std::to_string(w.rows()) + ") than columns (" +
                              std::to_string(k) + ")");
  }
  WeightContrastCorrelation out;
  const Eigen::MatrixXd ws = standardize_columns(w, out.constant_w);
  const Eigen::MatrixXd zs = standardize_columns(z, out.constant_z);
  const double n = static_cast<double>(w.rows());

  const Eigen::MatrixXd r_wz = ws.transpose() * zs / n;
  out.pearson = Matrix(w.cols(), z.cols());
  for (std::size_t i = 0; i < w.cols(); ++i) {
    for (std::size_t j = 0; j < z.cols(); ++j) {
      out.pearson(i, j) = std::clamp(r_wz(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), -1.0, 1.0);
    }
  }

  Eigen::MatrixXd r_ww = ws.transpose() * ws / n;
  Eigen::MatrixXd r_zz = zs.transpose() * zs / n;
  r_ww.diagonal().array() += kRidge;
  r_zz.diagonal().array() += kRidge;
  const Eigen::MatrixXd ww_isqrt = inverse_sqrt(r_ww);
  const Eigen::MatrixXd zz_isqrt = inverse_sqrt(r_zz);
  // Eigenvalues of the symmetrized CCA matrix
  // R_ww^{-1/2} R_wz R_zz^{-1} R_zw R_ww^{-1/2} are the squared canonical correlations.
  const Eigen::MatrixXd core = ww_isqrt * r_wz * zz_isqrt;
  const Eigen::MatrixXd cca = core * core.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (cca + cca.transpose()), Eigen::EigenvaluesOnly);
  std::vector<double> rho_sq(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
  std::sort(rho_sq.begin(), rho_sq.end(), std::greater<>());
  rho_sq.resize(std::min(w.cols(), z.cols()));
  for (double v : rho_sq) out.canonical.push_back(std::sqrt(std::clamp(v, 0.0, 1.0)));
  return out;
}

void write_explanations_csv(std::ostream& out, std::span<const Explanation> explanations, std::size_t n_bottlenecks) {
  out << "sample_id";
  for (const char* prefix : {"z_", "w_", "prod_"}) {
    for (std::size_t b = 1; b <= n_bottlenecks; ++b) out << ',' << prefix << b;
  }
  out << ",prob,decision\n";
  for (const auto& e : explanations) {
    if (e.z.size() != n_bottlenecks) throw InvalidInput("explanations: bottleneck count mismatch");
    out << e.sample_id;
    for (const auto* v : {&e.z, &e.w, &e.products}) {
      for (double x : *v) out << ',' << format_double(x);
    }
    out << ',' << format_double(e.prediction) << ',' << static_cast<int>(e.decision) << '\n';
  }
}

void write_memberships_csv(std::ostream& out, std::span<const ContrastMembership> memberships) {
  out << "bottleneck,rank,feature,power,role\n";
  for (const auto& m : memberships) {
    std::size_t rank = 1;
    for (const auto& e : m.entries) {
      out << m.bottleneck + 1 << ',' << rank++ << ',' << e.feature_name << ',' << format_double(e.power) << ','
          << (e.power > 0.0 ? "numerator" : "denominator") << '\n';
    }
  }
}

void write_correlations_csv(std::ostream& out, const WeightContrastCorrelation& corr) {
  out << "kind,i,j,value\n";
  for (std::size_t i = 0; i < corr.pearson.rows(); ++i) {
    for (std::size_t j = 0; j < corr.pearson.cols(); ++j) {
      out << "pearson,w_" << i + 1 << ",z_" << j + 1 << ',' << format_double(corr.pearson(i, j)) << '\n';
    }
  }
  for (std::size_t k = 0; k < corr.canonical.size(); ++k) {
    out << "canonical," << k + 1 << ",," << format_double(corr.canonical[k]) << '\n';
  }
}

std::string render_text_report(std::span<const Explanation> explanations,
                               std::span<const ContrastMembership> memberships,
                               const WeightContrastCorrelation* correlations) {
  std::ostringstream os;
  os << "Level 1: product scores (w_b * z_b); positive decision when their sum exceeds 0\n";
  for (const auto& e : explanations) {
    double sum = 0.0;
    os << "  " << e.sample_id << ": [";
    for (std::size_t b = 0; b < e.products.size(); ++b) {
      os << (b ? ", " : "") << format_double(e.products[b]);
      sum += e.products[b];
    }
    os << "] sum=" << format_double(sum) << " prob=" << format_double(e.prediction)
       << " decision=" << static_cast<int>(e.decision) << '\n';
  }
  os << "Level 2: log-contrast membership (numerator: positive powers, denominator: negative powers)\n";
  for (const auto& m : memberships) {
    os << "  bottleneck " << m.bottleneck + 1 << ":";
    if (m.entries.empty()) os << " (no part above threshold)";
    for (const auto& e : m.entries) os << ' ' << e.feature_name << '^' << format_double(e.power);
    os << '\n';
  }
  if (correlations != nullptr) {
    os << "Canonical correlations (weights vs log-contrasts):";
    for (double c : correlations->canonical) os << ' ' << format_double(c);
    os << '\n';
  }
  return os.str();
}

}  // namespace deepcoda
