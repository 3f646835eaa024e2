#include "deepcoda/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "deepcoda/baselines.hpp"
#include "deepcoda/dataset_io.hpp"
#include "deepcoda/error.hpp"
#include "deepcoda/evaluation.hpp"
#include "deepcoda/explain.hpp"
#include "deepcoda/model_io.hpp"
#include "deepcoda/synthgen.hpp"
#include "deepcoda/text.hpp"
#include "deepcoda/trainer.hpp"

namespace fs = std::filesystem;

namespace deepcoda::cli {

namespace {

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  return out;
}

TrainConfig load_config(const std::string& path) {
  if (path.empty()) return TrainConfig{};
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config '" + path + "'");
  return parse_train_config(in);
}

LabeledComposition load_data(const std::string& path, double delta_fraction) {
  return prepare_for_model(read_dataset_csv(fs::path(path)), delta_fraction);
}

struct SimulateArgs {
  std::string kind = "toy";
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  SyntheticDataset ds;
  if (a.kind == "toy") {
    ds = gen_toy(a.n, a.seed);
  } else if (a.kind == "cmyc") {
    ds = gen_cmyc(a.n, a.seed);
  } else {
    throw InvalidInput("simulate: unknown kind '" + a.kind + "' (expected toy or cmyc)");
  }
  fs::create_directories(a.out_dir);
  const fs::path dir(a.out_dir);
  write_dataset_csv(dir / "absolute.csv", ds.absolute, ds.labels);
  write_dataset_csv(dir / "relative.csv", ds.relative, ds.labels);
  out << "wrote " << (dir / "absolute.csv").string() << " and " << (dir / "relative.csv").string() << " ("
      << a.n << " samples, " << ds.absolute.n_features() << " features)\n";
  return kExitOk;
}

struct TrainArgs {
  std::string data;
  std::string config;
  std::string model_out;
  std::string report_out;
  double delta_fraction = 0.5;
  std::optional<std::uint64_t> seed;
};

int cmd_train(const TrainArgs& a, std::ostream& out) {
  TrainConfig cfg = load_config(a.config);
  if (a.seed) cfg.seed = *a.seed;
  const auto data = load_data(a.data, a.delta_fraction);
  const TrainReport report = train(data.data.values, data.labels, cfg);

  save_params(a.model_out, report.params);
  const std::string report_path = a.report_out.empty() ? a.model_out + ".report.csv" : a.report_out;
  auto rep = open_output(report_path);
  rep << "kind,index,value\n";
  for (std::size_t e = 0; e < report.loss_history.size(); ++e) {
    rep << "loss," << e << ',' << format_double(report.loss_history[e]) << '\n';
  }
  for (std::size_t b = 0; b < report.final_constraint_residuals.size(); ++b) {
    rep << "residual," << b << ',' << format_double(report.final_constraint_residuals[b]) << '\n';
  }

  out << "final loss: " << format_double(report.loss_history.back()) << '\n';
  out << "constraint residuals (sum of powers per bottleneck):";
  for (double r : report.final_constraint_residuals) out << ' ' << format_double(r);
  out << '\n' << "model written to " << a.model_out << '\n';
  return kExitOk;
}

struct BenchmarkArgs {
  std::string data;
  std::string config;
  std::string methods = "deepcoda";
  bool grid = false;
  std::size_t splits = 20;
  std::uint64_t seed = 0;
  std::string out;
  std::string summary;
  std::string name;
  double delta_fraction = 0.5;
};

std::vector<Method> parse_methods(const std::string& list, const TrainConfig& cfg) {
  std::vector<Method> methods;
  for (const auto& raw : split(list, ',')) {
    const std::string name = trim(raw);
    if (name == "deepcoda") {
      TrainConfig c = cfg;
      c.head = Head::self_explain;
      methods.push_back(deepcoda_method(c));
    } else if (name == "deepcoda_linear") {
      TrainConfig c = cfg;
      c.head = Head::linear;
      methods.push_back(deepcoda_method(c));
    } else if (name == "lasso_none") {
      methods.push_back(lasso_method(Transform::none));
    } else if (name == "lasso_clr") {
      methods.push_back(lasso_method(Transform::clr));
    } else if (name == "constant") {
      methods.push_back(constant_method());
    } else {
      throw InvalidInput("benchmark: unknown method '" + name +
                         "' (expected deepcoda, deepcoda_linear, lasso_none, lasso_clr or constant)");
    }
  }
  if (methods.empty()) throw InvalidInput("benchmark: no methods given");
  return methods;
}

int cmd_benchmark(const BenchmarkArgs& a, std::ostream& out) {
  const TrainConfig cfg = load_config(a.config);
  const auto data = load_data(a.data, a.delta_fraction);
  BenchmarkDataset dataset{a.name.empty() ? fs::path(a.data).stem().string() : a.name, data.data.values, data.labels};

  std::vector<BenchmarkResult> results;
  if (a.grid) {
    results = grid_search(dataset, GridSpec{}, cfg, a.splits, a.seed);
  } else {
    const auto methods = parse_methods(a.methods, cfg);
    results = benchmark(dataset, methods, a.splits, a.seed);
  }

  auto csv = open_output(a.out);
  write_results_csv(csv, results);
  const auto summary = summarize(results);
  if (!a.summary.empty()) {
    auto s = open_output(a.summary);
    write_summary_csv(s, summary);
  }
  for (const auto& s : summary) {
    out << s.method << ": median AUC " << format_double(s.median_auc) << " over " << s.n << " splits\n";
  }
  out << results.size() << " rows written to " << a.out << '\n';
  return kExitOk;
}

struct ExplainArgs {
  std::string model;
  std::string data;
  std::string out_dir = ".";
  double threshold = 1e-3;
  double delta_fraction = 0.5;
};

int cmd_explain(const ExplainArgs& a, std::ostream& out) {
  const DeepCodaParams params = load_params(a.model);
  if (params.head != Head::self_explain) {
    throw UnsupportedHead("explain: model '" + a.model + "' has a linear head; explanations need self_explain");
  }
  const auto data = load_data(a.data, a.delta_fraction);
  if (data.data.n_features() != params.n_features()) {
    throw InvalidInput("explain: data has " + std::to_string(data.data.n_features()) + " features, model expects " +
                       std::to_string(params.n_features()));
  }

  const std::size_t n = data.data.n_samples();
  const std::size_t b_count = params.n_bottlenecks();
  std::vector<Explanation> explanations;
  explanations.reserve(n);
  Matrix w(n, b_count), z(n, b_count);
  for (std::size_t i = 0; i < n; ++i) {
    explanations.push_back(explain_sample(params, data.data.values.row(i), data.data.sample_ids[i]));
    for (std::size_t b = 0; b < b_count; ++b) {
      w(i, b) = explanations.back().w[b];
      z(i, b) = explanations.back().z[b];
    }
  }
  std::vector<ContrastMembership> memberships;
  for (std::size_t b = 0; b < b_count; ++b) {
    memberships.push_back(contrast_membership(params, b, data.data.feature_names, a.threshold));
  }

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  {
    auto f = open_output(dir / "explanations.csv");
    write_explanations_csv(f, explanations, b_count);
  }
  {
    auto f = open_output(dir / "memberships.csv");
    write_memberships_csv(f, memberships);
  }
  std::optional<WeightContrastCorrelation> corr;
  if (n > b_count) {
    corr = weight_contrast_correlation(w, z);
    auto f = open_output(dir / "correlations.csv");
    write_correlations_csv(f, *corr);
  } else {
    out << "skipping correlations: need more samples than bottlenecks\n";
  }
  {
    auto f = open_output(dir / "report.txt");
    f << render_text_report(explanations, memberships, corr ? &*corr : nullptr);
  }
  out << "explained " << n << " samples; reports written to " << dir.string() << '\n';
  return kExitOk;
}

struct BaselineArgs {
  std::string data;
  std::string transform = "none";
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::string out;
  double delta_fraction = 0.5;
};

int cmd_baseline(const BaselineArgs& a, std::ostream& out) {
  const Transform transform = parse_transform(a.transform);
  auto data = read_dataset_csv(fs::path(a.data));
  // Raw abundances can carry zeros; only the log-ratio transform needs them replaced.
  if (transform == Transform::clr) data = prepare_for_model(std::move(data), a.delta_fraction);

  CvOptions cv;
  cv.n_folds = a.folds;
  cv.seed = a.seed;
  const LassoModel model = fit_lasso_baseline(data.data.values, data.labels, transform, cv);
  const auto scaled = minmax_scaled_magnitudes(model.coef);

  std::ostringstream csv;
  csv << "term,coef,scaled_magnitude\n";
  csv << "(intercept)," << format_double(model.intercept) << ",\n";
  for (std::size_t j = 0; j < model.coef.size(); ++j) {
    csv << data.data.feature_names[j] << ',' << format_double(model.coef[j]) << ',' << format_double(scaled[j])
        << '\n';
  }
  if (!a.out.empty()) {
    auto f = open_output(a.out);
    f << csv.str();
  }
  out << "transform " << to_string(transform) << ", lambda " << format_double(model.lambda)
      << " chosen by " << a.folds << "-fold cross-validation\n";
  out << csv.str();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"DeepCoDA: log-contrast networks with self-explanation for compositional data", "deepcoda"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Write a synthetic dataset (absolute.csv, relative.csv)");
  simulate->add_option("--kind", sim.kind, "toy or cmyc")->check(CLI::IsMember({"toy", "cmyc"}));
  simulate->add_option("-n,--n", sim.n, "number of samples");
  simulate->add_option("--seed", sim.seed, "random seed");
  simulate->add_option("--out", sim.out_dir, "output directory");

  TrainArgs tr;
  auto* train_cmd = app.add_subcommand("train", "Train a DeepCoDA model");
  train_cmd->add_option("data", tr.data, "dataset CSV")->required();
  train_cmd->add_option("--config", tr.config, "flat key = value training config");
  train_cmd->add_option("--out", tr.model_out, "model file to write")->required();
  train_cmd->add_option("--report", tr.report_out, "training report CSV (default <out>.report.csv)");
  train_cmd->add_option("--seed", tr.seed, "override the config seed");
  train_cmd->add_option("--delta-fraction", tr.delta_fraction, "zero replacement fraction");

  BenchmarkArgs bm;
  auto* bench = app.add_subcommand("benchmark", "Repeated 90/10 split AUC benchmark");
  bench->add_option("data", bm.data, "dataset CSV")->required();
  bench->add_option("--methods", bm.methods,
                    "comma list of deepcoda, deepcoda_linear, lasso_none, lasso_clr, constant");
  bench->add_flag("--grid", bm.grid, "run the B x lambda_s x head grid instead of --methods");
  bench->add_option("--config", bm.config, "training config for DeepCoDA methods");
  bench->add_option("--splits", bm.splits, "number of random splits");
  bench->add_option("--seed", bm.seed, "base seed; split s uses seed + s");
  bench->add_option("--out", bm.out, "results CSV")->required();
  bench->add_option("--summary", bm.summary, "per-method summary CSV");
  bench->add_option("--name", bm.name, "dataset name in the results (default: file stem)");
  bench->add_option("--delta-fraction", bm.delta_fraction, "zero replacement fraction");

  ExplainArgs ex;
  auto* explain = app.add_subcommand("explain", "Per-sample and per-contrast explanation reports");
  explain->add_option("data", ex.data, "dataset CSV")->required();
  explain->add_option("--model", ex.model, "model file")->required();
  explain->add_option("--out", ex.out_dir, "output directory");
  explain->add_option("--threshold", ex.threshold, "minimum |power| listed in memberships");
  explain->add_option("--delta-fraction", ex.delta_fraction, "zero replacement fraction");

  BaselineArgs bl;
  auto* baseline = app.add_subcommand("baseline", "LASSO logistic regression with cross-validated lambda");
  baseline->add_option("data", bl.data, "dataset CSV")->required();
  baseline->add_option("--transform", bl.transform, "none or clr")->check(CLI::IsMember({"none", "clr"}));
  baseline->add_option("--folds", bl.folds, "cross-validation folds");
  baseline->add_option("--seed", bl.seed, "fold assignment seed");
  baseline->add_option("--out", bl.out, "coefficient CSV");
  baseline->add_option("--delta-fraction", bl.delta_fraction, "zero replacement fraction");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, out);
    if (train_cmd->parsed()) return cmd_train(tr, out);
    if (bench->parsed()) return cmd_benchmark(bm, out);
    if (explain->parsed()) return cmd_explain(ex, out);
    if (baseline->parsed()) return cmd_baseline(bl, out);
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace deepcoda::cli
