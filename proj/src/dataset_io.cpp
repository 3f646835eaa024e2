#include "deepcoda/dataset_io.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "deepcoda/error.hpp"
#include "deepcoda/model_io.hpp"
#include "deepcoda/text.hpp"

namespace deepcoda {

namespace {

std::vector<std::string> csv_fields(const std::string& line) {
  auto fields = split(line, ',');
  for (auto& f : fields) f = trim(f);
  return fields;
}

}  // namespace

LabeledComposition read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("dataset: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = csv_fields(line);
  if (header.size() < 4) throw InvalidInput("dataset: need sample_id, at least two features and label columns");
  if (header.front() != "sample_id") throw InvalidInput("dataset: first column must be 'sample_id'");
  if (header.back() != "label") throw InvalidInput("dataset: last column must be 'label'");

  LabeledComposition out;
  out.data.feature_names.assign(header.begin() + 1, header.end() - 1);
  const std::size_t d = out.data.feature_names.size();
  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = csv_fields(line);
    const std::string where = "dataset line " + std::to_string(line_no);
    if (fields.size() != header.size()) {
      throw InvalidInput(where + ": expected " + std::to_string(header.size()) + " fields, got " +
                         std::to_string(fields.size()));
    }
    out.data.sample_ids.push_back(fields.front());
    for (std::size_t j = 0; j < d; ++j) {
      const double v = parse_double(fields[j + 1], where);
      if (v < 0.0) throw InvalidInput(where + ": negative abundance");
      values.push_back(v);
    }
    const std::string& label = fields.back();
    if (label != "0" && label != "1") throw InvalidInput(where + ": label must be 0 or 1, got '" + label + "'");
    out.labels.push_back(label == "1" ? 1 : 0);
  }
  if (out.labels.empty()) throw InvalidInput("dataset: no samples");

  out.data.values = Matrix(out.labels.size(), d);
  out.data.values.data() = std::move(values);
  bool relative = true;
  for (std::size_t i = 0; i < out.data.values.rows() && relative; ++i) {
    double s = 0.0;
    for (double v : out.data.values.row(i)) s += v;
    relative = std::abs(s - 1.0) <= 1e-9;
  }
  out.data.kind = relative ? AbundanceKind::relative : AbundanceKind::absolute;
  out.data.validate();
  return out;
}

LabeledComposition read_dataset_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open dataset '" + path.string() + "'");
  return read_dataset_csv(in);
}

void write_dataset_csv(std::ostream& out, const CompositionMatrix& data, std::span<const int> labels) {
  if (labels.size() != data.n_samples()) throw InvalidInput("dataset: label count does not match sample count");
  const auto names = data.feature_names.empty() ? default_feature_names(data.n_features()) : data.feature_names;
  const auto ids = data.sample_ids.empty() ? default_sample_ids(data.n_samples()) : data.sample_ids;
  out << "sample_id";
  for (const auto& n : names) out << ',' << n;
  out << ",label\n";
  for (std::size_t i = 0; i < data.n_samples(); ++i) {
    out << ids[i];
    for (double v : data.values.row(i)) out << ',' << format_double(v);
    out << ',' << labels[i] << '\n';
  }
}

void write_dataset_csv(const std::filesystem::path& path, const CompositionMatrix& data, std::span<const int> labels) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  write_dataset_csv(out, data, labels);
}

LabeledComposition prepare_for_model(LabeledComposition in, double delta_fraction) {
  if (has_zeros(in.data.values)) in.data = replace_zeros(in.data, delta_fraction);
  return in;
}

}  // namespace deepcoda
