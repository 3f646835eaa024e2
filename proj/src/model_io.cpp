#include "deepcoda/model_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "deepcoda/error.hpp"
#include "deepcoda/text.hpp"

namespace deepcoda {

namespace {

constexpr const char* kFormatTag = "deepcoda-params 1";

void write_values(std::ostream& out, const char* key, const std::vector<double>& values) {
  out << key << " =";
  for (double v : values) out << ' ' << format_double(v);
  out << '\n';
}

std::vector<double> parse_values(const std::string& key, const std::string& text, std::size_t expected) {
  std::vector<double> values;
  for (const auto& token : split_whitespace(text)) values.push_back(parse_double(token, key));
  if (values.size() != expected) {
    throw InvalidInput("model: key '" + key + "' has " + std::to_string(values.size()) + " values, expected " +
                       std::to_string(expected));
  }
  return values;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_params(std::ostream& out, const DeepCodaParams& p) {
  p.validate();
  out << "# deepcoda model\n";
  out << "format = " << kFormatTag << '\n';
  out << "dims = " << p.n_features() << ' ' << p.n_bottlenecks() << ' ' << p.n_hidden() << '\n';
  out << "head = " << to_string(p.head) << '\n';
  write_values(out, "beta", p.beta.data());
  write_values(out, "beta0", p.beta0);
  write_values(out, "mlp_w1", p.mlp_w1.data());
  write_values(out, "mlp_b1", p.mlp_b1);
  write_values(out, "mlp_w2", p.mlp_w2.data());
  write_values(out, "mlp_b2", p.mlp_b2);
  write_values(out, "linear_v", p.linear_v);
  write_values(out, "linear_v0", {p.linear_v0});
}

DeepCodaParams read_params(std::istream& in) {
  const auto entries = parse_key_values(in, "model");
  auto get = [&entries](const std::string& key) -> const std::string& {
    auto it = entries.find(key);
    if (it == entries.end()) throw InvalidInput("model: missing key '" + key + "'");
    return it->second;
  };
  static const char* const kKnown[] = {"format", "dims",   "head",   "beta",     "beta0",    "mlp_w1",
                                       "mlp_b1", "mlp_w2", "mlp_b2", "linear_v", "linear_v0"};
  for (const auto& [key, value] : entries) {
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) throw InvalidInput("model: unknown key '" + key + "'");
  }
  if (trim(get("format")) != kFormatTag) throw InvalidInput("model: unsupported format '" + get("format") + "'");

  const auto dims = split_whitespace(get("dims"));
  if (dims.size() != 3) throw InvalidInput("model: dims needs 3 values");
  const std::size_t d = parse_size(dims[0], "dims");
  const std::size_t b = parse_size(dims[1], "dims");
  const std::size_t h = parse_size(dims[2], "dims");

  DeepCodaParams p = DeepCodaParams::zeros(d, b, h, parse_head(trim(get("head"))));
  p.beta.data() = parse_values("beta", get("beta"), d * b);
  p.beta0 = parse_values("beta0", get("beta0"), b);
  p.mlp_w1.data() = parse_values("mlp_w1", get("mlp_w1"), b * h);
  p.mlp_b1 = parse_values("mlp_b1", get("mlp_b1"), h);
  p.mlp_w2.data() = parse_values("mlp_w2", get("mlp_w2"), h * b);
  p.mlp_b2 = parse_values("mlp_b2", get("mlp_b2"), b);
  p.linear_v = parse_values("linear_v", get("linear_v"), b);
  p.linear_v0 = parse_values("linear_v0", get("linear_v0"), 1)[0];
  p.validate();
  return p;
}

void save_params(const std::filesystem::path& path, const DeepCodaParams& p) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot open '" + path.string() + "' for writing");
  write_params(out, p);
  if (!out) throw InvalidInput("failed writing '" + path.string() + "'");
}

DeepCodaParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open model file '" + path.string() + "'");
  return read_params(in);
}

}  // namespace deepcoda
