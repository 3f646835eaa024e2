#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "deepcoda/baselines.hpp"
#include "deepcoda/composition.hpp"
#include "deepcoda/error.hpp"
#include "deepcoda/evaluation.hpp"
#include "deepcoda/explain.hpp"
#include "deepcoda/model_io.hpp"
#include "deepcoda/network.hpp"
#include "deepcoda/synthgen.hpp"
#include "deepcoda/trainer.hpp"

namespace py = pybind11;
using namespace deepcoda;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw InvalidInput("expected a 2-D array");
  Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), m.data().begin());
  return m;
}

std::vector<double> to_vector(const Array& a) {
  if (a.ndim() != 1) throw InvalidInput("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

std::vector<int> to_labels(const IntArray& a) {
  if (a.ndim() != 1) throw InvalidInput("labels must be a 1-D array");
  return {a.data(), a.data() + a.size()};
}

py::array_t<double> from_matrix(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

py::array_t<double> from_vector(const std::vector<double>& v) {
  py::array_t<double> out(v.size());
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::array_t<int> from_labels(const std::vector<int>& v) {
  py::array_t<int> out(v.size());
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

py::dict synthetic_dict(const SyntheticDataset& ds) {
  py::dict d;
  d["absolute"] = from_matrix(ds.absolute.values);
  d["relative"] = from_matrix(ds.relative.values);
  d["labels"] = from_labels(ds.labels);
  d["constant_feature_index"] = ds.constant_feature_index;
  return d;
}

py::dict trace_dict(const ForwardTrace& t) {
  py::dict d;
  d["z"] = from_vector(t.z);
  d["w"] = from_vector(t.w);
  d["s"] = t.s;
  d["yhat"] = t.yhat;
  return d;
}

}  // namespace

PYBIND11_MODULE(_deepcoda, m) {
  m.doc() = "Log-contrast bottleneck networks with a self-explanation head for compositional data";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  auto numeric = py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<TrainingDiverged>(m, "TrainingDiverged", numeric.ptr());

  // composition
  m.def("closure", [](const Array& v) { return from_vector(closure(to_vector(v))); }, py::arg("v"));
  m.def("clr", [](const Array& x) {
    if (x.ndim() == 2) return from_matrix(clr_rows(to_matrix(x)));
    return from_vector(clr(to_vector(x)));
  }, py::arg("x"), "Centered log-ratio of a vector, or of each row of a matrix.");
  m.def("replace_zeros", [](const Array& x, double delta_fraction) {
    CompositionMatrix c;
    c.values = to_matrix(x);
    return from_matrix(replace_zeros(c, delta_fraction).values);
  }, py::arg("x"), py::arg("delta_fraction") = 0.5);
  m.def("log_contrast", [](const Array& x, const Array& beta, double beta0) {
    return log_contrast(to_vector(x), to_vector(beta), beta0);
  }, py::arg("x"), py::arg("beta"), py::arg("beta0") = 0.0);

  // synthetic data
  m.def("gen_toy", [](std::size_t n, std::uint64_t seed) { return synthetic_dict(gen_toy(n, seed)); },
        py::arg("n_samples") = 1000, py::arg("seed") = 0);
  m.def("gen_cmyc", [](std::size_t n, std::uint64_t seed) { return synthetic_dict(gen_cmyc(n, seed)); },
        py::arg("n_samples") = 1000, py::arg("seed") = 0);

  // model
  py::class_<DeepCodaParams>(m, "Model")
      .def_property_readonly("head", [](const DeepCodaParams& p) { return std::string(to_string(p.head)); })
      .def_property_readonly("n_features", &DeepCodaParams::n_features)
      .def_property_readonly("n_bottlenecks", &DeepCodaParams::n_bottlenecks)
      .def_property_readonly("beta", [](const DeepCodaParams& p) { return from_matrix(p.beta); })
      .def_property_readonly("beta0", [](const DeepCodaParams& p) { return from_vector(p.beta0); })
      .def_property_readonly("constraint_residuals",
                             [](const DeepCodaParams& p) { return from_vector(p.constraint_residuals()); })
      .def("forward", [](const DeepCodaParams& p, const Array& x) { return trace_dict(forward(p, to_vector(x))); },
           py::arg("x"))
      .def("predict_proba",
           [](const DeepCodaParams& p, const Array& x) { return from_vector(predict_proba(p, to_matrix(x))); },
           py::arg("x"))
      .def("save", [](const DeepCodaParams& p, const std::string& path) { save_params(path, p); }, py::arg("path"))
      .def_static("load", [](const std::string& path) { return load_params(path); }, py::arg("path"))
      .def(py::self == py::self);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("n_bottlenecks", &TrainConfig::n_bottlenecks)
      .def_readwrite("lambda_c", &TrainConfig::lambda_c)
      .def_readwrite("lambda_s", &TrainConfig::lambda_s)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_property(
          "head", [](const TrainConfig& c) { return std::string(to_string(c.head)); },
          [](TrainConfig& c, const std::string& h) { c.head = parse_head(h); });

  m.def("train", [](const Array& x, const IntArray& y, const TrainConfig& cfg) {
    const Matrix xm = to_matrix(x);
    const auto labels = to_labels(y);
    TrainReport rep;
    {
      py::gil_scoped_release release;
      rep = train(xm, labels, cfg);
    }
    py::dict d;
    d["model"] = rep.params;
    d["loss_history"] = from_vector(rep.loss_history);
    d["constraint_residuals"] = from_vector(rep.final_constraint_residuals);
    return d;
  }, py::arg("x"), py::arg("y"), py::arg("config") = TrainConfig{});

  // evaluation and baselines
  m.def("auc", [](const Array& s, const IntArray& y) { return auc(to_vector(s), to_labels(y)); }, py::arg("scores"),
        py::arg("labels"));
  m.def("lasso_fit", [](const Array& x, const IntArray& y, double lambda, bool standardize) {
    LassoOptions opts;
    opts.standardize = standardize;
    const auto model = lasso_logistic_fit(to_matrix(x), to_labels(y), lambda, opts);
    py::dict d;
    d["coef"] = from_vector(model.coef);
    d["intercept"] = model.intercept;
    d["lambda"] = model.lambda;
    return d;
  }, py::arg("x"), py::arg("y"), py::arg("lam"), py::arg("standardize") = true);
  m.def("lasso_baseline", [](const Array& x, const IntArray& y, const std::string& transform, std::size_t n_folds,
                             std::uint64_t seed) {
    CvOptions cv;
    cv.n_folds = n_folds;
    cv.seed = seed;
    const auto model = fit_lasso_baseline(to_matrix(x), to_labels(y), parse_transform(transform), cv);
    py::dict d;
    d["coef"] = from_vector(model.coef);
    d["intercept"] = model.intercept;
    d["lambda"] = model.lambda;
    d["scaled_magnitudes"] = from_vector(minmax_scaled_magnitudes(model.coef));
    return d;
  }, py::arg("x"), py::arg("y"), py::arg("transform") = "none", py::arg("n_folds") = 5, py::arg("seed") = 0);

  // explanations
  m.def("explain_sample", [](const DeepCodaParams& p, const Array& x) {
    const auto e = explain_sample(p, to_vector(x), "");
    py::dict d;
    d["z"] = from_vector(e.z);
    d["w"] = from_vector(e.w);
    d["products"] = from_vector(e.products);
    d["prediction"] = e.prediction;
    d["decision"] = static_cast<int>(e.decision);
    return d;
  }, py::arg("model"), py::arg("x"));
  m.def("decide", [](const Array& products) { return static_cast<int>(decide(to_vector(products))); },
        py::arg("products"), "1 when the product scores sum above zero, else 0.");
  m.def("weight_contrast_correlation", [](const Array& w, const Array& z) {
    const auto c = weight_contrast_correlation(to_matrix(w), to_matrix(z));
    py::dict d;
    d["pearson"] = from_matrix(c.pearson);
    d["canonical"] = from_vector(c.canonical);
    d["constant_w"] = c.constant_w;
    d["constant_z"] = c.constant_z;
    return d;
  }, py::arg("w"), py::arg("z"));
}
