#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <cstring>

#include "mde/data.hpp"
#include "mde/encoders.hpp"
#include "mde/error.hpp"
#include "mde/font.hpp"
#include "mde/json_io.hpp"
#include "mde/probe.hpp"
#include "mde/stats.hpp"

namespace py = pybind11;
using namespace mde;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using IntArray = py::array_t<int, py::array::c_style | py::array::forcecast>;

Matrix to_matrix(const RealArray& a) {
  if (a.ndim() != 2) throw ShapeError("expected a 2-D array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return Matrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

py::array_t<double> from_matrix(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.values().begin(), m.values().end(), out.mutable_data());
  return out;
}

py::array_t<std::uint8_t> from_canvas(const Canvas& c) {
  py::array_t<std::uint8_t> out({c.height(), c.width()});
  std::memcpy(out.mutable_data(), c.pixels().data(), c.pixels().size());
  return out;
}

std::vector<double> to_vector(const RealArray& a) {
  if (a.ndim() != 1) throw ShapeError("expected a 1-D array");
  return {a.data(), a.data() + a.size()};
}

EncoderParams make_params(double l, double u, std::pair<int, int> size, std::size_t igtd_iters,
                          std::size_t igtd_patience, std::uint64_t seed) {
  EncoderParams p;
  p.l = l;
  p.u = u;
  p.size = {size.first, size.second};
  p.igtd.max_iters = igtd_iters;
  p.igtd.patience = igtd_patience;
  p.igtd.seed = seed;
  return p;
}

py::dict ftest_dict(const FTestResult& r) {
  py::dict d;
  d["F"] = r.f;
  d["p_value"] = r.p_value;
  d["significant"] = r.significant;
  d["degenerate"] = r.degenerate;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tabular-to-image encoders, 1-NN probe and comparison statistics";

  auto base = py::register_exception<Error>(m, "MdeError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<UnsupportedFeatureError>(m, "UnsupportedFeatureError", base.ptr());
  py::register_exception<MissingColumnError>(m, "MissingColumnError", base.ptr());
  py::register_exception<EmptyDatasetError>(m, "EmptyDatasetError", base.ptr());
  py::register_exception<StratificationError>(m, "StratificationError", base.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<FitError>(m, "FitError", base.ptr());
  py::register_exception<ShapeError>(m, "ShapeError", base.ptr());
  py::register_exception<StateError>(m, "StateError", base.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<MetricError>(m, "MetricError", base.ptr());
  py::register_exception<InsufficientDataError>(m, "InsufficientDataError", base.ptr());

  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](const RealArray& X, const IntArray& y, std::vector<std::string> class_names,
                       std::vector<std::string> feature_names, std::string name) {
             Dataset ds;
             ds.X = to_matrix(X);
             ds.y.assign(y.data(), y.data() + y.size());
             ds.class_names = std::move(class_names);
             ds.feature_names = std::move(feature_names);
             if (ds.feature_names.empty()) {
               for (std::size_t c = 0; c < ds.n_features(); ++c) ds.feature_names.push_back("f" + std::to_string(c));
             }
             if (ds.class_names.empty()) {
               const int top = ds.y.empty() ? -1 : *std::max_element(ds.y.begin(), ds.y.end());
               for (int c = 0; c <= top; ++c) ds.class_names.push_back(std::to_string(c));
             }
             ds.name = std::move(name);
             ds.validate();
             return ds;
           }),
           py::arg("X"), py::arg("y"), py::arg("class_names") = std::vector<std::string>{},
           py::arg("feature_names") = std::vector<std::string>{}, py::arg("name") = "")
      .def_readwrite("name", &Dataset::name)
      .def_property_readonly("X", [](const Dataset& d) { return from_matrix(d.X); })
      .def_property_readonly("y", [](const Dataset& d) { return py::array_t<int>(d.y.size(), d.y.data()); })
      .def_readonly("feature_names", &Dataset::feature_names)
      .def_readonly("class_names", &Dataset::class_names)
      .def_readonly("dropped_rows", &Dataset::dropped_rows)
      .def_property_readonly("n_instances", &Dataset::n_instances)
      .def_property_readonly("n_features", &Dataset::n_features)
      .def_property_readonly("n_classes", &Dataset::n_classes)
      .def("__repr__", [](const Dataset& d) {
        return "<Dataset '" + d.name + "' " + std::to_string(d.n_instances()) + "x" + std::to_string(d.n_features()) +
               ", " + std::to_string(d.n_classes()) + " classes>";
      });

  m.def("load_keel", &load_keel, py::arg("path"));
  m.def("load_dataset", &load_dataset, py::arg("path"));
  m.def(
      "load_csv",
      [](const std::filesystem::path& path, const py::object& label) {
        if (label.is_none()) return load_dataset(path);
        if (py::isinstance<py::int_>(label)) return load_csv(path, ColumnRef{label.cast<std::size_t>()});
        return load_csv(path, ColumnRef{label.cast<std::string>()});
      },
      py::arg("path"), py::arg("label") = py::none());
  m.def("generate_synthetic", &generate_synthetic, py::arg("n_samples"), py::arg("n_features"), py::arg("seed") = 0);

  py::class_<CVPlan>(m, "CVPlan")
      .def("train_indices", &CVPlan::train_indices, py::arg("split"))
      .def("test_indices", &CVPlan::test_indices, py::arg("split"))
      .def_property_readonly("n_instances", &CVPlan::n_instances)
      .def("__eq__", [](const CVPlan& a, const CVPlan& b) { return a == b; });
  m.def("make_cv_plan", &make_cv_plan, py::arg("dataset"), py::arg("seed") = 0);

  py::class_<EncoderModel>(m, "EncoderModel")
      .def_property_readonly("kind", [](const EncoderModel& e) { return std::string(to_string(e.kind)); })
      .def_property_readonly("size", [](const EncoderModel& e) { return std::pair{e.size.width, e.size.height}; })
      .def_property_readonly("n_features", &EncoderModel::n_features)
      .def_property_readonly("fitted", &EncoderModel::fitted)
      .def("to_json", [](const EncoderModel& e) { return json(e).dump(); })
      .def_static("from_json", [](const std::string& text) {
        try {
          return json::parse(text).get<EncoderModel>();
        } catch (const json::exception& e) {
          throw ParseError(e.what(), 0);
        }
      })
      .def("__eq__", [](const EncoderModel& a, const EncoderModel& b) { return a == b; });

  m.def(
      "fit_encoder",
      [](const std::string& kind, const Dataset& ds, double l, double u, std::pair<int, int> size,
         std::size_t igtd_iters, std::size_t igtd_patience, std::uint64_t seed) {
        return fit_encoder(parse_encoder_kind(kind), ds, make_params(l, u, size, igtd_iters, igtd_patience, seed));
      },
      py::arg("kind"), py::arg("dataset"), py::arg("l") = kDefaultLower, py::arg("u") = kDefaultUpper,
      py::arg("size") = std::pair{224, 224}, py::arg("igtd_iters") = 1000, py::arg("igtd_patience") = 3,
      py::arg("seed") = 0);
  m.def(
      "encode", [](const EncoderModel& model, const RealArray& x) { return from_canvas(encode(model, to_vector(x))); },
      py::arg("model"), py::arg("x"));
  m.def(
      "encode_rows",
      [](const EncoderModel& model, const RealArray& X, unsigned jobs) {
        const auto images = [&] {
          const Matrix M = to_matrix(X);
          py::gil_scoped_release release;
          return encode_rows(model, M, jobs);
        }();
        if (images.empty()) return py::array_t<std::uint8_t>(std::vector<py::ssize_t>{0, 0, 0});
        const auto h = images.front().height(), w = images.front().width();
        py::array_t<std::uint8_t> out({static_cast<py::ssize_t>(images.size()), static_cast<py::ssize_t>(h),
                                       static_cast<py::ssize_t>(w)});
        auto* dst = out.mutable_data();
        for (const auto& c : images) dst = std::copy(c.pixels().begin(), c.pixels().end(), dst);
        return out;
      },
      py::arg("model"), py::arg("X"), py::arg("jobs") = 1);

  m.def(
      "run_cv_eval",
      [](const Dataset& ds, const std::string& target, std::uint64_t seed, double l, double u,
         std::pair<int, int> size, unsigned jobs) {
        EvalOptions opt;
        opt.params = make_params(l, u, size, 1000, 3, seed);
        opt.jobs = jobs;
        const auto plan = make_cv_plan(ds, seed);
        EvalReport r;
        {
          py::gil_scoped_release release;
          r = run_cv_eval(ds, ProbeTarget::parse(target), plan, opt);
        }
        py::dict d;
        d["dataset"] = r.dataset;
        d["encoder"] = r.encoder;
        d["per_split_bac"] = r.per_split_bac;
        d["mean_bac"] = r.mean_bac;
        d["fold_predictions"] = r.fold_predictions;
        return d;
      },
      py::arg("dataset"), py::arg("target") = "retire", py::arg("seed") = 0, py::arg("l") = kDefaultLower,
      py::arg("u") = kDefaultUpper, py::arg("size") = std::pair{224, 224}, py::arg("jobs") = 1);

  m.def(
      "balanced_accuracy",
      [](const IntArray& y_true, const IntArray& y_pred, std::size_t n_classes) {
        return balanced_accuracy({y_true.data(), static_cast<std::size_t>(y_true.size())},
                                 {y_pred.data(), static_cast<std::size_t>(y_pred.size())}, n_classes);
      },
      py::arg("y_true"), py::arg("y_pred"), py::arg("n_classes") = 0);

  m.def(
      "combined_5x2cv_f_test",
      [](const RealArray& a, const RealArray& b, double alpha) {
        const auto va = to_vector(a), vb = to_vector(b);
        return ftest_dict(combined_5x2cv_f_test(PairedCVScores::from(va, vb), alpha));
      },
      py::arg("a"), py::arg("b"), py::arg("alpha") = 0.05);
  m.def("f_distribution_sf", &f_distribution_sf, py::arg("x"), py::arg("d1"), py::arg("d2"));
  m.def(
      "wilcoxon_signed_rank",
      [](const RealArray& a, const RealArray& b, double alpha) {
        const auto va = to_vector(a), vb = to_vector(b);
        const auto r = wilcoxon_signed_rank(va, vb, alpha);
        py::dict d;
        d["W"] = r.w;
        d["W_plus"] = r.w_plus;
        d["W_minus"] = r.w_minus;
        d["p_value"] = r.p_value;
        d["significant"] = r.significant;
        d["n"] = r.n;
        d["exact"] = r.exact;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("alpha") = 0.05);
  m.def("mean_ranks", &mean_ranks, py::arg("scores"));
  m.def("format_value", &font::format_value, py::arg("value"));
}
