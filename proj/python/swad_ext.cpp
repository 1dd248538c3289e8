#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>

#include "swad/autoencoder.hpp"
#include "swad/checkpoint.hpp"
#include "swad/config.hpp"
#include "swad/detector.hpp"
#include "swad/error.hpp"
#include "swad/metrics.hpp"
#include "swad/pipeline.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

swad::Matrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw swad::DimensionError("expected a 2-d array");
  const auto rows = static_cast<std::size_t>(a.shape(0));
  const auto cols = static_cast<std::size_t>(a.shape(1));
  return swad::Matrix(rows, cols, std::vector<double>(a.data(), a.data() + rows * cols));
}

Array to_array(const swad::Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

swad::ScoreSet score_set(std::vector<double> scores, std::vector<int> labels) {
  return swad::ScoreSet{std::move(scores), std::move(labels)};
}

swad::WeightingConfig weighting(const swad::Checkpoint& c, std::size_t k, double tau) {
  if (k == c.model.latent_dim() && !c.stage2) {
    auto cfg = swad::WeightingConfig::all_features(k);
    cfg.tau = tau;
    return cfg;
  }
  if (!c.stage2) throw swad::ValueError("k < latent_dim needs a stage-2 checkpoint");
  return swad::WeightingConfig::from_mask(c.stage2->mask, k, tau);
}

}  // namespace

PYBIND11_MODULE(_swad, m) {
  m.doc() = "Autoencoder anomaly detection with a learned latent feature mask";

  auto base = py::register_exception<swad::Error>(m, "SwadError");
  py::register_exception<swad::DimensionError>(m, "DimensionError", base);
  py::register_exception<swad::ValueError>(m, "InvalidValue", PyExc_ValueError);
  py::register_exception<swad::DataError>(m, "DataError", base);
  py::register_exception<swad::ConfigError>(m, "ConfigError", base);
  py::register_exception<swad::NumericError>(m, "NumericError", base);

  m.def("auc", [](std::vector<double> s, std::vector<int> y) { return swad::auc(score_set(s, y)); },
        py::arg("scores"), py::arg("labels"),
        "Probability that an abnormal (label 1) sample outscores a normal one, ties counted half.");
  m.def("fit_threshold",
        [](std::vector<double> s, std::vector<int> y) { return swad::fit_threshold(score_set(s, y)).epsilon_0; },
        py::arg("scores"), py::arg("labels"));

  m.def("config_hash", [](const std::filesystem::path& p) { return swad::load_config(p).hash(); },
        py::arg("path"));

  py::class_<swad::Checkpoint>(m, "Checkpoint")
      .def_static("load", &swad::load_checkpoint, py::arg("dir"))
      .def("save", [](const swad::Checkpoint& c, const std::filesystem::path& d) { swad::save_checkpoint(d, c); },
           py::arg("dir"))
      .def_readonly("seed", &swad::Checkpoint::seed)
      .def_readonly("config_hash", &swad::Checkpoint::config_hash)
      .def_property_readonly("stage", &swad::Checkpoint::stage)
      .def_property_readonly("input_dim", [](const swad::Checkpoint& c) { return c.model.input_dim(); })
      .def_property_readonly("latent_dim", [](const swad::Checkpoint& c) { return c.model.latent_dim(); })
      .def_property_readonly("mask",
                             [](const swad::Checkpoint& c) -> std::optional<std::vector<double>> {
                               if (!c.stage2) return std::nullopt;
                               return c.stage2->mask.values();
                             })
      .def_property_readonly("ranking",
                             [](const swad::Checkpoint& c) -> std::optional<std::vector<std::size_t>> {
                               if (!c.stage2) return std::nullopt;
                               return c.stage2->mask.ranking();
                             })
      .def("encode", [](const swad::Checkpoint& c, const Array& x) { return to_array(swad::encode(c.model, to_matrix(x))); },
           py::arg("x"))
      .def("reconstruction_errors",
           [](const swad::Checkpoint& c, const Array& x) { return swad::reconstruction_errors(c.model, to_matrix(x)); },
           py::arg("x"))
      .def("score",
           [](const swad::Checkpoint& c, const Array& x, std::size_t k, double tau) {
             return swad::score(c.model, weighting(c, k, tau), to_matrix(x)).errors;
           },
           py::arg("x"), py::arg("k"), py::arg("tau"),
           "Reconstruction errors with latent features outside the top k scaled by tau.");

  m.def("train",
        [](const std::filesystem::path& config, std::uint64_t seed, std::optional<int> normal_class) {
          swad::RunConfig cfg = swad::load_config(config);
          if (normal_class) cfg.dataset.normal_class = *normal_class;
          cfg.validate();
          py::gil_scoped_release release;
          return swad::train_seed(cfg, swad::load_datasets(cfg.dataset), seed).checkpoint;
        },
        py::arg("config"), py::arg("seed"), py::arg("normal_class") = py::none(),
        "Trains both stages for one seed and returns the checkpoint.");
}
