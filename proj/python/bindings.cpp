#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "homesense/config.hpp"
#include "homesense/event_io.hpp"
#include "homesense/experiment.hpp"
#include "homesense/simulator.hpp"

namespace py = pybind11;
using namespace homesense;

namespace {

py::object to_py(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

nlohmann::json from_py(const py::object& o) {
  return nlohmann::json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

RunConfig config_from(const std::optional<py::dict>& config) {
  return config ? run_config_from_json(from_py(*config)) : RunConfig::defaults();
}

double seconds(Tick t) { return static_cast<double>(t) / kTicksPerSecond; }

py::list intervals_of(const LabelTrack& y) {
  py::list out;
  for (const auto& iv : y.intervals) out.append(py::make_tuple(iv.start, iv.end));
  return out;
}

py::dict track_dict(const LabelTrack& y) {
  py::dict d;
  d["unit_seconds"] = y.unit_seconds;
  d["length"] = y.length;
  d["intervals"] = intervals_of(y);
  return d;
}

std::vector<std::uint8_t> as_bits(const std::vector<int>& y) {
  std::vector<std::uint8_t> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = y[i] != 0;
  return out;
}

py::object optional_value(const std::optional<double>& v) { return v ? py::cast(*v) : py::none(); }

py::dict report_dict(const ScoreReport& r) {
  py::dict out;
  out["raw_precision"] = optional_value(r.raw_precision);
  out["raw_recall"] = optional_value(r.raw_recall);
  out["interval_precision"] = optional_value(r.interval_precision);
  out["sensitivity"] = optional_value(r.sensitivity);
  out["far_per_day"] = r.far_per_day;
  out["mal"] = optional_value(r.mal);
  out["true_intervals"] = r.true_intervals;
  out["predicted_intervals"] = r.predicted_intervals;
  return out;
}

LabelTrack track_from_dict(const py::dict& d) {
  LabelTrack y;
  y.unit_seconds = d["unit_seconds"].cast<std::int64_t>();
  y.length = d["length"].cast<std::int64_t>();
  for (auto iv : d["intervals"]) {
    auto pair = iv.cast<std::pair<std::int64_t, std::int64_t>>();
    y.append({pair.first, pair.second});
  }
  return y;
}

std::vector<int> as_ints(const LabelTrack& y) {
  auto dense = y.to_dense();
  return {dense.begin(), dense.end()};
}


struct PyResult {
  SimulationResult result;
  SensorLayout layout;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Smart-home resident simulator and anomaly detection pipeline";

  m.def("default_config", [] { return to_py(to_json(RunConfig::defaults())); }, "Default run configuration as a dict.");
  m.def("config_hash", [](py::dict config) { return config_hash(run_config_from_json(from_py(config))); },
        py::arg("config"));
  m.def("theta_for",
        [](double mu, double sigma, double c, const std::string& direction) {
          if (direction != "above" && direction != "below") throw py::value_error("direction must be above or below");
          return ThresholdDetector::theta_for(mu, sigma, c, direction == "above" ? Direction::Above : Direction::Below);
        },
        py::arg("mu"), py::arg("sigma"), py::arg("c"), py::arg("direction") = "above");

  py::class_<PyResult>(m, "SimulationResult")
      .def_property_readonly("horizon_days", [](const PyResult& r) { return r.result.horizon_days; })
      .def_property_readonly("event_count", [](const PyResult& r) { return r.result.event_count; })
      .def_property_readonly("activation_count", [](const PyResult& r) { return r.result.activation_count; })
      .def_property_readonly("warnings", [](const PyResult& r) { return r.result.warnings; })
      .def_property_readonly("events",
                             [](const PyResult& r) {
                               py::list out;
                               for (const auto& e : r.result.events)
                                 out.append(py::make_tuple(seconds(e.time), e.sensor_id, e.on ? 1 : 0));
                               return out;
                             })
      .def_property_readonly("episodes",
                             [](const PyResult& r) {
                               py::list out;
                               for (const auto& e : r.result.episodes)
                                 out.append(py::make_tuple(to_string(e.kind), seconds(e.start), seconds(e.end)));
                               return out;
                             })
      .def("events_csv",
           [](const PyResult& r) {
             std::ostringstream out;
             write_events(r.result.events, out);
             return py::bytes(out.str());
           })
      .def("labels", [](const PyResult& r) {
        py::dict out;
        for (const auto& [kind, track] : labels_from_episodes(r.result.episodes, r.result.horizon_days))
          out[to_string(kind)] = track_dict(track);
        return out;
      });

  m.def("simulate",
        [](std::optional<py::dict> config, std::optional<std::uint64_t> seed, std::optional<int> days) {
          RunConfig cfg = config_from(config);
          if (seed) cfg.simulation.seed = *seed;
          if (days) cfg.simulation.horizon_days = *days;
          cfg.validate();
          PyResult r;
          {
            py::gil_scoped_release release;
            r.result = simulate(cfg.simulation);
          }
          r.layout = cfg.simulation.layout;
          return r;
        },
        py::arg("config") = py::none(), py::arg("seed") = py::none(), py::arg("days") = py::none());

  py::class_<Observations>(m, "Observations")
      .def(py::init([](const PyResult& r) { return Observations(r.result.events, r.layout, r.result.horizon_days); }),
           py::arg("result"))
      .def_static("from_events_csv",
                  [](const std::string& text, int days, std::optional<py::dict> config) {
                    std::istringstream in(text);
                    return Observations(read_events(in), config_from(config).simulation.layout, days);
                  },
                  py::arg("text"), py::arg("days"), py::arg("config") = py::none())
      .def_property_readonly("days", &Observations::days)
      .def("daily", [](Observations& o) {
        const auto& d = o.daily();
        py::dict out;
        out["sleep_hours"] = d.sleep_hours;
        out["outings"] = d.outings;
        return out;
      });

  py::class_<Model>(m, "Model")
      .def_property_readonly("anomaly", [](const Model& x) { return std::string(to_string(x.anomaly)); })
      .def_property_readonly("method", [](const Model& x) { return std::string(to_string(x.method)); })
      .def_property_readonly("unit_seconds", [](const Model& x) { return x.unit_seconds; })
      .def_property_readonly("denoise_threshold", [](const Model& x) { return x.denoise_threshold; })
      .def_property_readonly("theta",
                             [](const Model& x) { return x.threshold ? py::cast(x.threshold->theta) : py::none(); })
      .def("to_json", [](const Model& x) { return model_to_json(x).dump(); })
      .def_static("from_json", [](const std::string& s) { return model_from_json(nlohmann::json::parse(s)); });

  m.def("train",
        [](const std::string& anomaly, const std::string& method, Observations& obs, const PyResult& truth,
           std::uint64_t seed) {
          auto labels = labels_from_episodes(truth.result.episodes, obs.days());
          return train_model(anomaly_kind_from_string(anomaly), method_from_string(method), obs, labels, seed);
        },
        py::arg("anomaly"), py::arg("method"), py::arg("observations"), py::arg("truth"), py::arg("seed") = 1);

  m.def("detect",
        [](const Model& model, Observations& obs, std::optional<std::int64_t> denoise_threshold) {
          return track_dict(detect(model, obs, denoise_threshold));
        },
        py::arg("model"), py::arg("observations"), py::arg("denoise") = py::none());

  m.def("label_intervals",
        [](const std::vector<int>& y) {
          auto bits = as_bits(y);
          py::list out;
          for (const auto& iv : label_intervals(bits)) out.append(py::make_tuple(iv.start, iv.end));
          return out;
        },
        py::arg("y"));

  m.def("denoise",
        [](const std::vector<int>& y, std::int64_t threshold) {
          auto bits = as_bits(y);
          return as_ints(denoise(LabelTrack::from_dense(bits), threshold));
        },
        py::arg("y"), py::arg("threshold"));

  m.def("score",
        [](const std::vector<int>& truth, const std::vector<int>& pred, double days) {
          if (truth.size() != pred.size()) throw py::value_error("truth and prediction lengths differ");
          auto t = as_bits(truth), p = as_bits(pred);
          return report_dict(score(LabelTrack::from_dense(t), LabelTrack::from_dense(p), days));
        },
        py::arg("truth"), py::arg("pred"), py::arg("days"));
  m.def("score",
        [](const py::dict& truth, const py::dict& pred, double days) {
          try {
            return report_dict(score(track_from_dict(truth), track_from_dict(pred), days));
          } catch (const std::invalid_argument& e) {
            throw py::value_error(e.what());
          }
        },
        py::arg("truth"), py::arg("pred"), py::arg("days"));
}
