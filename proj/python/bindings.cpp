#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "motivsim/cli.h"
#include "motivsim/experiments.h"
#include "motivsim/features.h"
#include "motivsim/learner.h"
#include "motivsim/motivation.h"
#include "motivsim/report.h"
#include "motivsim/run_dir.h"

namespace py = pybind11;
using namespace motivsim;

namespace {

std::vector<std::vector<double>> weight_rows(const WeightTable& w) {
  std::vector<std::vector<double>> rows;
  for (Action a : kActions) rows.emplace_back(w.row(a).begin(), w.row(a).end());
  return rows;
}

WeightTable weights_from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.size() != kNumActions) throw py::value_error("expected one row per action (5)");
  WeightTable w(rows[0].size());
  for (std::size_t a = 0; a < kNumActions; ++a) {
    if (rows[a].size() != w.feature_count()) throw py::value_error("ragged weight rows");
    std::copy(rows[a].begin(), rows[a].end(), w.row(kActions[a]).begin());
  }
  return w;
}

GridConfig grid_for(const ExperimentConfig& c) { return default_layout().grid(c.recharge_scheme); }

}  // namespace

PYBIND11_MODULE(_motivsim, m) {
  m.doc() = "Homeostatic drive-reduction agents in a recharge-station grid world";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_ArithmeticError);
  py::register_exception<RunDirError>(m, "RunDirError", PyExc_FileExistsError);

  py::enum_<Action>(m, "Action")
      .value("Stop", Action::Stop)
      .value("Up", Action::Up)
      .value("Down", Action::Down)
      .value("Left", Action::Left)
      .value("Right", Action::Right);
  py::enum_<Metabolism>(m, "Metabolism")
      .value("Slow", Metabolism::Slow)
      .value("Regular", Metabolism::Regular)
      .value("Fast", Metabolism::Fast);
  py::enum_<RechargeScheme>(m, "RechargeScheme")
      .value("Same", RechargeScheme::Same)
      .value("Different", RechargeScheme::Different);
  py::enum_<RewardModel>(m, "RewardModel")
      .value("M1", RewardModel::M1)
      .value("M2", RewardModel::M2);

  py::class_<AgentState>(m, "AgentState")
      .def(py::init<int, int, double>(), py::arg("x"), py::arg("y"), py::arg("energy"))
      .def_readwrite("x", &AgentState::x)
      .def_readwrite("y", &AgentState::y)
      .def_readwrite("energy", &AgentState::energy)
      .def(py::self == py::self)
      .def("__repr__", [](const AgentState& s) {
        std::ostringstream o;
        o << "AgentState(x=" << s.x << ", y=" << s.y << ", energy=" << s.energy << ")";
        return o.str();
      });

  py::class_<StationSpec>(m, "StationSpec")
      .def_property_readonly("id", [](const StationSpec& s) { return std::string(1, s.id); })
      .def_property_readonly("cells",
                             [](const StationSpec& s) {
                               return py::make_tuple(s.region.x0, s.region.y0, s.region.x1,
                                                     s.region.y1);
                             })
      .def_readonly("recharge_rate", &StationSpec::recharge_rate)
      .def_readonly("hedonic_value", &StationSpec::hedonic_value);

  py::class_<GridConfig>(m, "GridConfig")
      .def_readonly("width", &GridConfig::width)
      .def_readonly("height", &GridConfig::height)
      .def_readonly("stations", &GridConfig::stations)
      .def_readonly("detection_range", &GridConfig::detection_range)
      .def_readonly("battery_max", &GridConfig::battery_max);

  m.def(
      "default_grid",
      [](RechargeScheme scheme) { return default_layout().grid(scheme); },
      py::arg("scheme") = RechargeScheme::Same);
  m.def(
      "grid_from_layout_json",
      [](const std::string& text, RechargeScheme scheme) {
        auto g = parse_layout(text).grid(scheme);
        g.validate();
        return g;
      },
      py::arg("text"), py::arg("scheme") = RechargeScheme::Same);

  m.def(
      "step",
      [](const AgentState& s, Action a, Metabolism met, const GridConfig& g) {
        const auto out = step(s, a, metabolism_profile(met), g);
        py::object contact = py::none();
        if (out.station_contact) contact = py::int_(*out.station_contact);
        return py::make_tuple(out.next_state, contact, out.terminated);
      },
      py::arg("state"), py::arg("action"), py::arg("metabolism"), py::arg("grid"),
      "Returns (next_state, station_index_or_None, terminated).");

  m.def(
      "drive", [](double energy) { return drive(energy).value; }, py::arg("energy"));
  m.def(
      "reward_m1", [](double d) { return reward_m1(Drive{d}); }, py::arg("drive"));
  m.def(
      "reward_m2",
      [](double d, std::optional<std::size_t> station, const GridConfig& g) {
        return reward_m2(Drive{d}, station, g.stations);
      },
      py::arg("drive"), py::arg("station"), py::arg("grid"));

  m.def(
      "features",
      [](const AgentState& s, const GridConfig& g, bool signed_drive) {
        return encode(s, drive(s.energy), g, FeatureOptions{signed_drive});
      },
      py::arg("state"), py::arg("grid"), py::arg("signed_drive") = false);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readonly("id", &ExperimentConfig::id)
      .def_readonly("reward_model", &ExperimentConfig::reward_model)
      .def_readonly("metabolism", &ExperimentConfig::metabolism)
      .def_readonly("recharge_scheme", &ExperimentConfig::recharge_scheme)
      .def_readonly("training_episodes", &ExperimentConfig::training_episodes)
      .def_readwrite("test_episodes", &ExperimentConfig::test_episodes)
      .def_readwrite("max_train_steps", &ExperimentConfig::max_train_steps)
      .def_readwrite("max_test_steps", &ExperimentConfig::max_test_steps)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("suite_seed", &ExperimentConfig::suite_seed)
      .def("set_training_episodes",
           [](ExperimentConfig& c, int n) { set_training_episodes(c, n); });

  m.def("build_config", &build_config, py::arg("experiment_id"), py::arg("seed"));
  m.def("experiment_ids", &experiment_ids);

  py::class_<EpisodeLog>(m, "EpisodeLog")
      .def_readonly("episode", &EpisodeLog::episode)
      .def_readonly("cumulative_reward", &EpisodeLog::cumulative_reward)
      .def_readonly("steps", &EpisodeLog::steps)
      .def_readonly("died", &EpisodeLog::died)
      .def_readonly("contact_steps", &EpisodeLog::contact_steps)
      .def_property_readonly("drives", [](const EpisodeLog& l) {
        std::vector<double> d;
        d.reserve(l.trace.size());
        for (const auto& r : l.trace) d.push_back(r.drive);
        return d;
      });

  py::class_<TrainingResult>(m, "TrainingResult")
      .def_property_readonly("weights",
                             [](const TrainingResult& r) { return weight_rows(r.weights); })
      .def_readonly("episodes", &TrainingResult::episodes)
      .def_property_readonly("visits", [](const TrainingResult& r) { return r.visits.counts; });

  m.def(
      "train",
      [](const ExperimentConfig& c) {
        const GridConfig g = grid_for(c);
        py::gil_scoped_release release;
        return run_training(c, g);
      },
      py::arg("config"), "Trains on the default layout.");

  m.def(
      "test",
      [](const ExperimentConfig& c, const std::vector<std::vector<double>>& rows) {
        const GridConfig g = grid_for(c);
        const WeightTable w = weights_from_rows(rows);
        const auto inits = reachable_starts(c, g, static_cast<std::size_t>(c.test_episodes));
        py::gil_scoped_release release;
        return run_test(c, g, w, inits);
      },
      py::arg("config"), py::arg("weights"), "Greedy test runs from the shared start cells.");

  m.def(
      "occupancy",
      [](const std::vector<EpisodeLog>& logs, std::size_t first, std::size_t last) {
        return occupancy_by_station(logs, first, last);
      },
      py::arg("logs"), py::arg("first"), py::arg("last"));
  m.def(
      "drive_summary", [](const std::vector<EpisodeLog>& logs) { return drive_summary(logs); },
      py::arg("logs"));
  m.def(
      "window_stats",
      [](const std::vector<EpisodeLog>& logs, std::size_t window) {
        std::vector<py::dict> out;
        for (const auto& s : window_stats(logs, window)) {
          py::dict d;
          d["window"] = s.window;
          d["episodes"] = s.episodes;
          d["mean_reward"] = s.mean_reward;
          d["std_reward"] = s.std_reward;
          d["mean_steps"] = s.mean_steps;
          d["std_steps"] = s.std_steps;
          out.push_back(std::move(d));
        }
        return out;
      },
      py::arg("logs"), py::arg("window") = 100);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> argv{"motivsim"};
        argv.insert(argv.end(), args.begin(), args.end());
        std::ostringstream out;
        std::ostringstream err;
        int code = 0;
        {
          py::gil_scoped_release release;
          code = cli::run(argv, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line tool in-process; returns (code, stdout, stderr).");
}
