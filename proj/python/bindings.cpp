#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "potmo/cost_model.hpp"
#include "potmo/error.hpp"
#include "potmo/microsim.hpp"
#include "potmo/planners.hpp"
#include "potmo/scenario_io.hpp"
#include "potmo/traffic_oracle.hpp"

namespace py = pybind11;
using namespace potmo;

namespace {

py::dict label_dict(const Label& l) {
  py::dict d;
  d["path"] = l.edges;
  d["vertices"] = l.vertices;
  d["cost"] = std::vector<double>(l.cost.values().begin(), l.cost.values().end());
  d["arrival_s"] = l.arrival_s;
  return d;
}

py::dict plan_dict(const PlanResult& plan) {
  py::dict d = label_dict(plan.chosen);
  py::list front;
  for (const Label& l : plan.front) front.append(label_dict(l));
  d["front"] = front;
  d["expanded"] = plan.expanded;
  d["exact"] = plan.exact;
  return d;
}

// Planners release the GIL; they never touch Python objects.
template <class F>
py::dict plan_nogil(F&& f) {
  PlanResult r;
  {
    py::gil_scoped_release release;
    r = f();
  }
  return plan_dict(r);
}

py::dict result_dict(const ScenarioResult& r) {
  py::dict d;
  d["ard"] = r.ard;
  d["tec_wh"] = r.tec_wh;
  d["packets"] = r.comms.size();
  d["ambulance_packets"] = r.ambulance_packets;
  d["series_ambulance"] = r.series_ambulance;
  d["series_all"] = r.series_all;
  d["ambulance_routes"] = r.ambulance_routes;
  d["ambulance_arrivals"] = r.ambulance_arrivals;
  return d;
}

}  // namespace

PYBIND11_MODULE(_potmo, m) {
  m.doc() = "Multi-objective time-dependent route planning and traffic microsimulation";

  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<NoPathError> no_path_error(m, "NoPathError", PyExc_LookupError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::list failures;
      for (const auto& f : e.failures()) failures.append(f);
      py::object err = py::reinterpret_borrow<py::object>(validation_error)(e.what());
      err.attr("failures") = failures;
      py::set_error(validation_error, err);
    } catch (const NoPathError& e) {
      py::set_error(no_path_error, e.what());
    }
  });

  m.attr("DIM_NAMES") = std::vector<std::string>{"cars", "energy", "desirability", "time", "length"};

  py::class_<TemporalGraph>(m, "Graph")
      .def_static("load", &load_graph, py::arg("path"))
      .def("save", [](const TemporalGraph& g, const fs::path& p, bool costs) { save_graph(g, p, costs); },
           py::arg("path"), py::arg("include_costs") = true)
      .def_property_readonly("vertex_count", &TemporalGraph::vertex_count)
      .def_property_readonly("edge_count", &TemporalGraph::edge_count)
      .def_property_readonly("dims", &TemporalGraph::dims)
      .def_property_readonly("bin_width", &TemporalGraph::bin_width)
      .def_property_readonly("has_costs", &TemporalGraph::has_costs)
      .def("is_fifo", &TemporalGraph::is_fifo)
      .def("edge", [](const TemporalGraph& g, EdgeId e) {
        const Edge& x = g.edge(e);
        return py::dict(py::arg("id") = x.id, py::arg("src") = x.src, py::arg("dst") = x.dst,
                        py::arg("length_m") = x.length_m, py::arg("vmax_ms") = x.vmax_ms,
                        py::arg("slope_rad") = x.slope_rad);
      })
      .def("edge_cost", [](const TemporalGraph& g, EdgeId e, double t) {
        const CostVec c = g.edge_cost_at(e, t);
        return std::vector<double>(c.values().begin(), c.values().end());
      }, py::arg("edge"), py::arg("time_s") = 0.0);

  py::class_<ForecastTable>(m, "Forecast")
      .def(py::init<std::size_t, std::size_t, double>(), py::arg("vertices"), py::arg("bins"),
           py::arg("bin_width_s"))
      .def_static("load", &load_forecast, py::arg("csv"), py::arg("vertices"))
      .def("save", [](const ForecastTable& f, const fs::path& p) { save_forecast(f, p); }, py::arg("csv"))
      .def_property_readonly("vertex_count", &ForecastTable::vertex_count)
      .def_property_readonly("bin_count", &ForecastTable::bin_count)
      .def_property_readonly("bin_width", &ForecastTable::bin_width)
      .def("value", &ForecastTable::value, py::arg("vertex"), py::arg("bin"))
      .def("is_empty", &ForecastTable::empty_cell, py::arg("vertex"), py::arg("bin"))
      .def("set", [](ForecastTable& f, VertexId v, std::size_t bin, double count) {
        f.set(v, bin, count, CellTag::Predicted);
      }, py::arg("vertex"), py::arg("bin"), py::arg("count"))
      .def("__eq__", [](const ForecastTable& a, const ForecastTable& b) { return a == b; });

  py::class_<Scenario>(m, "Scenario")
      .def_static("load", &load_scenario, py::arg("path"))
      .def("save", [](const Scenario& s, const fs::path& dir) { save_scenario(s, dir); }, py::arg("dir"))
      .def_property_readonly("graph", [](const Scenario& s) { return s.sim.graph; })
      .def_property_readonly("forecast", [](const Scenario& s) { return s.sim.forecast; })
      .def_property_readonly("mel_vertices", [](const Scenario& s) {
        std::vector<VertexId> v;
        for (const Mel& m : s.sim.mels) v.push_back(m.vertex);
        return v;
      })
      .def_property_readonly("background_trips", [](const Scenario& s) { return s.sim.background.size(); })
      .def_property("source", [](const Scenario& s) { return s.sim.ambulance_source; },
                    [](Scenario& s, VertexId v) { s.sim.ambulance_source = v; })
      .def_property("target", [](const Scenario& s) { return s.sim.ambulance_target; },
                    [](Scenario& s, VertexId v) { s.sim.ambulance_target = v; })
      .def_property("fleet_size", [](const Scenario& s) { return s.sim.fleet_size; },
                    [](Scenario& s, std::size_t n) { s.sim.fleet_size = n; })
      .def_property("horizon_s", [](const Scenario& s) { return s.sim.horizon_s; },
                    [](Scenario& s, double h) { s.sim.horizon_s = h; })
      .def_property("seed", [](const Scenario& s) { return s.sim.seed; },
                    [](Scenario& s, std::uint64_t v) { s.sim.seed = v; });

  m.def("generate_scenario",
        [](std::size_t rows, std::size_t cols, std::uint64_t seed, std::size_t trips, std::size_t fleet,
           bool with_forecast) {
          ScenarioOptions o;
          o.background_trips = trips;
          o.fleet_size = fleet;
          o.include_forecast = with_forecast;
          return generate_scenario(rows, cols, seed, o);
        },
        py::arg("rows"), py::arg("cols"), py::arg("seed"), py::arg("trips") = 900, py::arg("fleet") = 35,
        py::arg("with_forecast") = false);

  m.def("plan",
        [](const Scenario& sc, const std::string& algo, std::optional<VertexId> source,
           std::optional<VertexId> target, double start_s, const std::string& dim, bool paper_literal) {
          ScenarioPlanRequest r{algo, source.value_or(sc.sim.ambulance_source),
                                target.value_or(sc.sim.ambulance_target), start_s, parse_dim(dim), paper_literal};
          return plan_nogil([&] {
            const ForecastTable f = planning_forecast(sc);
            const TemporalGraph g = build_cost_graph(sc.sim.graph, f, sc.sim.desirability, sc.sim.twin);
            return plan_scenario(sc, g, f, r);
          });
        },
        py::arg("scenario"), py::arg("algo") = "potmo", py::arg("source") = py::none(),
        py::arg("target") = py::none(), py::arg("start_s") = 0.0, py::arg("dim") = "length",
        py::arg("paper_literal_priority") = false);

  m.def("potmo_astar", [](const TemporalGraph& g, VertexId s, VertexId t, double start) {
    return plan_nogil([&] { return potmo_astar(g, s, start, t); });
  }, py::arg("graph"), py::arg("source"), py::arg("target"), py::arg("start_s") = 0.0);
  m.def("brute_force_optimum", [](const TemporalGraph& g, VertexId s, VertexId t, double start) {
    return plan_nogil([&] { return brute_force_optimum(g, s, start, t); });
  }, py::arg("graph"), py::arg("source"), py::arg("target"), py::arg("start_s") = 0.0);
  m.def("tdd", [](const TemporalGraph& g, VertexId s, VertexId t, double start) {
    return plan_nogil([&] { return tdd(g, s, start, t); });
  }, py::arg("graph"), py::arg("source"), py::arg("target"), py::arg("start_s") = 0.0);
  m.def("dijkstra_ssp", [](const TemporalGraph& g, VertexId s, VertexId t, std::size_t dim) {
    return plan_nogil([&] { return dijkstra_ssp(g, s, t, dim); });
  }, py::arg("graph"), py::arg("source"), py::arg("target"), py::arg("dim") = kDimLength);
  m.def("count_simple_paths", [](const TemporalGraph& g, VertexId s, VertexId t) {
    return enumerate_simple_paths(g, s, t).size();
  }, py::arg("graph"), py::arg("source"), py::arg("target"));

  m.def("simulate",
        [](const Scenario& sc, const std::string& planner, std::uint64_t seed) {
          SimConfig cfg = sc.sim;
          cfg.planner = planner_from_string(planner);
          cfg.seed = seed;
          ScenarioResult r;
          double recomputed = 0.0;
          {
            py::gil_scoped_release release;
            r = run_scenario(cfg);
            recomputed = recompute_tec(cfg, r);
          }
          py::dict d = result_dict(r);
          d["tec_recomputed_wh"] = recomputed;
          return d;
        },
        py::arg("scenario"), py::arg("planner") = "ssp", py::arg("seed") = 0);

  m.def("wsp_weight", &wsp_weight, py::arg("edge_to_target"), py::arg("agent_to_target"), py::arg("waiting_s"),
        py::arg("active_count"));
  m.def("savgol_coefficients", &savgol_coefficients, py::arg("window") = 5, py::arg("order") = 2);
  m.def("pareto_min_series", [](const std::vector<std::vector<double>>& runs) { return pareto_min_series(runs); },
        py::arg("runs"));
  m.def("pmd", [](const std::vector<double>& run, const std::vector<double>& floor) { return pmd(run, floor); },
        py::arg("run"), py::arg("floor"));
  m.def("fraction_on_front",
        [](const std::vector<double>& run, const std::vector<double>& floor) { return fraction_on_front(run, floor); },
        py::arg("run"), py::arg("floor"));
}
