#include "potmo/scenario_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "potmo/error.hpp"

namespace potmo {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (s.find_first_of(".eni") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_file(const fs::path& path, const std::string& label, std::vector<std::string>& errors) {
  if (!fs::exists(path)) {
    errors.push_back(label + ": file not found: " + path.string());
    return nullptr;
  }
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    errors.push_back(label + ": invalid JSON: " + e.what());
    return nullptr;
  }
}

// Field readers that record a located error instead of throwing.
template <typename T>
std::optional<T> field(const Json& obj, const char* key, const std::string& where, std::vector<std::string>& errors,
                       std::optional<T> fallback = std::nullopt) {
  if (!obj.is_object() || !obj.contains(key)) {
    if (fallback) return fallback;
    errors.push_back(where + "." + key + ": missing");
    return std::nullopt;
  }
  const Json& v = obj.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) {
      errors.push_back(where + "." + key + ": expected a boolean");
      return std::nullopt;
    }
  } else if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) {
      errors.push_back(where + "." + key + ": expected a number");
      return std::nullopt;
    }
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_unsigned()) {
      errors.push_back(where + "." + key + ": expected a nonnegative integer");
      return std::nullopt;
    }
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) {
      errors.push_back(where + "." + key + ": expected a string");
      return std::nullopt;
    }
  }
  return v.get<T>();
}

std::vector<std::vector<double>> rows_of(const std::vector<CostVec>& bins) {
  std::vector<std::vector<double>> rows;
  for (const CostVec& c : bins) rows.emplace_back(c.values().begin(), c.values().end());
  return rows;
}

}  // namespace

// --- Graph -------------------------------------------------------------------

Json graph_to_json(const TemporalGraph& g, bool include_costs) {
  Json j;
  j["bin_width"] = g.bin_width();
  j["dims"] = g.dims();
  j["time_dim"] = g.time_dim();
  Json vs = Json::array();
  for (const Vertex& v : g.vertices()) vs.push_back({{"id", v.id}, {"x", v.x}, {"y", v.y}, {"z", v.z}});
  j["vertices"] = std::move(vs);
  Json es = Json::array();
  for (const Edge& e : g.edges()) {
    Json je = {{"id", e.id},           {"src", e.src},         {"dst", e.dst},
               {"length_m", e.length_m}, {"vmax_ms", e.vmax_ms}, {"slope_rad", e.slope_rad}};
    if (include_costs && g.has_costs()) {
      auto bins = g.cost_bins(e.id);
      je["cost_bins"] = rows_of(std::vector<CostVec>(bins.begin(), bins.end()));
    }
    es.push_back(std::move(je));
  }
  j["edges"] = std::move(es);
  return j;
}

std::optional<TemporalGraph> graph_from_json(const Json& j, const std::string& where,
                                             std::vector<std::string>& errors) {
  const std::size_t before = errors.size();
  if (!j.is_object()) {
    errors.push_back(where + ": expected a JSON object");
    return std::nullopt;
  }
  auto bin_width = field<double>(j, "bin_width", where, errors, 60.0);
  auto dims = field<std::size_t>(j, "dims", where, errors, kDefaultDims);
  auto time_dim = field<std::size_t>(j, "time_dim", where, errors, kDimTime);
  if (!j.contains("vertices") || !j["vertices"].is_array()) errors.push_back(where + ".vertices: expected an array");
  if (!j.contains("edges") || !j["edges"].is_array()) errors.push_back(where + ".edges: expected an array");
  if (errors.size() != before) return std::nullopt;

  std::vector<Vertex> vertices;
  for (std::size_t i = 0; i < j["vertices"].size(); ++i) {
    const Json& jv = j["vertices"][i];
    const std::string w = where + ".vertices[" + std::to_string(i) + "]";
    auto id = field<std::uint32_t>(jv, "id", w, errors);
    auto x = field<double>(jv, "x", w, errors);
    auto y = field<double>(jv, "y", w, errors);
    auto z = field<double>(jv, "z", w, errors, 0.0);
    if (id && *id != i) errors.push_back(w + ".id: expected " + std::to_string(i) + " (ids are dense and ordered)");
    if (id && x && y && z) vertices.push_back({*id, *x, *y, *z});
  }
  std::vector<Edge> edges;
  std::vector<std::vector<CostVec>> costs;
  std::size_t with_costs = 0;
  for (std::size_t i = 0; i < j["edges"].size(); ++i) {
    const Json& je = j["edges"][i];
    const std::string w = where + ".edges[" + std::to_string(i) + "]";
    auto id = field<std::uint32_t>(je, "id", w, errors);
    auto src = field<std::uint32_t>(je, "src", w, errors);
    auto dst = field<std::uint32_t>(je, "dst", w, errors);
    auto length = field<double>(je, "length_m", w, errors);
    auto vmax = field<double>(je, "vmax_ms", w, errors);
    auto slope = field<double>(je, "slope_rad", w, errors, 0.0);
    if (id && *id != i) errors.push_back(w + ".id: expected " + std::to_string(i) + " (ids are dense and ordered)");
    if (src && *src >= j["vertices"].size()) errors.push_back(w + ".src: unknown vertex " + std::to_string(*src));
    if (dst && *dst >= j["vertices"].size()) errors.push_back(w + ".dst: unknown vertex " + std::to_string(*dst));
    if (length && !(*length > 0.0)) errors.push_back(w + ".length_m: must be positive");
    if (vmax && !(*vmax > 0.0)) errors.push_back(w + ".vmax_ms: must be positive");
    if (id && src && dst && length && vmax && slope) edges.push_back({*id, *src, *dst, *length, *vmax, *slope});
    std::vector<CostVec> bins;
    if (je.contains("cost_bins")) {
      ++with_costs;
      const Json& jb = je["cost_bins"];
      if (!jb.is_array() || jb.empty()) {
        errors.push_back(w + ".cost_bins: expected a nonempty array of cost vectors");
      } else {
        for (std::size_t k = 0; k < jb.size(); ++k) {
          const std::string wb = w + ".cost_bins[" + std::to_string(k) + "]";
          try {
            auto values = jb[k].get<std::vector<double>>();
            if (dims && values.size() != *dims) {
              errors.push_back(wb + ": expected " + std::to_string(*dims) + " values");
              continue;
            }
            if (time_dim && *time_dim < values.size() && !(values[*time_dim] > 0.0)) {
              errors.push_back(wb + ": time component must be positive");
              continue;
            }
            bins.emplace_back(std::move(values));
          } catch (const std::exception& e) {
            errors.push_back(wb + ": " + e.what());
          }
        }
      }
    }
    costs.push_back(std::move(bins));
  }
  if (with_costs != 0 && with_costs != j["edges"].size()) {
    errors.push_back(where + ".edges: cost_bins must be given for every edge or for none");
  }
  if (errors.size() != before) return std::nullopt;
  if (with_costs == 0) costs.clear();
  try {
    return TemporalGraph(std::move(vertices), std::move(edges), std::move(costs), *dims, *time_dim, *bin_width);
  } catch (const std::exception& e) {
    errors.push_back(where + ": " + e.what());
    return std::nullopt;
  }
}

TemporalGraph load_graph(const fs::path& path) {
  std::vector<std::string> errors;
  Json j = parse_file(path, path.filename().string(), errors);
  std::optional<TemporalGraph> g;
  if (errors.empty()) g = graph_from_json(j, path.filename().string(), errors);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return std::move(*g);
}

void save_graph(const TemporalGraph& g, const fs::path& path, bool include_costs) {
  write_text(path, dump(graph_to_json(g, include_costs)));
}

// --- Desirability and forecast ----------------------------------------------

namespace {

std::optional<DesirabilityMap> desirability_from_json(const Json& j, std::size_t vertices, const std::string& where,
                                                      std::vector<std::string>& errors) {
  if (!j.is_object()) {
    errors.push_back(where + ": expected an object mapping vertex id to score");
    return std::nullopt;
  }
  const std::size_t before = errors.size();
  std::vector<double> scores(vertices, 0.0);
  std::vector<bool> seen(vertices, false);
  for (const auto& [key, value] : j.items()) {
    std::uint32_t id = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), id);
    if (ec != std::errc{} || ptr != key.data() + key.size()) {
      errors.push_back(where + "['" + key + "']: key is not a vertex id");
      continue;
    }
    if (id >= vertices) {
      errors.push_back(where + "['" + key + "']: vertex id " + key + " is not in the graph");
      continue;
    }
    if (!value.is_number()) {
      errors.push_back(where + "['" + key + "']: expected a number");
      continue;
    }
    scores[id] = value.get<double>();
    seen[id] = true;
  }
  for (std::size_t v = 0; v < vertices; ++v) {
    if (!seen[v]) errors.push_back(where + ": no score for vertex " + std::to_string(v));
  }
  if (errors.size() != before) return std::nullopt;
  return DesirabilityMap(std::move(scores));
}

struct ForecastFiles {
  std::optional<ForecastTable> table;
};

std::optional<ForecastTable> forecast_from_files(const fs::path& csv, std::size_t vertices,
                                                 std::optional<double> graph_bin_width, const std::string& graph_label,
                                                 std::vector<std::string>& errors) {
  const std::size_t before = errors.size();
  const fs::path sidecar = forecast_sidecar(csv);
  const std::string cl = csv.filename().string();
  const std::string sl = sidecar.filename().string();
  Json meta = parse_file(sidecar, sl, errors);
  if (!fs::exists(csv)) errors.push_back(cl + ": file not found: " + csv.string());
  if (errors.size() != before) return std::nullopt;
  auto width = field<double>(meta, "bin_width", sl, errors);
  if (width && !(*width > 0.0)) errors.push_back(sl + ".bin_width: must be positive");
  if (width && graph_bin_width && *width != *graph_bin_width) {
    errors.push_back(sl + ".bin_width " + format_number(*width) + " differs from " + graph_label + ".bin_width " +
                     format_number(*graph_bin_width));
  }
  std::optional<std::size_t> declared_bins;
  if (meta.contains("bins")) declared_bins = field<std::size_t>(meta, "bins", sl, errors);

  std::istringstream in(read_text(csv));
  std::string line;
  if (!std::getline(in, line) || line != "vertex_id,bin_index,count") {
    errors.push_back(cl + ": header must be 'vertex_id,bin_index,count'");
    return std::nullopt;
  }
  struct Row {
    std::uint32_t v;
    std::size_t bin;
    double count;
  };
  std::vector<Row> rows;
  std::size_t max_bin = 0;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    const std::string w = cl + ":" + std::to_string(lineno);
    Row r{};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    auto a = std::from_chars(p, end, r.v);
    if (a.ec != std::errc{} || a.ptr == end || *a.ptr != ',') {
      errors.push_back(w + ": bad vertex_id");
      continue;
    }
    auto b = std::from_chars(a.ptr + 1, end, r.bin);
    if (b.ec != std::errc{} || b.ptr == end || *b.ptr != ',') {
      errors.push_back(w + ": bad bin_index");
      continue;
    }
    auto c = std::from_chars(b.ptr + 1, end, r.count);
    if (c.ec != std::errc{} || c.ptr != end) {
      errors.push_back(w + ": bad count");
      continue;
    }
    if (r.v >= vertices) errors.push_back(w + ": vertex_id " + std::to_string(r.v) + " is not in the graph");
    if (!(r.count >= 0.0)) errors.push_back(w + ": count must be nonnegative");
    max_bin = std::max(max_bin, r.bin);
    rows.push_back(r);
  }
  const std::size_t bins = declared_bins.value_or(rows.empty() ? 1 : max_bin + 1);
  if (!rows.empty() && max_bin >= bins) {
    errors.push_back(cl + ": bin_index " + std::to_string(max_bin) + " exceeds declared bins " + std::to_string(bins));
  }
  if (errors.size() != before) return std::nullopt;
  ForecastTable table(vertices, bins, *width);
  for (const Row& r : rows) table.set(r.v, r.bin, r.count, CellTag::Predicted);
  return table;
}

}  // namespace

DesirabilityMap load_desirability(const fs::path& path, std::size_t vertices) {
  std::vector<std::string> errors;
  Json j = parse_file(path, path.filename().string(), errors);
  std::optional<DesirabilityMap> map;
  if (errors.empty()) map = desirability_from_json(j, vertices, path.filename().string(), errors);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return std::move(*map);
}

void save_desirability(const DesirabilityMap& map, const fs::path& path) {
  Json j = Json::object();
  for (std::size_t v = 0; v < map.size(); ++v) j[std::to_string(v)] = map.scores()[v];
  write_text(path, dump(j));
}

fs::path forecast_sidecar(const fs::path& csv) {
  fs::path p = csv;
  return p.replace_extension(".json");
}

ForecastTable load_forecast(const fs::path& csv, std::size_t vertices) {
  std::vector<std::string> errors;
  auto table = forecast_from_files(csv, vertices, std::nullopt, "", errors);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return std::move(*table);
}

void save_forecast(const ForecastTable& table, const fs::path& csv) {
  std::string out = "vertex_id,bin_index,count\n";
  for (VertexId v = 0; v < table.vertex_count(); ++v) {
    for (std::size_t b = 0; b < table.bin_count(); ++b) {
      if (table.empty_cell(v, b)) continue;
      out += std::to_string(v) + "," + std::to_string(b) + "," + format_number(table.value(v, b)) + "\n";
    }
  }
  write_text(csv, out);
  Json meta;
  meta["bin_width"] = table.bin_width();
  meta["bins"] = table.bin_count();
  meta["vertices"] = table.vertex_count();
  write_text(forecast_sidecar(csv), dump(meta));
}

// --- Scenario bundle -----------------------------------------------------------

Json twin_to_json(const VehicleTwin& t) {
  return {{"mass_kg", t.mass_kg},
          {"rolling_coeff", t.rolling_coeff},
          {"drag_area_m2", t.drag_area_m2},
          {"drivetrain_eff", t.drivetrain_eff},
          {"regen_eff", t.regen_eff},
          {"battery_wh", t.battery_wh},
          {"radio_j_per_packet", t.radio_j_per_packet}};
}

VehicleTwin twin_from_json(const Json& j) {
  VehicleTwin t;
  t.mass_kg = j.value("mass_kg", t.mass_kg);
  t.rolling_coeff = j.value("rolling_coeff", t.rolling_coeff);
  t.drag_area_m2 = j.value("drag_area_m2", t.drag_area_m2);
  t.drivetrain_eff = j.value("drivetrain_eff", t.drivetrain_eff);
  t.regen_eff = j.value("regen_eff", t.regen_eff);
  t.battery_wh = j.value("battery_wh", t.battery_wh);
  t.radio_j_per_packet = j.value("radio_j_per_packet", t.radio_j_per_packet);
  return t;
}

namespace {

Json sim_to_json(const SimConfig& s) {
  Json j;
  j["planner"] = to_string(s.planner);
  j["fleet_size"] = s.fleet_size;
  j["injection_interval_s"] = s.injection_interval_s;
  j["packet_interval_s"] = s.packet_interval_s;
  j["tick_s"] = s.tick_s;
  j["horizon_s"] = s.horizon_s;
  j["congestion_beta"] = s.congestion_beta;
  j["jam_spacing_m"] = s.jam_spacing_m;
  j["source"] = s.ambulance_source;
  j["target"] = s.ambulance_target;
  j["seed"] = s.seed;
  j["paper_literal_priority"] = s.paper_literal_priority;
  j["twin"] = twin_to_json(s.twin);
  Json mels = Json::array();
  for (const Mel& m : s.mels) {
    mels.push_back({{"id", m.id},
                    {"vertex", m.vertex},
                    {"service_rate_ips", m.service_rate_ips},
                    {"instructions_per_packet", m.instructions_per_packet}});
  }
  j["mels"] = std::move(mels);
  Json trips = Json::array();
  for (const BackgroundTrip& t : s.background) trips.push_back({{"depart_s", t.depart_s}, {"route", t.route}});
  j["background"] = std::move(trips);
  return j;
}

void sim_from_json(const Json& j, const std::string& where, SimConfig& s, std::vector<std::string>& errors) {
  if (!j.is_object()) {
    errors.push_back(where + ": expected an object");
    return;
  }
  if (auto p = field<std::string>(j, "planner", where, errors, std::string("ssp"))) {
    try {
      s.planner = planner_from_string(*p);
    } catch (const std::invalid_argument& e) {
      errors.push_back(where + ".planner: " + e.what());
    }
  }
  auto set = [&](auto& target, const char* key) {
    using T = std::decay_t<decltype(target)>;
    if (auto v = field<T>(j, key, where, errors, target)) target = *v;
  };
  set(s.fleet_size, "fleet_size");
  set(s.injection_interval_s, "injection_interval_s");
  set(s.packet_interval_s, "packet_interval_s");
  set(s.tick_s, "tick_s");
  set(s.horizon_s, "horizon_s");
  set(s.congestion_beta, "congestion_beta");
  set(s.jam_spacing_m, "jam_spacing_m");
  set(s.ambulance_source, "source");
  set(s.ambulance_target, "target");
  set(s.seed, "seed");
  set(s.paper_literal_priority, "paper_literal_priority");
  if (j.contains("twin")) {
    try {
      s.twin = twin_from_json(j["twin"]);
    } catch (const std::exception& e) {
      errors.push_back(where + ".twin: " + e.what());
    }
  }
  if (j.contains("mels")) {
    for (std::size_t i = 0; i < j["mels"].size(); ++i) {
      const std::string w = where + ".mels[" + std::to_string(i) + "]";
      const Json& jm = j["mels"][i];
      Mel m;
      auto id = field<std::string>(jm, "id", w, errors);
      auto vertex = field<std::uint32_t>(jm, "vertex", w, errors);
      auto rate = field<double>(jm, "service_rate_ips", w, errors, m.service_rate_ips);
      auto instr = field<double>(jm, "instructions_per_packet", w, errors, m.instructions_per_packet);
      if (id && vertex && rate && instr) s.mels.push_back({*id, *vertex, *rate, *instr});
    }
  }
  if (j.contains("background")) {
    for (std::size_t i = 0; i < j["background"].size(); ++i) {
      const std::string w = where + ".background[" + std::to_string(i) + "]";
      const Json& jt = j["background"][i];
      auto depart = field<double>(jt, "depart_s", w, errors);
      try {
        if (depart) s.background.push_back({*depart, jt.at("route").get<std::vector<EdgeId>>()});
      } catch (const std::exception& e) {
        errors.push_back(w + ".route: " + e.what());
      }
    }
  }
}

}  // namespace

Scenario load_scenario(const fs::path& path) {
  std::vector<std::string> errors;
  Scenario sc;
  const fs::path manifest = fs::is_directory(path) ? path / "scenario.json" : path;
  sc.root = manifest.parent_path();
  const std::string ml = manifest.filename().string();
  Json j = parse_file(manifest, ml, errors);
  if (!errors.empty()) throw ValidationError(std::move(errors));

  if (auto v = field<std::string>(j, "graph", ml, errors)) sc.graph_file = *v;
  if (auto v = field<std::string>(j, "desirability", ml, errors)) sc.desirability_file = *v;
  if (j.contains("forecast") && !j["forecast"].is_null()) {
    if (auto v = field<std::string>(j, "forecast", ml, errors)) sc.forecast_file = *v;
  }
  if (auto v = field<std::string>(j, "output", ml, errors, std::string("out"))) sc.output_dir = *v;
  if (!errors.empty()) throw ValidationError(std::move(errors));

  const std::string gl = sc.graph_file;
  Json jg = parse_file(sc.root / sc.graph_file, gl, errors);
  std::optional<TemporalGraph> graph;
  if (!jg.is_null()) graph = graph_from_json(jg, gl, errors);
  const std::size_t n = graph ? graph->vertex_count() : 0;

  if (graph) {
    Json jd = parse_file(sc.root / sc.desirability_file, sc.desirability_file, errors);
    if (!jd.is_null()) {
      if (auto map = desirability_from_json(jd, n, sc.desirability_file, errors)) sc.sim.desirability = std::move(*map);
    }
    if (sc.forecast_file) {
      sc.sim.forecast = forecast_from_files(sc.root / *sc.forecast_file, n, graph->bin_width(), gl, errors);
    }
  }

  if (!j.contains("sim")) {
    errors.push_back(ml + ".sim: missing");
  } else {
    sim_from_json(j["sim"], ml + ".sim", sc.sim, errors);
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));

  // Costs are derived at run time; keep only the topology.
  sc.sim.graph = *graph;
  for (auto& e : sc.sim.validation_errors()) errors.push_back(ml + ".sim: " + e);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return sc;
}

void save_scenario(const Scenario& sc, const fs::path& dir) {
  fs::create_directories(dir);
  save_graph(sc.sim.graph, dir / sc.graph_file);
  save_desirability(sc.sim.desirability, dir / sc.desirability_file);
  Json j;
  j["graph"] = sc.graph_file;
  j["desirability"] = sc.desirability_file;
  if (sc.forecast_file && sc.sim.forecast) {
    save_forecast(*sc.sim.forecast, dir / *sc.forecast_file);
    j["forecast"] = *sc.forecast_file;
  }
  j["output"] = sc.output_dir;
  j["sim"] = sim_to_json(sc.sim);
  write_text(dir / "scenario.json", dump(j));
}

// --- Results -------------------------------------------------------------------

Json plan_to_json(const PlanResult& plan) {
  auto label_json = [](const Label& l) {
    return Json{{"path", l.edges},
                {"vertices", l.vertices},
                {"cost", std::vector<double>(l.cost.values().begin(), l.cost.values().end())},
                {"arrival_s", l.arrival_s}};
  };
  Json j = label_json(plan.chosen);
  Json front = Json::array();
  for (const Label& l : plan.front) front.push_back(label_json(l));
  j["front"] = std::move(front);
  j["expanded"] = plan.expanded;
  j["exact"] = plan.exact;
  j["wall_ms"] = plan.wall_ms;
  return j;
}

void write_comms_csv(const ScenarioResult& r, const fs::path& path) {
  std::string out = "vehicle_id,start_s,mel_id,transmission_s\n";
  for (const CommRecord& c : r.comms) {
    out += std::to_string(c.vehicle) + "," + format_number(c.start_s) + "," + std::to_string(c.mel) + "," +
           format_number(c.transmission_s) + "\n";
  }
  write_text(path, out);
}

void write_series_csv(const ScenarioResult& r, double /*tick_s*/, const fs::path& path) {
  std::string out = "tick,mean_tx_ambulance,mean_tx_all\n";
  for (std::size_t i = 0; i < r.series_all.size(); ++i) {
    out += std::to_string(i) + "," + format_number(r.series_ambulance[i]) + "," + format_number(r.series_all[i]) + "\n";
  }
  write_text(path, out);
}

SeriesFile read_series_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line != "tick,mean_tx_ambulance,mean_tx_all") {
    throw ValidationError({path.filename().string() + ": header must be 'tick,mean_tx_ambulance,mean_tx_all'"});
  }
  SeriesFile s;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string tick, amb, all;
    if (!std::getline(row, tick, ',') || !std::getline(row, amb, ',') || !std::getline(row, all)) {
      throw ValidationError({path.filename().string() + ":" + std::to_string(lineno) + ": expected three columns"});
    }
    s.ambulance.push_back(std::stod(amb));
    s.all.push_back(std::stod(all));
  }
  return s;
}

}  // namespace potmo

// --- Generators ----------------------------------------------------------------

namespace potmo {

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Hand-rolled so generated bundles are identical across standard libraries.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

 private:
  std::mt19937_64 engine_;
};

constexpr double kGridSpacing = 250.0;

TemporalGraph topology_of(const TemporalGraph& g) {
  return TemporalGraph(std::vector<Vertex>(g.vertices().begin(), g.vertices().end()),
                       std::vector<Edge>(g.edges().begin(), g.edges().end()), {}, g.dims(), g.time_dim(),
                       g.bin_width());
}

}  // namespace

GeneratedGrid generate_grid(std::size_t rows, std::size_t cols, std::uint64_t seed, double horizon_s) {
  if (rows < 2 || cols < 2 || rows > kMaxGridSide || cols > kMaxGridSide) {
    throw std::invalid_argument("grid sides must be between 2 and " + std::to_string(kMaxGridSide));
  }
  if (!(horizon_s > 0.0)) throw std::invalid_argument("horizon must be positive");
  Rng rng(seed);
  const double width = (static_cast<double>(cols) - 1) * kGridSpacing;
  const double height = (static_cast<double>(rows) - 1) * kGridSpacing;

  struct Bump {
    double x, y, amplitude, sigma;
  };
  std::vector<Bump> bumps;
  for (int i = 0; i < 3; ++i) {
    bumps.push_back({rng.uniform(0, width), rng.uniform(0, height), rng.uniform(-15, 25), rng.uniform(300, 800)});
  }
  std::vector<Vertex> vertices;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      Vertex v;
      v.id = static_cast<VertexId>(vertices.size());
      v.x = static_cast<double>(c) * kGridSpacing + rng.uniform(-25, 25);
      v.y = static_cast<double>(r) * kGridSpacing + rng.uniform(-25, 25);
      v.z = 0.0;
      for (const Bump& b : bumps) {
        const double d2 = (v.x - b.x) * (v.x - b.x) + (v.y - b.y) * (v.y - b.y);
        v.z += b.amplitude * std::exp(-d2 / (2 * b.sigma * b.sigma));
      }
      vertices.push_back(v);
    }
  }
  auto id = [cols](std::size_t r, std::size_t c) { return static_cast<VertexId>(r * cols + c); };
  std::vector<Edge> edges;
  auto connect = [&](VertexId a, VertexId b, bool arterial) {
    const Vertex& va = vertices[a];
    const Vertex& vb = vertices[b];
    const double planar = std::hypot(va.x - vb.x, va.y - vb.y);
    const double dz = vb.z - va.z;
    // Roads are never shorter than the straight 3D segment.
    const double length = std::sqrt(planar * planar + dz * dz) * (1.0 + rng.uniform(0.0, 0.1));
    const double kmh = arterial ? 50.0 : (rng.uniform() < 0.5 ? 30.0 : 40.0);
    for (auto [s, d] : {std::pair{a, b}, std::pair{b, a}}) {
      const double rise = vertices[d].z - vertices[s].z;
      edges.push_back({static_cast<EdgeId>(edges.size()), s, d, length, kmh / 3.6, std::asin(rise / length)});
    }
  };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) connect(id(r, c), id(r, c + 1), r % 3 == 0);
      if (r + 1 < rows) connect(id(r, c), id(r + 1, c), c % 3 == 0);
    }
  }
  TemporalGraph topology(vertices, std::move(edges), {});

  const Point centre{width / 2, height / 2};
  const double reach = std::hypot(width / 2, height / 2);
  std::vector<double> scores;
  std::vector<double> pull;  // centre weighting in [0, 1]
  for (const Vertex& v : vertices) {
    const double w = 1.0 - distance(v.position(), centre) / reach;
    pull.push_back(w);
    scores.push_back(std::clamp(0.3 + 0.6 * w + rng.uniform(-0.1, 0.1), 0.0, 1.0));
  }

  std::vector<VertexId> rsus;
  for (std::size_t r = 0; r < rows; r += 2) {
    for (std::size_t c = 0; c < cols; c += 2) rsus.push_back(id(r, c));
  }
  const double bin_width = 60.0;
  const auto bins = static_cast<std::size_t>(std::ceil(horizon_s / bin_width));
  std::vector<Observation> records;
  for (std::size_t b = 0; b < bins; ++b) {
    const double t = (static_cast<double>(b) + 0.5) * bin_width;
    const double peak = std::exp(-std::pow((t - horizon_s / 2) / (horizon_s / 4), 2));
    for (VertexId v : rsus) {
      const double mean = 1.0 + 6.0 * pull[v] * (0.4 + 0.6 * peak);
      records.push_back({v, t, std::round(mean * rng.uniform(0.7, 1.3))});
    }
  }
  ForecastTable forecast = smooth_spatial(ingest_observations(records, vertices.size(), bin_width, bins), topology);
  DesirabilityMap desirability(std::move(scores));
  TemporalGraph graph = build_cost_graph(topology, forecast, desirability, VehicleTwin{});
  return {std::move(graph), std::move(desirability), std::move(forecast), std::move(rsus)};
}

Scenario generate_scenario(std::size_t rows, std::size_t cols, std::uint64_t seed, const ScenarioOptions& options) {
  GeneratedGrid grid = generate_grid(rows, cols, seed);
  Scenario sc;
  SimConfig& sim = sc.sim;
  sim.graph = topology_of(grid.graph);
  sim.desirability = grid.desirability;
  sim.planner = options.planner;
  sim.fleet_size = options.fleet_size;
  sim.seed = seed;
  sim.ambulance_source = 0;
  sim.ambulance_target = static_cast<VertexId>((rows / 2) * cols + cols / 2);
  for (VertexId v : grid.rsus) {
    char name[32];
    std::snprintf(name, sizeof name, "mel-%04u", v);
    sim.mels.push_back({name, v, 1e6, 1.5e6});
  }

  const TemporalGraph& g = sim.graph;
  std::vector<double> free_flow_s;
  for (const Edge& e : g.edges()) free_flow_s.push_back(e.length_m / e.vmax_ms);
  const Point centre = g.vertex(sim.ambulance_target).position();
  double reach = 0.0;
  for (const Vertex& v : g.vertices()) reach = std::max(reach, distance(v.position(), centre));
  std::vector<VertexId> central;
  for (const Vertex& v : g.vertices()) {
    if (distance(v.position(), centre) <= 0.35 * reach) central.push_back(v.id);
  }

  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  for (std::size_t i = 0; i < options.background_trips; ++i) {
    const double depart = std::floor(rng.uniform(0.0, 0.8 * sim.horizon_s));
    const auto origin = static_cast<VertexId>(rng.index(g.vertex_count()));
    VertexId dest = rng.uniform() < 0.6 ? central[rng.index(central.size())]
                                        : static_cast<VertexId>(rng.index(g.vertex_count()));
    if (dest == origin) dest = static_cast<VertexId>((origin + 1) % g.vertex_count());
    PlanResult route = shortest_by_weight(g, origin, dest, free_flow_s);
    sim.background.push_back({depart, route.chosen.edges});
  }
  std::stable_sort(sim.background.begin(), sim.background.end(),
                   [](const BackgroundTrip& a, const BackgroundTrip& b) { return a.depart_s < b.depart_s; });
  if (options.include_forecast) {
    sc.forecast_file = "forecast.csv";
    sim.forecast = grid.forecast;
  }
  return sc;
}

ForecastTable planning_forecast(const Scenario& sc) {
  return sc.sim.forecast ? *sc.sim.forecast : replay_forecast(sc.sim);
}

std::size_t parse_dim(const std::string& name) {
  static const char* names[] = {"cars", "energy", "desirability", "time", "length"};
  for (std::size_t i = 0; i < std::size(names); ++i) {
    if (name == names[i] || name == std::to_string(i)) return i;
  }
  throw std::invalid_argument("unknown cost dimension '" + name + "'");
}

PlanResult plan_scenario(const Scenario& sc, const TemporalGraph& g, const ForecastTable& forecast,
                         const ScenarioPlanRequest& r) {
  if (r.algo == "potmo") {
    PotmoOptions opts;
    opts.paper_literal_priority = r.paper_literal_priority;
    return potmo_astar(g, r.source, r.start_s, r.target, beeline_heuristic(g, r.target, sc.sim.twin), opts);
  }
  if (r.algo == "ssp") return dijkstra_ssp(g, r.source, r.target, r.dim);
  if (r.algo == "tdd") return tdd(g, r.source, r.start_s, r.target);
  if (r.algo == "wsp") {
    std::vector<bool> rsu(g.vertex_count(), false);
    for (const Mel& m : sc.sim.mels) rsu[m.vertex] = true;
    CountFeed feed = [&](double time) {
      std::vector<double> counts;
      counts.reserve(g.edge_count());
      for (const Edge& e : g.edges()) counts.push_back(forecast.count_at(e.dst, time));
      return counts;
    };
    return wsp_plan(g, {r.source, r.target, r.start_s, 0}, feed, rsu, sc.sim.tick_s);
  }
  throw std::invalid_argument("unknown algorithm '" + r.algo + "'");
}

}  // namespace potmo
