#include "insq/io/scenario_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "insq/error.hpp"
#include "insq/sim/trajectory.hpp"

namespace insq::io {

using nlohmann::json;
using sim::Mode;
using sim::Scenario;

namespace {

json point_json(const geo::Point& p) { return json::array({p.x, p.y}); }

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::kSchema, field + ": " + what, field);
}

// Typed accessors that name the offending path on failure.
const json& member(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(path, "required field is missing");
  return *it;
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& object(const json& v, const std::string& path) {
  if (!v.is_object()) schema_error(path, "expected an object");
  return v;
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) schema_error(path, "expected an array");
  return v;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) schema_error(path, "expected a number");
  return v.get<double>();
}

std::int64_t integer(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) {
    if (v.get<std::uint64_t>() > std::uint64_t(std::numeric_limits<std::int64_t>::max())) {
      schema_error(path, "integer out of range");
    }
    return static_cast<std::int64_t>(v.get<std::uint64_t>());
  }
  if (!v.is_number_integer()) schema_error(path, "expected an integer");
  return v.get<std::int64_t>();
}

std::uint64_t unsigned_integer(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) schema_error(path, "expected a non-negative integer");
  schema_error(path, "expected an integer");
}

geo::Point point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2) schema_error(path, "expected [x, y]");
  return {number(v[0], index(path, 0)), number(v[1], index(path, 1))};
}

std::vector<net::VertexId> id_list(const json& v, const std::string& path) {
  array(v, path);
  std::vector<net::VertexId> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(integer(v[i], index(path, i)));
  return out;
}

void read_graph(const json& doc, Scenario& s) {
  const json& graph = object(member(doc, "graph", "graph"), "graph");
  const json& vertices = array(member(graph, "vertices", "graph.vertices"), "graph.vertices");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string path = index("graph.vertices", i);
    const json& v = object(vertices[i], path);
    s.vertices.push_back({integer(member(v, "id", join(path, "id")), join(path, "id")),
                          {number(member(v, "x", join(path, "x")), join(path, "x")),
                           number(member(v, "y", join(path, "y")), join(path, "y"))}});
  }
  const json& edges = array(member(graph, "edges", "graph.edges"), "graph.edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = index("graph.edges", i);
    const json& e = object(edges[i], path);
    net::EdgeSpec spec;
    spec.id = integer(member(e, "id", join(path, "id")), join(path, "id"));
    spec.u = integer(member(e, "u", join(path, "u")), join(path, "u"));
    spec.v = integer(member(e, "v", join(path, "v")), join(path, "v"));
    if (const auto it = e.find("length"); it != e.end()) {
      spec.length = number(*it, join(path, "length"));
    }
    s.edges.push_back(spec);
  }
}

}  // namespace

std::string save_scenario(const Scenario& s) {
  json doc;
  doc["version"] = kFormatVersion;
  doc["mode"] = std::string(sim::to_string(s.mode));
  doc["k"] = s.k;
  doc["rho"] = s.rho;
  doc["speed"] = s.speed;
  doc["bbox"] = json::array({s.bbox.x0, s.bbox.y0, s.bbox.x1, s.bbox.y1});
  doc["seed"] = s.seed;
  if (s.ticks) doc["ticks"] = *s.ticks;
  if (s.mode == Mode::kPlane) {
    json sites = json::array();
    for (const geo::Site& site : s.sites) {
      sites.push_back({{"id", site.id}, {"x", site.pos.x}, {"y", site.pos.y}});
    }
    doc["sites"] = std::move(sites);
    json path = json::array();
    for (const geo::Point& p : s.path) path.push_back(point_json(p));
    doc["trajectory"] = {{"plane", std::move(path)}};
  } else {
    doc["sites"] = s.network_sites;
    json vertices = json::array();
    for (const net::Vertex& v : s.vertices) {
      vertices.push_back({{"id", v.id}, {"x", v.pos.x}, {"y", v.pos.y}});
    }
    json edges = json::array();
    for (const net::EdgeSpec& e : s.edges) {
      json edge = {{"id", e.id}, {"u", e.u}, {"v", e.v}};
      if (e.length) edge["length"] = *e.length;
      edges.push_back(std::move(edge));
    }
    doc["graph"] = {{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
    doc["trajectory"] = {{"network", s.network_path}};
  }
  return doc.dump(2) + "\n";
}

Scenario load_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kMalformed, std::string("not valid JSON: ") + e.what());
  }
  object(doc, "document");

  const json& version = member(doc, "version", "version");
  if (!version.is_number_integer() || version.get<std::int64_t>() != kFormatVersion) {
    schema_error("version", "unsupported version, expected 1");
  }
  const json& mode = member(doc, "mode", "mode");
  if (!mode.is_string()) schema_error("mode", "expected a string");

  Scenario s;
  s.mode = sim::mode_from_string(mode.get<std::string>());
  s.k = unsigned_integer(member(doc, "k", "k"), "k");
  s.rho = number(member(doc, "rho", "rho"), "rho");
  s.speed = number(member(doc, "speed", "speed"), "speed");
  const json& bbox = array(member(doc, "bbox", "bbox"), "bbox");
  if (bbox.size() != 4) schema_error("bbox", "expected [x0, y0, x1, y1]");
  s.bbox = {number(bbox[0], "bbox[0]"), number(bbox[1], "bbox[1]"), number(bbox[2], "bbox[2]"),
            number(bbox[3], "bbox[3]")};
  s.seed = unsigned_integer(member(doc, "seed", "seed"), "seed");
  if (const auto it = doc.find("ticks"); it != doc.end()) s.ticks = unsigned_integer(*it, "ticks");

  const json& sites = array(member(doc, "sites", "sites"), "sites");
  const json& trajectory = object(member(doc, "trajectory", "trajectory"), "trajectory");
  if (trajectory.size() != 1) schema_error("trajectory", "expected exactly one of plane, network");

  if (s.mode == Mode::kPlane) {
    if (doc.contains("graph")) schema_error("graph", "not allowed in plane mode");
    for (std::size_t i = 0; i < sites.size(); ++i) {
      const std::string path = index("sites", i);
      const json& site = object(sites[i], path);
      s.sites.push_back({integer(member(site, "id", join(path, "id")), join(path, "id")),
                         {number(member(site, "x", join(path, "x")), join(path, "x")),
                          number(member(site, "y", join(path, "y")), join(path, "y"))}});
    }
    if (!trajectory.contains("plane")) schema_error("trajectory", "plane mode needs trajectory.plane");
    const json& path = array(trajectory["plane"], "trajectory.plane");
    for (std::size_t i = 0; i < path.size(); ++i) {
      s.path.push_back(point(path[i], index("trajectory.plane", i)));
    }
  } else {
    s.network_sites = id_list(sites, "sites");
    read_graph(doc, s);
    if (!trajectory.contains("network")) {
      schema_error("trajectory", "network mode needs trajectory.network");
    }
    s.network_path = id_list(trajectory["network"], "trajectory.network");
  }

  sim::validate_scenario(s);
  return s;
}

Scenario read_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return load_scenario(text.str());
}

void write_scenario_file(const std::string& path, const Scenario& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
  out << save_scenario(s);
  if (!out) throw Error(ErrorCode::kInvalidArgument, "cannot write " + path);
}

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  // Uniform in [lo, hi), from the top 53 bits so results do not depend on
  // the standard library's distribution implementations.
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
  }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

 private:
  std::mt19937_64 engine_;
};

void set_pace(Scenario& s, double length, std::uint64_t ticks) {
  s.ticks = ticks;
  s.speed = ticks > 1 && length > 0.0 ? length / static_cast<double>(ticks - 1) : 1.0;
}

}  // namespace

Scenario generate_random(const GenerateParams& p) {
  if (p.n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be at least 1", "n");
  if (p.ticks < 1) throw Error(ErrorCode::kInvalidArgument, "ticks must be at least 1", "ticks");
  Scenario s = sim::default_scenario(p.mode);
  s.k = p.n == 1 ? 1 : p.k;
  s.rho = p.n == 1 ? 1.0 : p.rho;
  s.seed = p.seed;
  s.config().check(p.n);
  Rng rng(p.seed);

  if (p.mode == Mode::kPlane) {
    s.bbox = {0.0, 0.0, 100.0, 100.0};
    std::set<std::pair<double, double>> taken;
    while (s.sites.size() < p.n) {
      const geo::Point q{rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)};
      if (taken.insert({q.x, q.y}).second) {
        s.sites.push_back({static_cast<geo::SiteId>(s.sites.size()), q});
      }
    }
    for (int i = 0; i < 8; ++i) s.path.push_back({rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0)});
    set_pace(s, sim::path_length(s.path), p.ticks);
    return s;
  }

  const int w = p.grid_width;
  const int h = p.grid_height;
  if (w < 1 || h < 1 || w * h < 2 || w > 1000 || h > 1000) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least two vertices", "grid");
  }
  if (p.n > static_cast<std::size_t>(w * h)) {
    throw Error(ErrorCode::kInvalidArgument, "more sites than grid vertices", "n");
  }
  constexpr double kSpacing = 10.0;
  s.bbox = {-kSpacing / 2, -kSpacing / 2, kSpacing * (w - 0.5), kSpacing * (h - 0.5)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      s.vertices.push_back({static_cast<net::VertexId>(y * w + x), {kSpacing * x, kSpacing * y}});
    }
  }
  auto add_edge = [&](int a, int b) {
    s.edges.push_back({static_cast<net::EdgeId>(s.edges.size()), a, b,
                       kSpacing * rng.uniform(1.0, 1.5)});
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x + 1 < w; ++x) add_edge(y * w + x, y * w + x + 1);
  }
  for (int y = 0; y + 1 < h; ++y) {
    for (int x = 0; x < w; ++x) add_edge(y * w + x, (y + 1) * w + x);
  }

  std::vector<net::VertexId> pool(static_cast<std::size_t>(w * h));
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<net::VertexId>(i);
  for (std::size_t i = 0; i < p.n; ++i) {
    std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    s.network_sites.push_back(pool[i]);
  }

  const net::Graph g = sim::scenario_graph(s);
  std::size_t at = rng.below(g.vertex_count());
  std::size_t prev = at;
  s.network_path.push_back(g.vertices()[at].id);
  for (int step = 0; step < 4 * (w + h); ++step) {
    const auto& arcs = g.arcs(at);
    std::size_t next = arcs[rng.below(arcs.size())].other;
    if (next == prev && arcs.size() > 1) next = arcs[rng.below(arcs.size())].other;
    prev = at;
    at = next;
    s.network_path.push_back(g.vertices()[at].id);
  }
  set_pace(s, sim::path_length(g, s.network_path), p.ticks);
  return s;
}

json report_to_json(const sim::TickReport& r, const std::optional<geo::Polygon>& cell) {
  json out;
  out["t"] = r.t;
  out["pos"] = point_json(r.point);
  if (r.network_pos) {
    out["network_pos"] = {{"edge", r.network_pos->edge}, {"offset", r.network_pos->offset}};
  }
  out["knn"] = r.knn;
  out["ins"] = r.is_set;
  out["prefetch"] = r.prefetch;
  out["valid"] = r.valid;
  out["event"] = std::string(engine::to_string(r.event));
  out["green_radius"] = r.green_radius;
  out["red_radius"] = r.red_radius ? json(*r.red_radius) : json(nullptr);
  out["comparisons"] = r.comparisons;
  if (cell) {
    json ring = json::array();
    for (const geo::Point& p : cell->vertices) ring.push_back(point_json(p));
    out["cell"] = std::move(ring);
  }
  return out;
}

}  // namespace insq::io
