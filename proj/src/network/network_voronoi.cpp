#include "insq/network/network_voronoi.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_set>

#include "insq/error.hpp"
#include "insq/geometry/voronoi_index.hpp"
#include "insq/network/shortest_path.hpp"

namespace insq::net {

std::span<const SiteId> NetworkVoronoi::neighbors(SiteId id) const {
  const auto it = adjacency_.find(id);
  if (it == adjacency_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown site " + std::to_string(id));
  }
  return it->second;
}

const NetworkVoronoi::EdgeLabel& NetworkVoronoi::label(EdgeId edge) const {
  const auto it = edges_.find(edge);
  if (it == edges_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown edge " + std::to_string(edge));
  }
  return it->second;
}

std::span<const OwnedInterval> NetworkVoronoi::intervals(EdgeId edge) const {
  return label(edge).intervals;
}

SiteId NetworkVoronoi::vertex_owner(VertexId v) const {
  const auto it = vertices_.find(v);
  if (it == vertices_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown vertex " + std::to_string(v));
  }
  return it->second.owner;
}

double NetworkVoronoi::vertex_distance(VertexId v) const {
  const auto it = vertices_.find(v);
  if (it == vertices_.end()) {
    throw Error(ErrorCode::kNotFound, "unknown vertex " + std::to_string(v));
  }
  return it->second.d;
}

SiteId NetworkVoronoi::owner_at(const NetworkPosition& p) const {
  const EdgeLabel& e = label(p.edge);
  const NetworkDistanceKey via_u{e.du + p.offset, e.ou};
  const NetworkDistanceKey via_v{e.dv + (e.length - p.offset), e.ov};
  return via_v < via_u ? e.ov : e.ou;
}

NetworkVoronoi build_network_voronoi(const Graph& g, std::span<const SiteId> sites) {
  if (sites.empty()) throw Error(ErrorCode::kInvalidArgument, "no sites");
  NetworkVoronoi nv;
  nv.sites_.assign(sites.begin(), sites.end());
  std::sort(nv.sites_.begin(), nv.sites_.end());
  if (std::adjacent_find(nv.sites_.begin(), nv.sites_.end()) != nv.sites_.end()) {
    throw Error(ErrorCode::kDuplicateId, "duplicate site id");
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<NetworkDistanceKey> labels(g.vertex_count(), NetworkDistanceKey{kInf, 0});
  using Entry = std::tuple<double, SiteId, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  for (SiteId s : nv.sites_) {
    const std::size_t i = g.vertex_index(s);
    labels[i] = {0.0, s};
    queue.emplace(0.0, s, i);
    nv.adjacency_[s];
  }
  // Label-correcting: a settled vertex is revisited when a tolerance tie
  // hands it to a lower id.
  while (!queue.empty()) {
    const auto [d, owner, cur] = queue.top();
    queue.pop();
    if (d != labels[cur].d || owner != labels[cur].id) continue;
    for (const Graph::Arc& arc : g.arcs(cur)) {
      const NetworkDistanceKey cand{d + g.edges()[arc.edge].length, owner};
      NetworkDistanceKey& slot = labels[arc.other];
      if (slot.d == kInf || cand < slot) {
        slot = cand;
        queue.emplace(cand.d, cand.id, arc.other);
      }
    }
  }
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    nv.vertices_[g.vertices()[i].id] = {labels[i].d, labels[i].id};
  }

  auto link = [&](SiteId a, SiteId b) {
    auto& na = nv.adjacency_[a];
    if (std::find(na.begin(), na.end(), b) == na.end()) {
      na.push_back(b);
      nv.adjacency_[b].push_back(a);
    }
  };

  std::vector<std::vector<SiteId>> touching(g.vertex_count());
  for (const Edge& e : g.edges()) {
    const NetworkDistanceKey& lu = labels[g.vertex_index(e.u)];
    const NetworkDistanceKey& lv = labels[g.vertex_index(e.v)];
    NetworkVoronoi::EdgeLabel el;
    el.length = e.length;
    el.du = lu.d;
    el.dv = lv.d;
    el.ou = lu.id;
    el.ov = lv.id;
    if (lu.id == lv.id) {
      el.intervals.push_back({0.0, e.length, lu.id});
    } else {
      const double split = std::clamp((lv.d + e.length - lu.d) / 2.0, 0.0, e.length);
      if (split > 0.0) el.intervals.push_back({0.0, split, lu.id});
      if (split < e.length) el.intervals.push_back({split, e.length, lv.id});
      nv.boundaries_.push_back({{e.id, split},
                                std::min(lu.id, lv.id),
                                std::max(lu.id, lv.id),
                                lu.d + split});
      if (split > 0.0 && split < e.length) link(lu.id, lv.id);
    }
    touching[g.vertex_index(e.u)].push_back(el.intervals.front().owner);
    touching[g.vertex_index(e.v)].push_back(el.intervals.back().owner);
    nv.edges_.emplace(e.id, std::move(el));
  }
  // Intervals that meet at a vertex: every owner there is equidistant from it.
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    std::vector<SiteId>& owners = touching[i];
    owners.push_back(labels[i].id);
    std::sort(owners.begin(), owners.end());
    owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
    for (std::size_t a = 0; a < owners.size(); ++a) {
      for (std::size_t b = a + 1; b < owners.size(); ++b) link(owners[a], owners[b]);
    }
  }
  for (auto& [id, list] : nv.adjacency_) std::sort(list.begin(), list.end());
  geo::note_diagram_build();
  return nv;
}

std::vector<SiteId> network_voronoi_neighbors(const NetworkVoronoi& nv, SiteId id) {
  const auto span = nv.neighbors(id);
  return {span.begin(), span.end()};
}

std::optional<NetworkPosition> Subnetwork::locate(const NetworkPosition& p) const {
  const auto it = pieces.find(p.edge);
  if (it == pieces.end()) return std::nullopt;
  for (const Piece& piece : it->second) {
    if (piece.begin <= p.offset && p.offset <= piece.end) {
      return NetworkPosition{piece.sub_edge, p.offset - piece.begin};
    }
  }
  return std::nullopt;
}

Subnetwork restricted_subnetwork(const Graph& g, const NetworkVoronoi& nv,
                                 std::span<const SiteId> subset) {
  std::unordered_set<SiteId> members;
  for (SiteId s : subset) {
    if (!nv.contains(s)) throw Error(ErrorCode::kNotFound, "unknown site " + std::to_string(s));
    members.insert(s);
  }

  VertexId next_vertex = 0;
  for (const Vertex& v : g.vertices()) next_vertex = std::max(next_vertex, v.id + 1);
  EdgeId next_edge = 0;
  for (const Edge& e : g.edges()) next_edge = std::max(next_edge, e.id + 1);

  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::unordered_set<VertexId> added;
  auto add_original = [&](VertexId id) {
    if (added.insert(id).second) vertices.push_back(g.vertex(id));
  };
  std::map<std::pair<EdgeId, double>, VertexId> split_vertices;
  auto split_vertex = [&](const Edge& e, double offset) {
    const auto key = std::make_pair(e.id, offset);
    const auto it = split_vertices.find(key);
    if (it != split_vertices.end()) return it->second;
    const VertexId id = next_vertex++;
    vertices.push_back({id, g.point_at({e.id, offset})});
    split_vertices.emplace(key, id);
    return id;
  };

  Subnetwork sub;
  for (const Edge& e : g.edges()) {
    for (const OwnedInterval& iv : nv.intervals(e.id)) {
      if (!members.count(iv.owner)) continue;
      const bool at_u = iv.begin == 0.0;
      const bool at_v = iv.end == e.length;
      VertexId a = 0;
      VertexId b = 0;
      if (at_u) {
        add_original(e.u);
        a = e.u;
      } else {
        a = split_vertex(e, iv.begin);
      }
      if (at_v) {
        add_original(e.v);
        b = e.v;
      } else {
        b = split_vertex(e, iv.end);
      }
      const EdgeId id = at_u && at_v ? e.id : next_edge++;
      const double length = at_u && at_v ? e.length : iv.end - iv.begin;
      edges.push_back({id, a, b, length});
      sub.pieces[e.id].push_back({iv.begin, iv.end, id});
    }
  }
  for (SiteId s : subset) add_original(s);
  sub.graph = Graph::assemble(std::move(vertices), std::move(edges));
  return sub;
}

}  // namespace insq::net
