#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "insq/geometry/point.hpp"

namespace insq::net {

using VertexId = std::int64_t;
using EdgeId = std::int64_t;
using SiteId = VertexId;  // data objects live on vertices

struct Vertex {
  VertexId id = 0;
  geo::Point pos;

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// Edge as supplied by a caller; the length defaults to the Euclidean
// distance between the endpoints.
struct EdgeSpec {
  EdgeId id = 0;
  VertexId u = 0;
  VertexId v = 0;
  std::optional<double> length;

  friend bool operator==(const EdgeSpec&, const EdgeSpec&) = default;
};

struct Edge {
  EdgeId id = 0;
  VertexId u = 0;
  VertexId v = 0;
  double length = 0.0;
};

// A point on the network: `offset` is measured from the edge's u end.
struct NetworkPosition {
  EdgeId edge = 0;
  double offset = 0.0;

  friend bool operator==(const NetworkPosition&, const NetworkPosition&) = default;
};

// Undirected road network with positive edge lengths. Immutable after
// construction. Vertices and edges are addressed by id externally and by
// dense index internally.
class Graph {
 public:
  struct Arc {
    std::size_t edge;   // edge index
    std::size_t other;  // vertex index at the far end
  };

  Graph() = default;

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_vertex(VertexId id) const { return vertex_slot_.count(id) != 0; }
  bool has_edge(EdgeId id) const { return edge_slot_.count(id) != 0; }
  // Throw kNotFound for unknown ids.
  std::size_t vertex_index(VertexId id) const;
  std::size_t edge_index(EdgeId id) const;
  const Vertex& vertex(VertexId id) const { return vertices_[vertex_index(id)]; }
  const Edge& edge(EdgeId id) const { return edges_[edge_index(id)]; }

  const std::vector<Arc>& arcs(std::size_t vertex_index) const { return arcs_[vertex_index]; }

  // Shortest edge joining two vertices, if any.
  std::optional<EdgeId> edge_between(VertexId a, VertexId b) const;

  // Throws kInvalidArgument if the position is not on the graph.
  void check(const NetworkPosition& p) const;
  geo::Point point_at(const NetworkPosition& p) const;
  // Position of a vertex expressed on one of its incident edges.
  NetworkPosition position_of(VertexId v) const;

  bool connected() const;

  // Builds without the connectivity requirement. Used for subnetworks.
  static Graph assemble(std::vector<Vertex> vertices, std::vector<Edge> edges);

 private:
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::unordered_map<VertexId, std::size_t> vertex_slot_;
  std::unordered_map<EdgeId, std::size_t> edge_slot_;
  std::vector<std::vector<Arc>> arcs_;
};

// Validating constructor. Errors: kDuplicateId, kNotFound (edge endpoint),
// kInvalidLength (nonpositive or non-finite length, or self-loop),
// kConnectivity (disconnected), kInvalidArgument (no vertices).
Graph build_graph(std::vector<Vertex> vertices, const std::vector<EdgeSpec>& edges);

}  // namespace insq::net
