#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "insq/network/graph.hpp"

namespace insq::net {

// A piece [begin, end] of an edge (offsets from u) owned by one site.
struct OwnedInterval {
  double begin = 0.0;
  double end = 0.0;
  SiteId owner = 0;
};

// A point equidistant from two neighboring sites, first < second.
struct BoundaryPoint {
  NetworkPosition pos;
  SiteId first = 0;
  SiteId second = 0;
  double distance = 0.0;
};

// Order-1 network Voronoi diagram over sites placed on vertices. Immutable
// once built.
class NetworkVoronoi {
 public:
  NetworkVoronoi() = default;

  const std::vector<SiteId>& sites() const { return sites_; }
  std::size_t size() const { return sites_.size(); }
  bool contains(SiteId id) const { return adjacency_.count(id) != 0; }
  // Sorted neighbor ids. Throws kNotFound.
  std::span<const SiteId> neighbors(SiteId id) const;

  // Nonempty intervals covering the edge in order. Throws kNotFound.
  std::span<const OwnedInterval> intervals(EdgeId edge) const;
  const std::vector<BoundaryPoint>& boundaries() const { return boundaries_; }

  // Owner and distance of the nearest site to a vertex.
  SiteId vertex_owner(VertexId v) const;
  double vertex_distance(VertexId v) const;
  // The key-minimal site at an arbitrary position.
  SiteId owner_at(const NetworkPosition& p) const;

 private:
  friend NetworkVoronoi build_network_voronoi(const Graph& g, std::span<const SiteId> sites);

  struct EdgeLabel {
    double length = 0.0;
    double du = 0.0, dv = 0.0;
    SiteId ou = 0, ov = 0;
    std::vector<OwnedInterval> intervals;
  };
  struct VertexLabel {
    double d = 0.0;
    SiteId owner = 0;
  };

  const EdgeLabel& label(EdgeId edge) const;

  std::vector<SiteId> sites_;
  std::unordered_map<SiteId, std::vector<SiteId>> adjacency_;
  std::unordered_map<EdgeId, EdgeLabel> edges_;
  std::unordered_map<VertexId, VertexLabel> vertices_;
  std::vector<BoundaryPoint> boundaries_;
};

// Multi-source expansion from the sites with key tie-breaking, then each
// edge split where ownership changes. Throws kInvalidArgument for an empty
// site set, kNotFound for a site that is not a vertex, kDuplicateId.
NetworkVoronoi build_network_voronoi(const Graph& g, std::span<const SiteId> sites);

std::vector<SiteId> network_voronoi_neighbors(const NetworkVoronoi& nv, SiteId id);

// The part of the network owned by a set of sites. Edges owned entirely by
// the set keep their ids; split pieces and boundary vertices get fresh ids
// above the largest original ones. Original vertices keep their ids. The
// result need not be connected.
struct Subnetwork {
  struct Piece {
    double begin = 0.0;
    double end = 0.0;
    EdgeId sub_edge = 0;
  };

  Graph graph;
  std::unordered_map<EdgeId, std::vector<Piece>> pieces;  // by original edge

  // Maps a position on the original graph into the subnetwork, or nullopt
  // when the position is not covered.
  std::optional<NetworkPosition> locate(const NetworkPosition& p) const;
};

// Throws kNotFound for ids outside the diagram.
Subnetwork restricted_subnetwork(const Graph& g, const NetworkVoronoi& nv,
                                 std::span<const SiteId> subset);

}  // namespace insq::net
