#include "insq/network/shortest_path.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "insq/error.hpp"

namespace insq::net {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using QueueEntry = std::pair<double, std::size_t>;
using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

void seed(const Graph& g, const NetworkPosition& src, std::vector<double>& dist, MinQueue& queue) {
  g.check(src);
  const Edge& e = g.edge(src.edge);
  const std::size_t iu = g.vertex_index(e.u);
  const std::size_t iv = g.vertex_index(e.v);
  dist[iu] = std::min(dist[iu], src.offset);
  dist[iv] = std::min(dist[iv], e.length - src.offset);
  queue.emplace(dist[iu], iu);
  queue.emplace(dist[iv], iv);
}

}  // namespace

bool nearly_equal(double a, double b) {
  return std::fabs(a - b) <= kRelativeTolerance * std::max(std::fabs(a), std::fabs(b));
}

bool operator<(const NetworkDistanceKey& a, const NetworkDistanceKey& b) {
  if (nearly_equal(a.d, b.d)) return a.id < b.id;
  return a.d < b.d;
}

std::vector<double> distances_from(const Graph& g, const NetworkPosition& src,
                                   std::vector<VertexId>* visited) {
  std::vector<double> dist(g.vertex_count(), kInf);
  MinQueue queue;
  seed(g, src, dist, queue);
  while (!queue.empty()) {
    const auto [d, cur] = queue.top();
    queue.pop();
    if (d > dist[cur]) continue;
    if (visited) visited->push_back(g.vertices()[cur].id);
    for (const Graph::Arc& arc : g.arcs(cur)) {
      const double nd = d + g.edges()[arc.edge].length;
      if (nd < dist[arc.other]) {
        dist[arc.other] = nd;
        queue.emplace(nd, arc.other);
      }
    }
  }
  return dist;
}

double distance_to(const Graph& g, std::span<const double> dist, const NetworkPosition& src,
                   const NetworkPosition& dst) {
  const Edge& e = g.edge(dst.edge);
  double best = std::min(dist[g.vertex_index(e.u)] + dst.offset,
                         dist[g.vertex_index(e.v)] + (e.length - dst.offset));
  if (src.edge == dst.edge) best = std::min(best, std::fabs(src.offset - dst.offset));
  return best;
}

double network_distance(const Graph& g, const NetworkPosition& a, const NetworkPosition& b) {
  g.check(b);
  if (a == b) return 0.0;
  const std::vector<double> dist = distances_from(g, a);
  return distance_to(g, dist, a, b);
}

std::vector<SiteId> nearest_sites(const Graph& g, std::span<const SiteId> sites,
                                  const NetworkPosition& q, std::size_t m) {
  if (m < 1 || m > sites.size()) {
    throw Error(ErrorCode::kInvalidArgument, "nearest_sites: m out of range");
  }
  std::vector<char> is_site(g.vertex_count(), 0);
  for (SiteId s : sites) is_site[g.vertex_index(s)] = 1;

  std::vector<double> dist(g.vertex_count(), kInf);
  MinQueue queue;
  seed(g, q, dist, queue);
  std::vector<SiteId> found;
  double cutoff = kInf;
  while (!queue.empty()) {
    const auto [d, cur] = queue.top();
    queue.pop();
    if (d > dist[cur]) continue;
    if (d > cutoff && !nearly_equal(d, cutoff)) break;
    if (is_site[cur]) {
      is_site[cur] = 0;
      found.push_back(g.vertices()[cur].id);
      if (found.size() == m) cutoff = d;
    }
    for (const Graph::Arc& arc : g.arcs(cur)) {
      const double nd = d + g.edges()[arc.edge].length;
      if (nd < dist[arc.other]) {
        dist[arc.other] = nd;
        queue.emplace(nd, arc.other);
      }
    }
  }
  sort_by_key(found, [&](SiteId id) { return dist[g.vertex_index(id)]; });
  found.resize(std::min(m, found.size()));
  return found;
}

}  // namespace insq::net
