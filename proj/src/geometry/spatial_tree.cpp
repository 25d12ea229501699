#include "insq/geometry/spatial_tree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <tuple>

namespace insq::geo {

namespace {

double min_squared_distance(const BBox& box, const Point& q) {
  const double dx = std::max({box.x0 - q.x, 0.0, q.x - box.x1});
  const double dy = std::max({box.y0 - q.y, 0.0, q.y - box.y1});
  return dx * dx + dy * dy;
}

struct Entry {
  double d2;
  int kind;        // 0 = node, 1 = site; nodes first on equal distance
  SiteId id;       // site id, or 0 for nodes
  std::size_t ref; // node index or site index

  bool operator>(const Entry& o) const {
    return std::tie(d2, kind, id, ref) > std::tie(o.d2, o.kind, o.id, o.ref);
  }
};

}  // namespace

SpatialTree::SpatialTree(std::span<const Site> sites) {
  order_.resize(sites.size());
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  if (!sites.empty()) build(sites, 0, sites.size(), 0);
}

int SpatialTree::build(std::span<const Site> sites, std::size_t begin, std::size_t end,
                       int depth) {
  Node node;
  node.begin = begin;
  node.end = end;
  const Point& first = sites[order_[begin]].pos;
  node.box = {first.x, first.y, first.x, first.y};
  for (std::size_t i = begin; i < end; ++i) {
    const Point& p = sites[order_[i]].pos;
    node.box.x0 = std::min(node.box.x0, p.x);
    node.box.y0 = std::min(node.box.y0, p.y);
    node.box.x1 = std::max(node.box.x1, p.x);
    node.box.y1 = std::max(node.box.y1, p.y);
  }
  const int self = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= kLeafSize) return self;

  const bool split_x = (node.box.x1 - node.box.x0) >= (node.box.y1 - node.box.y0) ||
                       (depth % 2 == 0 && node.box.x1 - node.box.x0 == node.box.y1 - node.box.y0);
  const std::size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                   order_.begin() + static_cast<std::ptrdiff_t>(mid),
                   order_.begin() + static_cast<std::ptrdiff_t>(end),
                   [&](std::size_t a, std::size_t b) {
                     const Point& pa = sites[a].pos;
                     const Point& pb = sites[b].pos;
                     return split_x ? std::tie(pa.x, pa.y) < std::tie(pb.x, pb.y)
                                    : std::tie(pa.y, pa.x) < std::tie(pb.y, pb.x);
                   });
  const int left = build(sites, begin, mid, depth + 1);
  const int right = build(sites, mid, end, depth + 1);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

std::vector<std::size_t> SpatialTree::nearest(std::span<const Site> sites, const Point& q,
                                              std::size_t m) const {
  std::vector<std::size_t> out;
  if (nodes_.empty() || m == 0) return out;
  out.reserve(m);
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  queue.push({min_squared_distance(nodes_[0].box, q), 0, 0, 0});
  while (!queue.empty() && out.size() < m) {
    const Entry e = queue.top();
    queue.pop();
    if (e.kind == 1) {
      out.push_back(e.ref);
      continue;
    }
    const Node& node = nodes_[e.ref];
    if (node.leaf()) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const Site& s = sites[order_[i]];
        queue.push({squared_distance(q, s.pos), 1, s.id, order_[i]});
      }
    } else {
      queue.push({min_squared_distance(nodes_[node.left].box, q), 0, 0,
                  static_cast<std::size_t>(node.left)});
      queue.push({min_squared_distance(nodes_[node.right].box, q), 0, 0,
                  static_cast<std::size_t>(node.right)});
    }
  }
  return out;
}

}  // namespace insq::geo
