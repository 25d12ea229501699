#include "delaunay.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <unordered_map>

#include "insq/geometry/predicates.hpp"

namespace insq::geo::detail {

namespace {

constexpr int kInf = -1;

struct Triangle {
  std::array<int, 3> v{};  // counterclockwise; at most one entry is kInf
  std::array<int, 3> n{};  // n[i] is the triangle across the edge opposite v[i]
  bool alive = true;
};

// Incremental Bowyer-Watson triangulation with an explicit vertex at
// infinity. Hull edges carry "ghost" triangles (a, b, inf) whose outside
// lies to the left of a->b, so insertion outside the hull needs no special
// casing. All decisions use exact predicates.
class Triangulation {
 public:
  explicit Triangulation(std::span<const Point> pts) : pts_(pts) {}

  // Returns false if every point is collinear (no triangle can be formed).
  bool build() {
    const int n = static_cast<int>(pts_.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 rng(0x5eed);
    std::shuffle(order.begin(), order.end(), rng);

    int third = -1;
    for (int j = 2; j < n; ++j) {
      if (orient2d(pt(order[0]), pt(order[1]), pt(order[j])) != 0) {
        third = j;
        break;
      }
    }
    if (third < 0) return false;

    seed(order[0], order[1], order[third]);
    for (int j = 2; j < n; ++j) {
      if (j != third) insert(order[j]);
    }
    return true;
  }

  std::vector<std::vector<int>> adjacency() const {
    std::vector<std::vector<int>> adj(pts_.size());
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
      const Triangle& tri = tris_[t];
      if (!tri.alive || is_ghost(tri)) continue;
      for (int i = 0; i < 3; ++i) {
        const int a = tri.v[(i + 1) % 3];
        const int b = tri.v[(i + 2) % 3];
        const Triangle& other = tris_[tri.n[i]];
        bool shares_edge = true;
        if (!is_ghost(other)) {
          if (a > b) continue;  // the opposite triangle reports the same edge
          const int d = opposite_vertex(other, a, b);
          shares_edge = incircle(pt(tri.v[0]), pt(tri.v[1]), pt(tri.v[2]), pt(d)) != 0;
        }
        if (shares_edge) {
          adj[a].push_back(b);
          adj[b].push_back(a);
        }
      }
    }
    for (auto& list : adj) std::sort(list.begin(), list.end());
    return adj;
  }

 private:
  const Point& pt(int i) const { return pts_[static_cast<std::size_t>(i)]; }

  static bool is_ghost(const Triangle& t) {
    return t.v[0] == kInf || t.v[1] == kInf || t.v[2] == kInf;
  }

  // Finite edge (a, b) of a ghost triangle, in its stored orientation.
  static std::pair<int, int> ghost_edge(const Triangle& t) {
    if (t.v[0] == kInf) return {t.v[1], t.v[2]};
    if (t.v[1] == kInf) return {t.v[2], t.v[0]};
    return {t.v[0], t.v[1]};
  }

  static int opposite_vertex(const Triangle& t, int a, int b) {
    for (int x : t.v) {
      if (x != a && x != b) return x;
    }
    return kInf;
  }

  bool strictly_between(const Point& a, const Point& b, const Point& p) const {
    // p is known to be collinear with a and b.
    if (a.x != b.x) {
      return (a.x < p.x && p.x < b.x) || (b.x < p.x && p.x < a.x);
    }
    return (a.y < p.y && p.y < b.y) || (b.y < p.y && p.y < a.y);
  }

  bool in_conflict(const Triangle& t, const Point& p) const {
    if (is_ghost(t)) {
      const auto [a, b] = ghost_edge(t);
      const int o = orient2d(pt(a), pt(b), p);
      return o > 0 || (o == 0 && strictly_between(pt(a), pt(b), p));
    }
    return incircle(pt(t.v[0]), pt(t.v[1]), pt(t.v[2]), p) > 0;
  }

  int add(const std::array<int, 3>& v) {
    tris_.push_back(Triangle{v, {-1, -1, -1}, true});
    return static_cast<int>(tris_.size()) - 1;
  }

  void link(int t, int across_from_vertex_index, int other) {
    tris_[t].n[across_from_vertex_index] = other;
  }

  void seed(int a, int b, int c) {
    if (orient2d(pt(a), pt(b), pt(c)) < 0) std::swap(b, c);
    const int t = add({a, b, c});
    // Ghost across the edge opposite v[i] of the seed triangle.
    std::array<int, 3> g{};
    for (int i = 0; i < 3; ++i) {
      const int x = tris_[t].v[(i + 1) % 3];
      const int y = tris_[t].v[(i + 2) % 3];
      g[i] = add({y, x, kInf});
      link(t, i, g[i]);
      link(g[i], 2, t);
    }
    // Ghost g[i] = (y, x, inf); its neighbor across (x, inf) shares x.
    for (int i = 0; i < 3; ++i) {
      const int x = tris_[t].v[(i + 1) % 3];
      const int y = tris_[t].v[(i + 2) % 3];
      // Across edge (x, inf), opposite y = v[0]: the ghost whose edge starts at x.
      // Across edge (inf, y), opposite x = v[1]: the ghost whose edge ends at y.
      for (int j = 0; j < 3; ++j) {
        if (j == i) continue;
        const auto [gy, gx] = ghost_edge(tris_[g[j]]);
        if (gy == x) link(g[i], 0, g[j]);
        if (gx == y) link(g[i], 1, g[j]);
      }
    }
    last_ = t;
  }

  int locate(const Point& p) const {
    int t = last_;
    const std::size_t cap = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < cap; ++step) {
      const Triangle& tri = tris_[t];
      if (is_ghost(tri)) return in_conflict(tri, p) ? t : -1;
      int next = -1;
      for (int i = 0; i < 3; ++i) {
        const int a = tri.v[(i + 1) % 3];
        const int b = tri.v[(i + 2) % 3];
        if (orient2d(pt(a), pt(b), p) < 0) {
          next = tri.n[i];
          break;
        }
      }
      if (next < 0) return t;  // p lies in the closed triangle
      t = next;
    }
    return -1;
  }

  int locate_by_scan(const Point& p) const {
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
      if (tris_[t].alive && in_conflict(tris_[t], p)) return t;
    }
    return -1;
  }

  void insert(int pi) {
    const Point& p = pt(pi);
    int start = locate(p);
    if (start < 0) start = locate_by_scan(p);

    struct Boundary {
      int a, b;    // edge a->b, cavity on its left
      int outside; // non-conflicting triangle across it
    };
    std::vector<int> cavity{start};
    std::vector<Boundary> boundary;
    tris_[start].alive = false;
    for (std::size_t head = 0; head < cavity.size(); ++head) {
      const int t = cavity[head];
      for (int i = 0; i < 3; ++i) {
        const int nb = tris_[t].n[i];
        if (!tris_[nb].alive) continue;  // already in the cavity
        if (in_conflict(tris_[nb], p)) {
          tris_[nb].alive = false;
          cavity.push_back(nb);
        } else {
          boundary.push_back({tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3], nb});
        }
      }
    }

    // Fan the cavity boundary to p. Each boundary vertex starts exactly one
    // boundary edge and ends exactly one.
    std::unordered_map<int, int> by_start;
    std::unordered_map<int, int> by_end;
    std::vector<int> created;
    created.reserve(boundary.size());
    for (const Boundary& e : boundary) {
      const int t = add({e.a, e.b, pi});
      created.push_back(t);
      link(t, 2, e.outside);
      Triangle& out = tris_[e.outside];
      for (int j = 0; j < 3; ++j) {
        const int x = out.v[(j + 1) % 3];
        const int y = out.v[(j + 2) % 3];
        if (x == e.b && y == e.a) out.n[j] = t;
      }
      by_start[e.a] = t;
      by_end[e.b] = t;
    }
    for (int t : created) {
      const int a = tris_[t].v[0];
      const int b = tris_[t].v[1];
      link(t, 0, by_start.at(b));  // edge (b, p)
      link(t, 1, by_end.at(a));    // edge (p, a)
      if (!is_ghost(tris_[t])) last_ = t;
    }
  }

  std::span<const Point> pts_;
  std::vector<Triangle> tris_;
  int last_ = 0;
};

std::vector<std::vector<int>> collinear_adjacency(std::span<const Point> points) {
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Point& pa = points[a];
    const Point& pb = points[b];
    return pa.x < pb.x || (pa.x == pb.x && pa.y < pb.y);
  });
  std::vector<std::vector<int>> adj(points.size());
  for (std::size_t i = 1; i < order.size(); ++i) {
    adj[order[i - 1]].push_back(order[i]);
    adj[order[i]].push_back(order[i - 1]);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

}  // namespace

std::vector<std::vector<int>> voronoi_adjacency(std::span<const Point> points) {
  if (points.size() < 2) return std::vector<std::vector<int>>(points.size());
  Triangulation tri(points);
  if (!tri.build()) return collinear_adjacency(points);
  return tri.adjacency();
}

}  // namespace insq::geo::detail
