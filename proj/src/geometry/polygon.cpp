#include "insq/geometry/polygon.hpp"

#include <algorithm>
#include <unordered_set>

#include "insq/error.hpp"

namespace insq::geo {

double Polygon::area() const {
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % vertices.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return twice / 2.0;
}

bool Polygon::contains(const Point& p) const {
  if (empty()) return false;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % vertices.size()];
    if ((b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) < 0.0) return false;
  }
  return true;
}

Polygon box_polygon(const BBox& box) {
  return {{{box.x0, box.y0}, {box.x1, box.y0}, {box.x1, box.y1}, {box.x0, box.y1}}};
}

Polygon clip_to_bisector(const Polygon& poly, const Point& near, const Point& far) {
  if (poly.empty()) return {};
  const Point mid{(near.x + far.x) / 2.0, (near.y + far.y) / 2.0};
  const double nx = far.x - near.x;
  const double ny = far.y - near.y;
  // side(x) <= 0 on the near side.
  auto side = [&](const Point& x) { return (x.x - mid.x) * nx + (x.y - mid.y) * ny; };

  Polygon out;
  const auto& v = poly.vertices;
  out.vertices.reserve(v.size() + 1);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& a = v[i];
    const Point& b = v[(i + 1) % v.size()];
    const double sa = side(a);
    const double sb = side(b);
    if (sa <= 0.0) out.vertices.push_back(a);
    if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) {
      const double t = sa / (sa - sb);
      out.vertices.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  // Drop repeated vertices produced by clips through existing corners.
  std::vector<Point> ring;
  ring.reserve(out.vertices.size());
  for (const Point& p : out.vertices) {
    if (ring.empty() || !(ring.back() == p)) ring.push_back(p);
  }
  while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  out.vertices = std::move(ring);
  if (out.vertices.size() < 3) out.vertices.clear();
  return out;
}

Polygon voronoi_cell_polygon(const VoronoiIndex& index, SiteId id, const BBox& box) {
  if (box.degenerate()) throw Error(ErrorCode::kInvalidArgument, "bounding box is degenerate");
  const Site& self = index.site(id);
  Polygon cell = box_polygon(box);
  for (SiteId other : index.neighbors(id)) {
    cell = clip_to_bisector(cell, self.pos, index.site(other).pos);
  }
  return cell;
}

Polygon order_k_cell_polygon(std::span<const Site> sites, std::span<const SiteId> subset,
                             const BBox& box) {
  if (box.degenerate()) throw Error(ErrorCode::kInvalidArgument, "bounding box is degenerate");
  if (subset.empty()) throw Error(ErrorCode::kInvalidArgument, "subset must be nonempty");
  const std::unordered_set<SiteId> members(subset.begin(), subset.end());
  std::vector<const Site*> inside;
  std::vector<const Site*> outside;
  for (const Site& s : sites) (members.count(s.id) ? inside : outside).push_back(&s);
  if (inside.size() != members.size()) {
    throw Error(ErrorCode::kNotFound, "subset names a site that does not exist");
  }
  Polygon cell = box_polygon(box);
  for (const Site* in : inside) {
    for (const Site* out : outside) {
      cell = clip_to_bisector(cell, in->pos, out->pos);
      if (cell.empty()) return cell;
    }
  }
  return cell;
}

}  // namespace insq::geo
