#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "insq/geometry/point.hpp"

namespace insq::geo {

// Static bounding-box hierarchy over a site list, bulk-loaded by
// alternating median splits. Answers m-nearest queries best-first, in
// DistanceKey order.
class SpatialTree {
 public:
  SpatialTree() = default;
  explicit SpatialTree(std::span<const Site> sites);

  // Indices into the site list the tree was built from, ascending by key.
  std::vector<std::size_t> nearest(std::span<const Site> sites, const Point& q,
                                   std::size_t m) const;

 private:
  static constexpr std::size_t kLeafSize = 8;

  struct Node {
    BBox box;
    std::size_t begin = 0;  // range in order_ for leaves
    std::size_t end = 0;
    int left = -1;
    int right = -1;
    bool leaf() const { return left < 0; }
  };

  int build(std::span<const Site> sites, std::size_t begin, std::size_t end, int depth);

  std::vector<Node> nodes_;
  std::vector<std::size_t> order_;
};

}  // namespace insq::geo
