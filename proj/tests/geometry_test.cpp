#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "insq/error.hpp"
#include "insq/geometry/polygon.hpp"
#include "insq/geometry/predicates.hpp"
#include "insq/geometry/voronoi_index.hpp"
#include "support/plane_oracle.hpp"

namespace {

using namespace insq;
using namespace insq::geo;
using insq::testing::brute_adjacency;
using insq::testing::brute_knn;
using insq::testing::brute_nearest;
using insq::testing::uniform_sites;

std::vector<SiteId> ids(std::span<const SiteId> s) { return {s.begin(), s.end()}; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected insq::Error";
  return ErrorCode::kConflict;
}

TEST(Predicates, OrientationAndIncircleSigns) {
  EXPECT_EQ(orient2d({0, 0}, {1, 0}, {0, 1}), 1);
  EXPECT_EQ(orient2d({0, 0}, {1, 0}, {0, -1}), -1);
  EXPECT_EQ(orient2d({0, 0}, {1, 1}, {3, 3}), 0);
  EXPECT_EQ(incircle({0, 0}, {1, 0}, {0, 1}, {0.5, 0.5}), 1);
  EXPECT_EQ(incircle({0, 0}, {1, 0}, {0, 1}, {1, 1}), 0);
  EXPECT_EQ(incircle({0, 0}, {1, 0}, {0, 1}, {2, 2}), -1);
}

TEST(Predicates, NearlyCollinearNeedsExactArithmetic) {
  // Classic failure case for naive evaluation: points on y = x offset by
  // one ulp.
  const Point a{0.5, 0.5};
  const Point b{12.0, 12.0};
  const Point c{24.0, 24.0};
  EXPECT_EQ(orient2d(a, b, c), 0);
  const Point c_up{24.0, std::nextafter(24.0, 25.0)};
  EXPECT_EQ(orient2d(a, b, c_up), 1);
  const Point c_down{24.0, std::nextafter(24.0, 23.0)};
  EXPECT_EQ(orient2d(a, b, c_down), -1);
}

TEST(BuildVoronoi, SingleSiteHasNoNeighbors) {
  const auto index = build_voronoi({{7, {0, 0}}});
  EXPECT_EQ(index.size(), 1u);
  EXPECT_TRUE(index.neighbors(7).empty());
}

TEST(BuildVoronoi, TwoSitesAreMutualNeighbors) {
  const auto index = build_voronoi({{0, {0, 0}}, {1, {2, 0}}});
  EXPECT_EQ(ids(index.neighbors(0)), std::vector<SiteId>{1});
  EXPECT_EQ(ids(index.neighbors(1)), std::vector<SiteId>{0});
  const Polygon cell = voronoi_cell_polygon(index, 0, {-1, -1, 3, 1});
  // Cell of a is [-1, 1] x [-1, 1]: the bisector is x = 1.
  EXPECT_DOUBLE_EQ(cell.area(), 4.0);
  for (const Point& p : cell.vertices) EXPECT_LE(p.x, 1.0);
}

TEST(BuildVoronoi, RejectsDuplicateIdsAndCoincidentSites) {
  EXPECT_EQ(code_of([] { build_voronoi({{1, {0, 0}}, {1, {1, 0}}}); }), ErrorCode::kDuplicateId);
  EXPECT_EQ(code_of([] { build_voronoi({{1, {0, 0}}, {2, {0, 0}}}); }),
            ErrorCode::kCoincidentSites);
  EXPECT_EQ(code_of([] { build_voronoi({}); }), ErrorCode::kInvalidArgument);
}

TEST(BuildVoronoi, CollinearSitesChainToTheirNeighbors) {
  const auto index = build_voronoi({{0, {0, 0}}, {1, {3, 3}}, {2, {1, 1}}, {3, {2, 2}}});
  EXPECT_EQ(ids(index.neighbors(0)), std::vector<SiteId>{2});
  EXPECT_EQ(ids(index.neighbors(2)), (std::vector<SiteId>{0, 3}));
  EXPECT_EQ(ids(index.neighbors(3)), (std::vector<SiteId>{1, 2}));
}

TEST(BuildVoronoi, GridCenterExcludesDiagonalPointContacts) {
  const auto sites = insq::testing::grid_sites(3, 3);
  const auto index = build_voronoi(sites);
  // Center (1,1) has id 4; side neighbors 1, 3, 5, 7.
  EXPECT_EQ(ids(index.neighbors(4)), (std::vector<SiteId>{1, 3, 5, 7}));
  const auto oracle = brute_adjacency(sites);
  for (const Site& s : sites) EXPECT_EQ(ids(index.neighbors(s.id)), oracle.at(s.id)) << s.id;
}

TEST(BuildVoronoi, LargerGridMatchesOracle) {
  auto sites = insq::testing::grid_sites(6, 5);
  const auto index = build_voronoi(sites);
  const auto oracle = brute_adjacency(sites);
  for (const Site& s : sites) EXPECT_EQ(ids(index.neighbors(s.id)), oracle.at(s.id)) << s.id;
}

TEST(BuildVoronoi, CocircularRingMatchesOracle) {
  // Eight points on a circle with exact coordinates plus the center.
  std::vector<Site> sites = {{0, {5, 0}},  {1, {3, 4}},   {2, {0, 5}},   {3, {-4, 3}},
                             {4, {-5, 0}}, {5, {-3, -4}}, {6, {0, -5}},  {7, {4, -3}},
                             {8, {0, 0}}};
  const auto index = build_voronoi(sites);
  const auto oracle = brute_adjacency(sites);
  for (const Site& s : sites) EXPECT_EQ(ids(index.neighbors(s.id)), oracle.at(s.id)) << s.id;
  // The ring without its center has no chords.
  sites.pop_back();
  const auto ring = build_voronoi(sites);
  for (const Site& s : sites) EXPECT_EQ(ring.neighbors(s.id).size(), 2u) << s.id;
}

TEST(BuildVoronoi, Seed42MatchesBruteForceAdjacency) {
  const auto sites = uniform_sites(100, 42);
  const auto index = build_voronoi(sites);
  const auto oracle = brute_adjacency(sites);
  for (const Site& s : sites) {
    EXPECT_EQ(voronoi_neighbors(index, s.id), oracle.at(s.id)) << s.id;
  }
}

TEST(BuildVoronoi, AdjacencyIsSymmetricAndConnected) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto sites = uniform_sites(60 + seed * 7, seed);
    const auto index = build_voronoi(sites);
    for (const Site& s : sites) {
      for (SiteId n : index.neighbors(s.id)) {
        const auto back = index.neighbors(n);
        EXPECT_TRUE(std::binary_search(back.begin(), back.end(), s.id));
      }
    }
    std::vector<SiteId> stack{sites.front().id};
    std::set<SiteId> seen{sites.front().id};
    while (!stack.empty()) {
      const SiteId cur = stack.back();
      stack.pop_back();
      for (SiteId n : index.neighbors(cur)) {
        if (seen.insert(n).second) stack.push_back(n);
      }
    }
    EXPECT_EQ(seen.size(), sites.size());
  }
}

TEST(BuildVoronoi, IntegerLatticeWithManyCocircularQuadsMatchesOracle) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> coord(0, 12);
  std::set<std::pair<int, int>> used;
  std::vector<Site> sites;
  while (sites.size() < 70) {
    const int x = coord(rng), y = coord(rng);
    if (used.insert({x, y}).second) {
      sites.push_back({static_cast<SiteId>(sites.size()), {double(x), double(y)}});
    }
  }
  const auto index = build_voronoi(sites);
  const auto oracle = brute_adjacency(sites);
  for (const Site& s : sites) EXPECT_EQ(ids(index.neighbors(s.id)), oracle.at(s.id)) << s.id;
}

TEST(VoronoiNeighbors, UnknownIdIsNotFound) {
  const auto index = build_voronoi({{0, {0, 0}}, {1, {2, 0}}});
  EXPECT_EQ(code_of([&] { voronoi_neighbors(index, 9); }), ErrorCode::kNotFound);
}

TEST(KnnSearch, HandWorkedExample) {
  const auto index =
      build_voronoi({{1, {0, 0}}, {2, {3, 0}}, {3, {0, 4}}, {4, {6, 6}}});
  EXPECT_EQ(knn_search(index, {1, 1}, 2), (std::vector<SiteId>{1, 2}));
  EXPECT_EQ(knn_search(index, {1, 1}, 4), (std::vector<SiteId>{1, 2, 3, 4}));
  EXPECT_EQ(knn_search(index, {6, 6}, 1), std::vector<SiteId>{4});
  EXPECT_EQ(code_of([&] { knn_search(index, {0, 0}, 0); }), ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { knn_search(index, {0, 0}, 5); }), ErrorCode::kInvalidArgument);
}

TEST(KnnSearch, TiesBreakByIdOnGrid) {
  const auto sites = insq::testing::grid_sites(3, 3);
  const auto index = build_voronoi(sites);
  // From the center the four side sites tie; ids order them.
  EXPECT_EQ(knn_search(index, {1, 1}, 5), (std::vector<SiteId>{4, 1, 3, 5, 7}));
  EXPECT_EQ(knn_search(index, {1, 1}, 9), brute_knn(sites, {1, 1}, 9));
}

TEST(KnnSearch, MatchesFullSortEverywhere) {
  const auto sites = uniform_sites(500, 42);
  const auto index = build_voronoi(sites);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  for (int trial = 0; trial < 300; ++trial) {
    const Point q{u(rng), u(rng)};
    const std::size_t m = 1 + static_cast<std::size_t>(trial % 40);
    EXPECT_EQ(knn_search(index, q, m), brute_knn(sites, q, m));
  }
}

TEST(CellPolygon, SingleSiteCoversTheBox) {
  const auto index = build_voronoi({{3, {0.5, 0.5}}});
  const BBox box{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(voronoi_cell_polygon(index, 3, box).area(), 1.0);
}

TEST(CellPolygon, CellsPartitionTheBoxAndContainTheirPoints) {
  const auto sites = uniform_sites(100, 42);
  const auto index = build_voronoi(sites);
  const BBox box{0, 0, 1, 1};
  double total = 0.0;
  std::map<SiteId, Polygon> cells;
  for (const Site& s : sites) {
    cells[s.id] = voronoi_cell_polygon(index, s.id, box);
    EXPECT_GT(cells[s.id].area(), 0.0);
    total += cells[s.id].area();
  }
  EXPECT_NEAR(total, 1.0, 1e-9);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const Point x{u(rng), u(rng)};
    const SiteId owner = brute_nearest(sites, x);
    EXPECT_TRUE(cells[owner].contains(x));
  }
}

TEST(OrderKCell, TrivialCases) {
  const std::vector<Site> two = {{0, {0, 0}}, {1, {2, 0}}};
  const BBox box{-1, -1, 3, 1};
  const std::vector<SiteId> all{0, 1};
  EXPECT_DOUBLE_EQ(order_k_cell_polygon(two, all, box).area(), 8.0);
  const std::vector<SiteId> a{0};
  const auto index = build_voronoi(two);
  EXPECT_DOUBLE_EQ(order_k_cell_polygon(two, a, box).area(),
                   voronoi_cell_polygon(index, 0, box).area());
}

TEST(OrderKCell, MembershipMatchesBruteForce) {
  const auto sites = uniform_sites(100, 42);
  const BBox box{0, 0, 1, 1};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Point x{u(rng), u(rng)};
  auto subset = brute_knn(sites, x, 3);
  const Polygon cell = order_k_cell_polygon(sites, subset, box);
  ASSERT_FALSE(cell.empty());
  EXPECT_TRUE(cell.contains(x));
  std::sort(subset.begin(), subset.end());
  // Sample the neighborhood of x so both outcomes occur often.
  std::uniform_real_distribution<double> near(-0.15, 0.15);
  int inside = 0;
  for (int i = 0; i < 10000; ++i) {
    const Point p{std::clamp(x.x + near(rng), 0.0, 1.0), std::clamp(x.y + near(rng), 0.0, 1.0)};
    auto knn = brute_knn(sites, p, 3);
    std::sort(knn.begin(), knn.end());
    const bool in = knn == subset;
    inside += in;
    EXPECT_EQ(cell.contains(p), in) << p.x << "," << p.y;
  }
  EXPECT_GT(inside, 0);
}

TEST(UpdateSites, AddRemoveAndRebuildEquivalence) {
  const auto one = build_voronoi({{0, {0, 0}}});
  const std::vector<SiteEdit> add{SiteEdit::add(1, {2, 0})};
  const auto two = update_sites(one, add);
  EXPECT_EQ(ids(two.neighbors(0)), std::vector<SiteId>{1});

  const auto sites = uniform_sites(100, 42);
  const auto base = build_voronoi(sites);
  const std::vector<SiteEdit> round_trip{SiteEdit::remove(17), SiteEdit::add(17, sites[17].pos)};
  const auto again = update_sites(base, round_trip);
  for (const Site& s : sites) EXPECT_EQ(ids(again.neighbors(s.id)), ids(base.neighbors(s.id)));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SiteEdit> script;
  for (int i = 0; i < 30; ++i) {
    switch (i % 3) {
      case 0: script.push_back(SiteEdit::add(1000 + i, {u(rng), u(rng)})); break;
      case 1: script.push_back(SiteEdit::move(i, {u(rng), u(rng)})); break;
      default: script.push_back(SiteEdit::remove(i + 40)); break;
    }
  }
  const auto edited = update_sites(base, script);
  const auto fresh = build_voronoi(apply_site_edits(sites, script));
  const auto oracle = brute_adjacency(fresh.sites());
  for (const Site& s : fresh.sites()) {
    EXPECT_EQ(ids(edited.neighbors(s.id)), ids(fresh.neighbors(s.id)));
    EXPECT_EQ(ids(edited.neighbors(s.id)), oracle.at(s.id));
  }

  const std::vector<SiteEdit> bad_remove{SiteEdit::remove(999)};
  EXPECT_EQ(code_of([&] { update_sites(base, bad_remove); }), ErrorCode::kNotFound);
  const std::vector<SiteEdit> collide{SiteEdit::move(1, sites[2].pos)};
  EXPECT_EQ(code_of([&] { update_sites(base, collide); }), ErrorCode::kCoincidentSites);
}

}  // namespace
