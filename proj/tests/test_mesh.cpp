#include "orishell/mesh.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <set>

using namespace orishell;
using namespace orishell::testing;

namespace {
const Material kMat{1e6, 0.3, 0.01};
}

TEST_CASE("single unit-square quad, no creases") {
  std::vector<Vec3> coords = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  Mesh m = build_mesh(coords, {{0, 1, 2, 3}}, {0}, {}, kMat);
  CHECK(m.num_elements() == 1);
  CHECK(m.creases.empty());
  init_directors(m);
  DofMap d = build_dof_map(m);
  CHECK(d.total_dofs == 24);
  for (int s = 0; s < m.num_slots(); ++s)
    CHECK((m.slot_director[s] - Vec3(0, 0, 0.005)).norm() == doctest::Approx(0.0));
}

TEST_CASE("two quads sharing an edge across panels") {
  Mesh m = two_panel_mesh(kMat, 0.1);
  REQUIRE(m.creases.size() == 1);
  CHECK(m.creases[0].params.l == doctest::Approx(1.0));
  CHECK(m.elements[m.creases[0].elem_a].panel != m.elements[m.creases[0].elem_b].panel);

  DofMap d = build_dof_map(m);
  CHECK(m.num_slots() == 8);  // each panel x its 4 nodes
  CHECK(d.total_dofs == 42);  // 18 translational + 24 director

  // Coplanar panels: duplicated but equal directors at crease nodes.
  for (int node : {1, 4}) {
    REQUIRE(m.node_slots[node].size() == 2);
    Vec3 d0 = m.slot_director[m.node_slots[node][0]];
    Vec3 d1 = m.slot_director[m.node_slots[node][1]];
    CHECK((d0 - d1).norm() == doctest::Approx(0.0));
  }
}

TEST_CASE("slot count equals number of incident panels") {
  Mesh m = two_panel_mesh(kMat, 0.1);
  std::vector<std::set<int>> node_panels(m.num_nodes());
  for (const auto& el : m.elements)
    for (int n : el.nodes) node_panels[n].insert(el.panel);
  for (int n = 0; n < m.num_nodes(); ++n)
    CHECK(m.node_slots[n].size() == node_panels[n].size());
}

TEST_CASE("dof numbering is a dense bijection and deterministic") {
  Mesh m = two_panel_mesh(kMat, 0.1);
  DofMap d1 = build_dof_map(m);
  std::set<int> seen;
  for (int n = 0; n < m.num_nodes(); ++n)
    for (int c = 0; c < 3; ++c) seen.insert(d1.trans_dof(n, c));
  for (int s = 0; s < m.num_slots(); ++s)
    for (int c = 0; c < 3; ++c) seen.insert(d1.slot_dof(s, c));
  CHECK(static_cast<int>(seen.size()) == d1.total_dofs);
  CHECK(*seen.begin() == 0);
  CHECK(*seen.rbegin() == d1.total_dofs - 1);

  Mesh m2 = two_panel_mesh(kMat, 0.1);
  DofMap d2 = build_dof_map(m2);
  CHECK(d1.trans_base == d2.trans_base);
  CHECK(d1.slot_base == d2.slot_base);
}

TEST_CASE("build_mesh error paths") {
  std::vector<Vec3> coords = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {5, 5, 5}};

  SUBCASE("dangling node") {
    CHECK_THROWS_WITH_AS(build_mesh(coords, {{0, 1, 2, 3}}, {0}, {}, kMat),
                         doctest::Contains("not used"), Error);
  }
  SUBCASE("degenerate element") {
    std::vector<Vec3> c2 = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {3, 0, 0}};  // collinear
    CHECK_THROWS_AS(build_mesh(c2, {{0, 1, 2, 3}}, {0}, {}, kMat), Error);
  }
  SUBCASE("non-manifold crease") {
    // three elements share edge (1,4)
    std::vector<Vec3> c3 = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0},
                            {1, 1, 0}, {2, 1, 0}, {1, 0, 1}, {1, 1, 1}};
    std::vector<std::array<int, 4>> quads = {{0, 1, 4, 3}, {1, 2, 5, 4}, {4, 1, 6, 7}};
    CreaseSpec cs;
    cs.node1 = 1;
    cs.node2 = 4;
    cs.k_f = 0.1;
    CHECK_THROWS_AS(build_mesh(c3, quads, {0, 1, 2}, {cs}, kMat), Error);
  }
}

TEST_CASE("non-flat panel rejected") {
  std::vector<Vec3> coords = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0.3},
                              {0, 1, 0}, {1, 1, 0}, {2, 1, 0.3}};
  std::vector<std::array<int, 4>> quads = {{0, 1, 4, 3}, {1, 2, 5, 4}};
  Mesh m = build_mesh(coords, quads, {0, 0}, {}, kMat);
  CHECK_THROWS_AS(init_directors(m), Error);
}

TEST_CASE("flat panel directors have magnitude h/2 and panel normal") {
  auto X = distorted_quad();
  std::vector<Vec3> coords(X.begin(), X.end());
  Mesh m = build_mesh(coords, {{0, 1, 2, 3}}, {0}, {}, kMat);
  init_directors(m);
  for (int s = 0; s < m.num_slots(); ++s) {
    CHECK(m.slot_director[s].norm() == doctest::Approx(0.005).epsilon(1e-12));
    // perpendicular to both incident edge tangents
    int node = m.slot_node[s];
    for (int k = 0; k < 4; ++k)
      if (m.elements[0].nodes[k] == node) {
        Vec3 e1 = coords[m.elements[0].nodes[(k + 1) % 4]] - coords[node];
        Vec3 e2 = coords[m.elements[0].nodes[(k + 3) % 4]] - coords[node];
        CHECK(std::abs(m.slot_director[s].dot(e1.normalized())) < 1e-12 * kMat.h);
        CHECK(std::abs(m.slot_director[s].dot(e2.normalized())) < 1e-12 * kMat.h);
      }
  }
}

TEST_CASE("crease invariant validation") {
  std::vector<Vec3> coords = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0},
                              {0, 1, 0}, {1, 1, 0}, {2, 1, 0}};
  std::vector<std::array<int, 4>> quads = {{0, 1, 4, 3}, {1, 2, 5, 4}};
  CreaseSpec cs;
  cs.node1 = 1;
  cs.node2 = 4;
  cs.k_f = 0.1;
  cs.theta0 = 0.5;
  cs.thetaL = 1.0;  // violates thetaL <= theta0
  CHECK_THROWS_AS(build_mesh(coords, quads, {0, 1}, {cs}, kMat), Error);
}
