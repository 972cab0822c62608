#include <doctest.h>

#include <set>

#include "tfa/grid.hpp"
#include "tfa/rng.hpp"
#include "tfa/signature.hpp"

using namespace tfa;

TEST_CASE("cells nest and sides are exact powers of three") {
  GridConfig g(2, 2);
  TriadicCube q{g, 1, {4, -7, 0}};
  CHECK(q.side() == Rat(1, 9));
  CHECK(q.low(0) == Rat(4, 9));
  CHECK(q.high(1) == Rat(-6, 9));
  TriadicCube p = q.parent();
  CHECK(p.level == 0);
  CHECK(p.contains(q));
  CHECK(p.side() == Rat(1));
  // negative index rounds toward -infinity
  CHECK(p.idx[1] == -1);
}

TEST_CASE("grid property: same-grid cells meet only by containment") {
  GridConfig g(1, 1);
  Rng rng(7);
  for (int it = 0; it < 2000; ++it) {
    TriadicCube a{g, (int)rng.range(-2, 3), {rng.range(-40, 40), 0, 0}};
    TriadicCube b{g, (int)rng.range(-2, 3), {rng.range(-40, 40), 0, 0}};
    bool meet = a.meets(b);
    bool contain = a.contains(b) || b.contains(a);
    CHECK(meet == contain);
    // cross-check with interval arithmetic on the half-open cells
    bool overlap = a.low(0) < b.high(0) && b.low(0) < a.high(0);
    CHECK(overlap == meet);
  }
}

TEST_CASE("shifted grids keep the nesting property") {
  // the 1/2-shift has an all-ones ternary expansion, so level boundaries align
  GridConfig g(1, 1, {Rat(1, 2)});
  Rng rng(99);
  for (int it = 0; it < 500; ++it) {
    TriadicCube c{g, (int)rng.range(0, 4), {rng.range(-30, 30), 0, 0}};
    TriadicCube p = c.parent();
    CHECK(p.low(0) <= c.low(0));
    CHECK(c.high(0) <= p.high(0));
  }
}

TEST_CASE("peripheral children enumerate universally") {
  GridConfig g(2, 1);
  TriadicCube a{g, 0, {0, 0, 0}};
  TriadicCube b{g, 2, {5, -4, 0}};
  CHECK(a.peripheral_count() == 8);
  std::set<std::array<long long, 3>> seen;
  for (long long tau = 1; tau <= a.peripheral_count(); ++tau) {
    auto ra = a.child_relpos(tau);
    auto rb = b.child_relpos(tau);
    CHECK(ra == rb);  // identical relative position in both cells
    seen.insert(ra);
    CHECK(!(ra[0] == 1 && ra[1] == 1));  // never the concentric child
  }
  CHECK(seen.size() == 8);
  TriadicCube cc = a.center_child();
  CHECK(cc.center(0) == a.center(0));
  CHECK(cc.center(1) == a.center(1));
}

TEST_CASE("cell_at locates points exactly") {
  GridConfig g(2, 2);
  RatVec x = {Rat(5, 7), Rat(-3, 11)};
  for (int lvl = 0; lvl <= 2; ++lvl) {
    TriadicCube c = cell_at(g, lvl, x);
    CHECK(c.contains_point(x));
  }
}

TEST_CASE("signature: all-zero and all-one extremes") {
  GridConfig g(1, 1);
  // 1/2 = 0.111..._3 sits in the concentric child at every level
  RatVec half = {Rat(1, 2)};
  CHECK(!has_triadic_coordinate(g, half, 30));
  Signature s0 = signature(half, g, 30);
  for (auto d : s0.digits) CHECK(d == 0);
  CHECK(s0.value() == doctest::Approx(0.0));
  // 1/4 = 0.020202..._3 avoids every concentric child: signature 1/2
  RatVec quarter = {Rat(1, 4)};
  Signature s1 = signature(quarter, g, 30);
  for (auto d : s1.digits) CHECK(d == 1);
  CHECK(s1.value() == doctest::Approx(0.5).epsilon(1e-9));
  // a triadic coordinate is rejected
  RatVec third = {Rat(1, 3)};
  CHECK_THROWS_AS(signature(third, g, 20), SignatureError);
}

TEST_CASE("signature ordering is exact lexicographic on digits") {
  Signature a, b;
  a.digits = {0, 1, 0};
  b.digits = {0, 1, 1};
  CHECK(a < b);
  CHECK(a.to_rational() == Rat(3, 27));
  CHECK(b.to_rational() == Rat(4, 27));
}
