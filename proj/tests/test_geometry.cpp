#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "causalfuzz/geometry.hpp"
#include "causalfuzz/rng.hpp"
#include "geometry_oracle.hpp"

using namespace causalfuzz;

using causalfuzz::testing::random_obb;
using causalfuzz::testing::sampled_obb_distance;

TEST_CASE("angle wrapping") {
  CHECK(wrap_angle_signed(3.5 * 3.14159265358979) ==
        doctest::Approx(-0.5 * 3.14159265358979));
  CHECK(wrap_angle_2pi(-0.1) == doctest::Approx(2.0 * 3.14159265358979 - 0.1));
  CHECK(wrap_angle_signed(0.25) == doctest::Approx(0.25));
}

TEST_CASE("local frame puts forward on +y") {
  // Vehicle heading east: a point dead ahead has local (0, d).
  const Vec2 local = to_local_frame({10, 0}, {0, 0}, 0.0);
  CHECK(local.x == doctest::Approx(0.0));
  CHECK(local.y == doctest::Approx(10.0));
  // A point to the right of travel (south) has positive local x.
  const Vec2 right = to_local_frame({0, -3}, {0, 0}, 0.0);
  CHECK(right.x == doctest::Approx(3.0));
  CHECK(right.y == doctest::Approx(0.0));
}

TEST_CASE("identical rectangles overlap at distance zero") {
  Obb a{{3, 4}, 0.7, 2.3, 1.0};
  CHECK(min_bb_distance(a, a) == 0.0);
}

TEST_CASE("axis-aligned boxes 10 m apart are 6 m face to face") {
  Obb a{{0, 0}, 0.0, 2.0, 1.0};
  Obb b{{10, 0}, 0.0, 2.0, 1.0};
  CHECK(min_bb_distance(a, b) == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("touching boxes have distance zero") {
  Obb a{{0, 0}, 0.0, 2.0, 1.0};
  Obb b{{4, 0}, 0.0, 2.0, 1.0};
  CHECK(min_bb_distance(a, b) == 0.0);
  CHECK(obb_intersects(a, b));
}

TEST_CASE("distance matches point-sampling oracle on random pose pairs") {
  Rng rng(20240601);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const Obb a = random_obb(rng);
    const Obb b = random_obb(rng);
    const double got = min_bb_distance(a, b);
    const double expected = sampled_obb_distance(a, b);
    CHECK(std::abs(got - expected) <= 1e-3);
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("distance is exactly symmetric and zero iff intersecting") {
  Rng rng(77);
  for (int i = 0; i < 500; ++i) {
    const Obb a = random_obb(rng);
    const Obb b = random_obb(rng);
    const double ab = min_bb_distance(a, b);
    const double ba = min_bb_distance(b, a);
    CHECK(ab == ba);  // bitwise
    CHECK((ab == 0.0) == obb_intersects(a, b));
  }
}

TEST_CASE("segment intersection basics") {
  Vec2 p;
  CHECK(segments_intersect({0, 0}, {2, 2}, {0, 2}, {2, 0}, &p));
  CHECK(p.x == doctest::Approx(1.0));
  CHECK(p.y == doctest::Approx(1.0));
  CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}, nullptr));
}
