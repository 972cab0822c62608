#include <doctest.h>

#include "tfa/rational.hpp"

using namespace tfa;

TEST_CASE("rational arithmetic reduces and compares exactly") {
  Rat a(1, 3), b(1, 6);
  CHECK(a + b == Rat(1, 2));
  CHECK(a - b == Rat(1, 6));
  CHECK(a * b == Rat(1, 18));
  CHECK(a / b == Rat(2));
  CHECK(Rat(-2, -4) == Rat(1, 2));
  CHECK(Rat(2, -4) == Rat(-1, 2));
  CHECK(Rat(7, 3) > Rat(16, 7));
  CHECK(Rat(-5, 3).floor() == -2);
  CHECK(Rat(6, 3).floor() == 2);
}

TEST_CASE("pow3 covers the working exponent range") {
  CHECK(pow3(0) == Rat(1));
  CHECK(pow3(3) == Rat(27));
  CHECK(pow3(-2) == Rat(1, 9));
  CHECK(pow3(39) * pow3(-39) == Rat(1));
  CHECK_THROWS_AS(pow3(40), std::overflow_error);
}

TEST_CASE("overflow is detected, not wrapped") {
  Rat big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}

TEST_CASE("floor_div matches grid indexing on negatives") {
  CHECK(floor_div(Rat(-1, 3), Rat(1, 3)) == -1);
  CHECK(floor_div(Rat(-2, 3), Rat(1, 3)) == -2);
  CHECK(floor_div(Rat(1, 3), Rat(1, 3)) == 1);
  CHECK(floor_div(Rat(5, 9), Rat(1, 3)) == 1);
}
