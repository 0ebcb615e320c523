#include "doctest.h"
#include "wordent/bigint.hpp"

#include <cmath>

using wordent::BigUint;

TEST_CASE("small arithmetic") {
  BigUint a(7), b(5);
  CHECK((a + b).as_u64() == 12);
  CHECK((a * b).as_u64() == 35);
  CHECK(a > b);
  CHECK(BigUint(0).is_zero());
  BigUint c(100);
  CHECK(c.divmod_small(7) == 2);
  CHECK(c.as_u64() == 14);
}

TEST_CASE("pow and carries") {
  BigUint p = BigUint::pow(2, 64);
  CHECK(!p.fits_u64());
  CHECK(p.to_string() == "18446744073709551616");
  BigUint q = BigUint::pow(10, 25);
  CHECK(q.to_string() == "10000000000000000000000000");
  for (int i = 0; i < 25; ++i) CHECK(q.divmod_small(10) == 0);
  CHECK(q.as_u64() == 1);
}

TEST_CASE("multiplication against repeated addition") {
  BigUint a = BigUint::pow(3, 50);
  BigUint sum;
  for (int i = 0; i < 9; ++i) sum += a;
  BigUint prod = a;
  prod.mul_small(9);
  CHECK(sum == prod);
  CHECK((a * BigUint(9)) == prod);
}

TEST_CASE("log accuracy") {
  CHECK(BigUint(1).log_nat() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(BigUint::pow(2, 100).log_nat() ==
        doctest::Approx(100.0 * std::log(2.0)).epsilon(1e-13));
  CHECK(BigUint::pow(7, 333).log_nat() ==
        doctest::Approx(333.0 * std::log(7.0)).epsilon(1e-13));
}

TEST_CASE("comparison across sizes") {
  CHECK(BigUint::pow(2, 100) > BigUint::pow(2, 99));
  CHECK(BigUint::pow(2, 100) < BigUint::pow(3, 100));
  CHECK(BigUint::pow(6, 10) == BigUint::pow(2, 10) * BigUint::pow(3, 10));
}
