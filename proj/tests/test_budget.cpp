#include "doctest.h"
#include "wordent/budget.hpp"

#include <cmath>

using namespace wordent;

TEST_CASE("eval: examples") {
  Budget geo = Budget::ceil_geo(3, 2);
  CHECK(geo.eval(4) == 6.0);  // 1.5^4 = 5.0625
  Budget fib = Budget::fib_offset(2);
  CHECK(fib.eval(5) == 13.0);  // F_7
  Budget tab = Budget::table({2, 3, 4}, TableExtend::Error);
  CHECK(tab.eval(2) == 3.0);
  CHECK_THROWS_AS(tab.eval(4), EvalError);
  CHECK_THROWS_AS(geo.eval(0), RangeError);
}

TEST_CASE("ceil-geo is exact at large n") {
  // den^n (f(n) - 1) < num^n <= den^n f(n) certifies the ceiling
  Budget geo = Budget::ceil_geo(3, 2);
  for (int n : {1, 7, 40, 100, 200}) {
    BigUint f = *geo.eval_exact(n);
    BigUint num = BigUint::pow(3, n), den = BigUint::pow(2, n);
    BigUint denf = den * f;
    CHECK(num <= denf);
    CHECK(num + den > denf);  // num > den (f - 1)
  }
}

TEST_CASE("fib and pow exact values") {
  Budget fib = Budget::fib_offset(2);
  double a = 1, b = 1;  // F_1, F_2
  for (int n = 1; n <= 70; ++n) {
    double c = a + b;  // F_{n+2}
    CHECK(fib.eval(n) == c);
    a = b;
    b = c;
  }
  Budget p2 = Budget::pow(2);
  CHECK(p2.eval(10) == 1024.0);
  CHECK(p2.log_eval(53) == doctest::Approx(53.0 * std::log(2.0)).epsilon(1e-15));
}

TEST_CASE("check_cstar: examples") {
  SUBCASE("ceil-geo passes to 8 with the documented values") {
    Budget geo = Budget::ceil_geo(3, 2);
    double expect[] = {2, 3, 4, 6, 8, 12, 18, 26};
    for (int n = 1; n <= 8; ++n) CHECK(geo.eval(n) == expect[n - 1]);
    auto rep = geo.check_cstar(8);
    CHECK(rep.pass);
    CHECK(geo.cstar_status().state == CstarState::Verified);
    CHECK(geo.cstar_status().n == 8);
  }
  SUBCASE("strict-increase violation") {
    Budget tab = Budget::table({2, 3, 3}, TableExtend::Error);
    auto rep = tab.check_cstar(3);
    CHECK(!rep.pass);
    CHECK(rep.violation_n == 2);
    CHECK(rep.violation_kind == "strict-increase");
    CHECK(tab.cstar_status().state == CstarState::Violated);
  }
  SUBCASE("f(n) = n+1 passes") {
    std::vector<double> v;
    for (int n = 1; n <= 20; ++n) v.push_back(n + 1);
    Budget tab = Budget::table(v, TableExtend::Error);
    CHECK(tab.check_cstar(20).pass);
  }
  SUBCASE("floor violation") {
    Budget tab = Budget::table({1.5, 2.5, 3.5}, TableExtend::Error);
    auto rep = tab.check_cstar(3);
    CHECK(!rep.pass);
    CHECK(rep.violation_kind == "floor");
  }
}

TEST_CASE("estimate_e0: examples") {
  SUBCASE("pow 2 is exactly log 2") {
    Budget p2 = Budget::pow(2, std::log(2.0));
    p2.check_cstar(40);
    auto est = p2.estimate_e0(1, 40);
    CHECK(est.e0_estimate == std::log(2.0));  // exact by construction
    CHECK(est.floor_ok);
    CHECK(est.fekete_applies);
  }
  SUBCASE("ceil-geo within 0.02 of log 1.5") {
    Budget geo = Budget::ceil_geo(3, 2);
    auto est = geo.estimate_e0(1, 60);
    CHECK(est.e0_estimate == doctest::Approx(std::log(1.5)).epsilon(0.02 / 0.405));
    CHECK(est.e0_estimate >= std::log(1.5));
  }
  SUBCASE("fib floor with e0 = log phi") {
    double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    Budget fib = Budget::fib_offset(2, std::log(phi));
    auto est = fib.estimate_e0(1, 40);
    CHECK(est.floor_ok);
  }
}

TEST_CASE("find_growth_point: examples") {
  SUBCASE("pow 2") {
    Budget p2 = Budget::pow(2, std::log(2.0));
    auto r = p2.find_growth_point(5, 0.1, 20);
    REQUIRE(r.has_value());
    CHECK(*r == 5);
  }
  SUBCASE("fib") {
    double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    Budget fib = Budget::fib_offset(2, std::log(phi));
    auto r = fib.find_growth_point(10, 0.2, 20);
    REQUIRE(r.has_value());
    CHECK(*r == 10);
  }
  SUBCASE("flat stretch, exhaustive oracle") {
    // table flat at n = 4..6 then geometric; declared e0 from the tail
    std::vector<double> v;
    for (int n = 1; n <= 40; ++n) {
      if (n <= 3) v.push_back(std::pow(2.0, n));
      else if (n <= 6) v.push_back(8.0 + n * 0.001);
      else v.push_back(std::pow(2.0, n - 3));
    }
    Budget tab = Budget::table(v, TableExtend::Error, std::log(2.0) / 2.0);
    int horizon = 8;
    auto r = tab.find_growth_point(4, 0.8, horizon);
    // independent scan
    std::optional<int64_t> expect;
    for (int64_t np = 4; np <= (int64_t)std::floor(4 * 1.8); ++np) {
      bool ok = true;
      for (int j = 1; j <= horizon && ok; ++j)
        ok = std::log(v[np + j - 1]) - std::log(v[np - 1]) >= std::log(2.0) / 4.0 * j;
      if (ok) { expect = np; break; }
    }
    CHECK(r == expect);
    REQUIRE(r.has_value());
    CHECK(*r >= 6);  // at or after the end of the flat stretch
  }
  SUBCASE("requires declared e0") {
    Budget geo = Budget::ceil_geo(3, 2);
    CHECK_THROWS_AS(geo.find_growth_point(4, 0.1, 5), ArgumentError);
  }
}

TEST_CASE("growth point inequality is re-checkable verbatim") {
  double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  Budget fib = Budget::fib_offset(2, std::log(phi));
  auto r = fib.find_growth_point(7, 0.5, 15);
  REQUIRE(r.has_value());
  for (int j = 1; j <= 15; ++j)
    CHECK(fib.log_eval(*r + j) - fib.log_eval(*r) >= std::log(phi) * j / 2.0);
}

TEST_CASE("table extension policies") {
  Budget hull = Budget::table({2, 3, 4}, TableExtend::SubmultHull);
  // f(4) = min(f(1)f(3), f(2)f(2)) = min(8, 9) = 8
  CHECK(hull.eval(4) == 8.0);
  // hull preserves submultiplicativity by construction
  CHECK(hull.check_cstar(12).pass);
}

TEST_CASE("doubling property of e0 estimates under verified (C*)") {
  Budget geo = Budget::ceil_geo(3, 2);
  geo.check_cstar(60);
  double e1 = geo.estimate_e0(1, 30).e0_estimate;
  double e2 = geo.estimate_e0(1, 60).e0_estimate;
  CHECK(e2 <= e1 + 1e-12);
}

TEST_CASE("json round trip") {
  Budget fib = Budget::fib_offset(2, 0.4812118250596035);
  Budget back = Budget::from_json_text(fib.to_json_text());
  CHECK(back.kind() == BudgetKind::FibOffset);
  CHECK(back.eval(5) == 13.0);
  CHECK(back.declared_e0() == fib.declared_e0());
  Budget tab = Budget::from_json_text(
      R"({"kind":"table","values":[2,3,4],"extend":"submult-hull"})");
  CHECK(tab.eval(4) == 8.0);
  CHECK_THROWS_AS(Budget::from_json_text(R"({"kind":"nope"})"), ArgumentError);
}
