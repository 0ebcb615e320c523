#include "doctest.h"
#include "wordent/admissible.hpp"

#include <cmath>
#include <set>
#include <string>

using namespace wordent;

namespace {

// independent brute-force count: enumerate all q^n words, check every
// factor-length counter with string sets
uint64_t brute_count(const Budget& f, int q, int n) {
  uint64_t total = 0, ground = 1;
  for (int i = 0; i < n; ++i) ground *= q;
  for (uint64_t c = 0; c < ground; ++c) {
    std::string s(n, '0');
    uint64_t v = c;
    for (int i = n; i-- > 0;) {
      s[i] = (char)('0' + v % q);
      v /= q;
    }
    bool ok = true;
    for (int m = 1; m <= n && ok; ++m) {
      std::set<std::string> fs;
      for (int st = 0; st + m <= n; ++st) fs.insert(s.substr(st, m));
      if ((double)fs.size() > std::floor(f.eval(m))) ok = false;
    }
    if (ok) ++total;
  }
  return total;
}

}  // namespace

TEST_CASE("count_admissible: examples") {
  SUBCASE("f(1) = 1 leaves the two constant words") {
    Budget one = Budget::table({1, 1, 1, 1, 1, 1, 1, 1}, TableExtend::Error);
    for (int n : {1, 3, 6}) CHECK(count_admissible(one, Alphabet(2), n).count == 2);
  }
  SUBCASE("fib at n = 3") {
    Budget fib = Budget::fib_offset(2);
    auto c = count_admissible(fib, Alphabet(2), 3);
    CHECK(c.count == 8);
  }
  SUBCASE("ceil-geo at n = 3") {
    Budget geo = Budget::ceil_geo(3, 2);
    auto c = count_admissible(geo, Alphabet(2), 3);
    CHECK(c.count == 8);
    CHECK(c.u_value == doctest::Approx(std::log(8.0) / 3.0).epsilon(1e-12));
  }
}

TEST_CASE("counts match the brute-force enumerator") {
  Budget fib = Budget::fib_offset(2);
  Budget geo = Budget::ceil_geo(3, 2);
  for (int n = 1; n <= 10; ++n) {
    CHECK(count_admissible(fib, Alphabet(2), n).count == brute_count(fib, 2, n));
    CHECK(count_admissible(geo, Alphabet(2), n).count == brute_count(geo, 2, n));
  }
  // a ternary budget
  Budget tab = Budget::table({2, 5, 9, 17, 33, 65}, TableExtend::SubmultHull);
  for (int n = 1; n <= 6; ++n)
    CHECK(count_admissible(tab, Alphabet(3), n).count == brute_count(tab, 3, n));
}

TEST_CASE("enumerate_admissible: examples") {
  SUBCASE("f(1) = 1") {
    Budget one = Budget::table({1, 1, 1}, TableExtend::Error);
    auto ws = enumerate_admissible(one, Alphabet(2), 3, 10);
    REQUIRE(ws.size() == 2);
    CHECK(ws[0].digits() == "000");
    CHECK(ws[1].digits() == "111");
  }
  SUBCASE("fib n = 2 admits all four words") {
    auto ws = enumerate_admissible(Budget::fib_offset(2), Alphabet(2), 2, 10);
    CHECK(ws.size() == 4);
  }
  SUBCASE("limit 1 yields the constant word") {
    auto ws = enumerate_admissible(Budget::ceil_geo(3, 2), Alphabet(2), 6, 1);
    REQUIRE(ws.size() == 1);
    CHECK(ws[0].digits() == "000000");
  }
}

TEST_CASE("upper_bound_sequence and submultiplicativity") {
  Budget fib = Budget::fib_offset(2);
  auto seq = upper_bound_sequence(fib, Alphabet(2), 16);
  REQUIRE(seq.size() == 16);
  double logphi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
  for (auto& u : seq) {
    CHECK(u.count > 0);
    CHECK(u.u_value >= logphi - 1e-9);  // the golden-mean shift lies in W(f)
  }
  for (int a = 1; a <= 16; ++a)
    for (int b = a; a + b <= 16; ++b)
      CHECK(seq[a + b - 1].count <= seq[a - 1].count * seq[b - 1].count);
}

TEST_CASE("factor closure: factors of admissible words are admissible") {
  Budget geo = Budget::ceil_geo(3, 2);
  auto ws = enumerate_admissible(geo, Alphabet(2), 9, 200);
  auto adm6 = enumerate_admissible(geo, Alphabet(2), 6, 100000);
  for (auto& w : ws)
    for (size_t st = 0; st + 6 <= w.size(); ++st) {
      Word sub = w.subword(st, st + 6);
      CHECK(std::binary_search(adm6.begin(), adm6.end(), sub));
    }
}

TEST_CASE("ext_depth tightens counts and never raises them") {
  Budget fib = Budget::fib_offset(2);
  AdmissibleOptions o0, o2, o5;
  o2.ext_depth = 2;
  o5.ext_depth = 5;
  for (int n : {4, 8, 12}) {
    auto c0 = count_admissible(fib, Alphabet(2), n, o0);
    auto c2 = count_admissible(fib, Alphabet(2), n, o2);
    auto c5 = count_admissible(fib, Alphabet(2), n, o5);
    CHECK(c2.count <= c0.count);
    CHECK(c5.count <= c2.count);
    CHECK(c5.count > 0);
  }
}

TEST_CASE("ext_depth brute-force cross-check") {
  // count words of length n extendable by k symbols under the budget equals
  // the number of distinct length-n prefixes of admissible length-(n+k) words
  Budget geo = Budget::ceil_geo(3, 2);
  int n = 6, k = 3;
  auto full = enumerate_admissible(geo, Alphabet(2), n + k, 1000000);
  std::set<std::string> prefixes;
  for (auto& w : full) prefixes.insert(w.subword(0, n).digits());
  AdmissibleOptions ok;
  ok.ext_depth = k;
  CHECK(count_admissible(geo, Alphabet(2), n, ok).count == prefixes.size());
}

TEST_CASE("determinism across thread counts") {
  Budget fib = Budget::fib_offset(2);
  AdmissibleOptions t1, t4;
  t1.threads = 1;
  t4.threads = 4;
  auto a = upper_bound_sequence(fib, Alphabet(2), 14, t1);
  auto b = upper_bound_sequence(fib, Alphabet(2), 14, t4);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].count == b[i].count);
    CHECK(a[i].u_value == b[i].u_value);  // bit identical
  }
}

TEST_CASE("node ceiling raises a resource error naming the length") {
  Budget p2 = Budget::pow(2);
  AdmissibleOptions o;
  o.max_nodes = 50;
  CHECK_THROWS_AS(count_admissible(p2, Alphabet(2), 20, o), ResourceError);
}

TEST_CASE("partial upper-bound scan degrades gracefully under the ceiling") {
  Budget p2 = Budget::pow(2);
  AdmissibleOptions o;
  o.max_nodes = 2000;  // enough for depth ~9 of the full binary tree
  auto res = upper_bound_sequence_partial(p2, Alphabet(2), 20, o);
  CHECK(res.partial);
  CHECK(res.requested_n_max == 20);
  CHECK(res.counts.size() >= 1);
  CHECK(res.counts.size() < 20);
  for (auto& u : res.counts) CHECK(u.count == (uint64_t(1) << u.n));
  // an untripped scan is not flagged
  auto full = upper_bound_sequence_partial(p2, Alphabet(2), 8, o);
  CHECK(!full.partial);
  CHECK(full.counts.size() == 8);
}
