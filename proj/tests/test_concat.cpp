#include "doctest.h"
#include "wordent/concat.hpp"

#include <cmath>
#include <random>
#include <set>
#include <string>

using namespace wordent;

namespace {

Word w2(std::string_view d) { return Word::from_digits(Alphabet(2), d); }

std::vector<Word> golden_blocks(int m) {
  std::vector<Word> out;
  for (uint32_t c = 0; c < (1u << m); ++c) {
    std::string s(m, '0');
    for (int i = 0; i < m; ++i) s[i] = (char)('0' + ((c >> (m - 1 - i)) & 1));
    bool ok = s[m - 1] == '0' && s.find("11") == std::string::npos;
    if (ok) out.push_back(w2(s));
  }
  return out;
}

// brute-force language counts: windows of all (ceil(n/m)+1)-tuples, with the
// window start ranging over the first block
std::vector<uint64_t> brute_concat_counts(const std::vector<Word>& z, int n_max) {
  int m = (int)z[0].size();
  int k = (n_max + m - 1) / m + 1;
  std::vector<std::string> blocks;
  for (auto& b : z) blocks.push_back(b.digits());
  std::vector<std::set<std::string>> lang(n_max + 1);
  std::vector<size_t> tuple((size_t)k, 0);
  for (;;) {
    std::string s;
    for (size_t j = 0; j < (size_t)k; ++j) s += blocks[tuple[j]];
    for (int n = 1; n <= n_max; ++n)
      for (int st = 0; st < m && st + n <= (int)s.size(); ++st)
        lang[n].insert(s.substr(st, n));
    size_t pos = k;
    while (pos > 0 && ++tuple[pos - 1] == z.size()) tuple[--pos] = 0;
    if (pos == 0) break;
  }
  std::vector<uint64_t> out(n_max + 1);
  for (int n = 1; n <= n_max; ++n) out[n] = lang[n].size();
  return out;
}

}  // namespace

TEST_CASE("champernowne: examples") {
  CHECK(champernowne({w2("0"), w2("1")}, 10).digits() == "0100011011");
  // a single block repeats
  Word rep = champernowne({w2("011")}, 30);
  CHECK(rep.size() == 30);
  for (int n = 1; n <= 8; ++n) CHECK(distinct_factor_count(rep, n) <= 3);
  // 13 length-6 blocks: the pairs section fits in 1e4 symbols, so the prefix
  // carries at least 13^2 distinct length-12 factors
  auto z13 = golden_blocks(6);
  REQUIRE(z13.size() == 13);
  Word champ = champernowne(z13, 10000);
  CHECK(distinct_factor_count(champ, 12) >= 169);
}

TEST_CASE("champernowne completeness: |Z|^k distinct factors at length km") {
  std::vector<Word> z{w2("001"), w2("010"), w2("100"), w2("111")};
  int m = 3;
  size_t t = z.size();
  for (int k = 1; k <= 3; ++k) {
    // the prefix containing every section up to the k-tuples
    uint64_t len = 0;
    uint64_t sect = 1;
    for (int j = 1; j <= k; ++j) {
      sect *= t;
      len += sect * (uint64_t)(j * m);
    }
    Word champ = champernowne(z, len);
    uint64_t expect = 1;
    for (int j = 0; j < k; ++j) expect *= t;
    CHECK(distinct_factor_count(champ, k * m) >= expect);
  }
}

TEST_CASE("concat_language_counts: examples") {
  SUBCASE("{00, 10}") {
    auto table = concat_language_counts(ConcatSystem::from_blocks({w2("00"), w2("10")}), 3);
    CHECK(table.count_u64(1) == 2);
    CHECK(table.count_u64(2) == 3);
    CHECK(table.count_u64(3) == 5);
  }
  SUBCASE("single 0 block") {
    auto table = concat_language_counts(ConcatSystem::from_blocks({w2("0")}), 5);
    for (int n = 1; n <= 5; ++n) CHECK(table.count_u64(n) == 1);
  }
  SUBCASE("all q^2 blocks give the full shift") {
    std::vector<Word> z{w2("00"), w2("01"), w2("10"), w2("11")};
    auto table = concat_language_counts(ConcatSystem::from_blocks(z), 8);
    for (int n = 1; n <= 8; ++n) CHECK(table.count_u64(n) == (uint64_t(1) << n));
  }
}

TEST_CASE("concat counts match brute force on random systems") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 30; ++rep) {
    int m = 2 + (int)(rng() % 4);
    int max_t = (int)std::min<uint64_t>(5, uint64_t(1) << m);
    int t = 1 + (int)(rng() % max_t);
    std::set<uint64_t> codes;
    while ((int)codes.size() < t) codes.insert(rng() % (uint64_t(1) << m));
    std::vector<Word> z;
    for (uint64_t c : codes) z.push_back(Word::from_code(Alphabet(2), c, m));
    int n_max = std::min(3 * m, 12);
    auto table = concat_language_counts(ConcatSystem::from_blocks(z), n_max);
    auto brute = brute_concat_counts(z, n_max);
    for (int n = 1; n <= n_max; ++n) CHECK(table.count_u64(n) == brute[n]);
  }
}

TEST_CASE("concat counts agree with brute force on the m=6 golden system") {
  auto z = golden_blocks(6);
  auto table = concat_language_counts(ConcatSystem::from_blocks(z), 18);
  auto brute = brute_concat_counts(z, 18);
  for (int n = 1; n <= 18; ++n) CHECK(table.count_u64(n) == brute[n]);
}

TEST_CASE("tail-bound invariant: counts(n) <= m |Z|^(ceil(n/m)+1)") {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    int m = 2 + (int)(rng() % 3);
    int t = 2 + (int)(rng() % 3);
    std::set<uint64_t> codes;
    while ((int)codes.size() < t) codes.insert(rng() % (uint64_t(1) << m));
    std::vector<Word> z;
    for (uint64_t c : codes) z.push_back(Word::from_code(Alphabet(2), c, m));
    ConcatSystem sys = ConcatSystem::from_blocks(z);
    auto table = concat_language_counts(sys, 3 * m);
    for (int n = 1; n <= 3 * m; ++n) {
      BigUint bound((uint64_t)m);
      unsigned e = (unsigned)((n + m - 1) / m + 1);
      bound = bound * BigUint::pow(sys.blocks.size(), e);
      CHECK(table.count(n) <= bound);
    }
  }
}

TEST_CASE("certify_lower_bound: examples") {
  double logphi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
  Budget fib = Budget::fib_offset(2, logphi);
  SUBCASE("{00, 10} is sound with H* = 16") {
    auto out = certify_lower_bound(ConcatSystem::from_blocks({w2("00"), w2("10")}), fib,
                                   logphi, 20);
    REQUIRE(out.kind == CertifyOutcome::Kind::Accepted);
    CHECK(out.certificate->value == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
    CHECK(out.certificate->tail_start == 16);
    CHECK(out.certificate->status == CertStatus::Sound);
  }
  SUBCASE("all four length-2 blocks violate at n = 2") {
    std::vector<Word> z{w2("00"), w2("01"), w2("10"), w2("11")};
    auto out = certify_lower_bound(ConcatSystem::from_blocks(z), fib, logphi, 10);
    REQUIRE(out.kind == CertifyOutcome::Kind::Violation);
    CHECK(out.violation_n == 2);
  }
  SUBCASE("precondition rejection reports the margin") {
    // the full shift respects f = 2^n everywhere, but log|Z|/m = e0 leaves
    // no tail gap, so the certificate is rejected with a margin report
    Budget p2 = Budget::pow(2, std::log(2.0));
    std::vector<Word> z{w2("0"), w2("1")};
    auto out = certify_lower_bound(ConcatSystem::from_blocks(z), p2, std::log(2.0), 10);
    REQUIRE(out.kind == CertifyOutcome::Kind::Rejected);
    CHECK(out.reject_reason.find("margin") != std::string::npos);
  }
  SUBCASE("over-rich systems report the smallest violating length") {
    // log|Z|/m >= e0 and the counts already break the budget at n = 2
    std::vector<Word> z{w2("0"), w2("1")};
    auto out = certify_lower_bound(ConcatSystem::from_blocks(z), fib, logphi, 10);
    REQUIRE(out.kind == CertifyOutcome::Kind::Violation);
    CHECK(out.violation_n == 2);
  }
}

TEST_CASE("certificate re-verification from scratch") {
  // independent counting path: brute-force window enumeration, then the tail
  // algebra  log m + (ceil(n/m)+1) log t <= e0 n  for n > H*
  double logphi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
  Budget fib = Budget::fib_offset(2, logphi);
  std::vector<Word> z{w2("00"), w2("10")};
  auto out = certify_lower_bound(ConcatSystem::from_blocks(z), fib, logphi, 20);
  REQUIRE(out.kind == CertifyOutcome::Kind::Accepted);
  const auto& cert = *out.certificate;
  auto brute = brute_concat_counts(z, cert.checked_horizon);
  for (int n = 1; n <= cert.checked_horizon; ++n)
    CHECK((double)brute[n] <= fib.eval(n));
  double value = std::log(2.0) / 2.0;
  for (int n = cert.tail_start; n <= cert.tail_start + 50; ++n) {
    double lhs = std::log(2.0) + ((n + 1) / 2 + 1) * std::log(2.0);
    CHECK(lhs <= cert.e0_used * n + 1e-9);
  }
  CHECK(cert.value == doctest::Approx(value));
}

TEST_CASE("partial counts stop at the guard without losing the prefix") {
  auto z = golden_blocks(8);
  ConcatCountOptions opts;
  opts.max_states = 200;
  auto [table, reached] = concat_language_counts_partial(ConcatSystem::from_blocks(z), 30, opts);
  CHECK(reached < 30);
  CHECK(reached >= 8);
  auto brute = brute_concat_counts(z, std::min(reached, 16));
  for (int n = 1; n <= std::min(reached, 16); ++n) CHECK(table.count_u64(n) == brute[n]);
  CHECK_THROWS_AS(concat_language_counts(ConcatSystem::from_blocks(z), 30, opts), ResourceError);
}

TEST_CASE("long blocks fall back to the subset engine and stay exact") {
  // block length 30 exceeds the bitmap guard, so counting runs on the
  // subset-construction engine; brute force checks the prefix
  std::string b1(30, '0');
  std::string b2, b3;
  for (int i = 0; i < 15; ++i) b2 += "01";
  for (int i = 0; i < 10; ++i) b3 += "001";
  std::vector<Word> z{w2(b1), w2(b2), w2(b3)};
  auto table = concat_language_counts(ConcatSystem::from_blocks(z), 12);
  auto brute = brute_concat_counts(z, 12);
  for (int n = 1; n <= 12; ++n) CHECK(table.count_u64(n) == brute[n]);
}

TEST_CASE("certification through the subset engine") {
  double logphi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
  Budget fib = Budget::fib_offset(2, logphi);
  // two length-30 blocks: value = log(2)/30, H* stays inside the exact range
  std::string b1(30, '0');
  std::string b2 = b1;
  b2[10] = '1';
  auto out = certify_lower_bound(ConcatSystem::from_blocks({w2(b1), w2(b2)}), fib, logphi, 12);
  REQUIRE(out.kind == CertifyOutcome::Kind::Accepted);
  CHECK(out.certificate->value == doctest::Approx(std::log(2.0) / 30.0).epsilon(1e-12));
  CHECK(out.certificate->status == CertStatus::Sound);
}

TEST_CASE("ternary concat counts match brute force") {
  Alphabet a3(3);
  std::vector<Word> z{Word::from_digits(a3, "012"), Word::from_digits(a3, "120"),
                      Word::from_digits(a3, "200")};
  auto table = concat_language_counts(ConcatSystem::from_blocks(z), 9);
  auto brute = brute_concat_counts(z, 9);
  for (int n = 1; n <= 9; ++n) CHECK(table.count_u64(n) == brute[n]);
}

TEST_CASE("certification soundness fuzz: accepted systems verify by brute force") {
  double logphi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
  Budget fib = Budget::fib_offset(2, logphi);
  std::mt19937_64 rng(404);
  int accepted = 0, violated = 0;
  for (int rep = 0; rep < 40; ++rep) {
    int m = 2 + (int)(rng() % 4);
    int max_t = (int)std::min<uint64_t>(4, uint64_t(1) << m);
    int t = 1 + (int)(rng() % max_t);
    std::set<uint64_t> codes;
    while ((int)codes.size() < t) codes.insert(rng() % (uint64_t(1) << m));
    std::vector<Word> z;
    for (uint64_t c : codes) z.push_back(Word::from_code(Alphabet(2), c, m));
    ConcatSystem sys = ConcatSystem::from_blocks(z);
    auto out = certify_lower_bound(sys, fib, logphi, 3 * m);
    int check_to = std::min(3 * m, 15);
    auto brute = brute_concat_counts(z, check_to);
    if (out.kind == CertifyOutcome::Kind::Accepted) {
      ++accepted;
      // every accepted certificate must be consistent with reality
      for (int n = 1; n <= check_to; ++n)
        CHECK((double)brute[n] <= fib.eval(n));
      CHECK(out.certificate->value ==
            doctest::Approx(std::log((double)z.size()) / m).epsilon(1e-12));
    } else if (out.kind == CertifyOutcome::Kind::Violation) {
      ++violated;
      if (out.violation_n <= check_to)
        CHECK((double)brute[out.violation_n] > fib.eval(out.violation_n));
    }
  }
  // the fuzz must exercise both outcomes
  CHECK(accepted > 0);
  CHECK(violated > 0);
}

TEST_CASE("block validation") {
  CHECK_THROWS_AS(ConcatSystem::from_blocks({}), ArgumentError);
  CHECK_THROWS_AS(ConcatSystem::from_blocks({w2("01"), w2("011")}), ArgumentError);
  // duplicates collapse
  CHECK(ConcatSystem::from_blocks({w2("01"), w2("01")}).blocks.size() == 1);
}
