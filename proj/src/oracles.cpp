#include "wordent/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace wordent {

OracleResult exhaustive_y_oracle(const Budget& f, Alphabet alphabet, int n) {
  if (n < 1) throw ArgumentError("exhaustive_y_oracle: N >= 1");
  uint64_t ground = 1;
  for (int i = 0; i < n; ++i) {
    ground *= (uint64_t)alphabet.q;
    if (ground > 20) throw ResourceError("exhaustive_y_oracle refuses q^N > 20");
  }
  // ground words as digit strings, code order = lex order
  std::vector<std::string> words((size_t)ground);
  for (uint64_t c = 0; c < ground; ++c) {
    std::string s(n, '0');
    uint64_t v = c;
    for (int i = n; i-- > 0;) {
      s[i] = (char)('0' + (v % alphabet.q));
      v /= alphabet.q;
    }
    words[c] = s;
  }
  std::vector<double> floors(n + 1);
  for (int m = 1; m <= n; ++m) floors[m] = std::floor(f.eval(m));

  double best_obj = -std::numeric_limits<double>::infinity();
  std::vector<uint64_t> best_codes;
  uint64_t masks = uint64_t(1) << ground;
  for (uint64_t mask = 1; mask < masks; ++mask) {
    bool feasible = true;
    double obj = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= n && feasible; ++m) {
      std::set<std::string> fs;
      for (uint64_t c = 0; c < ground; ++c)
        if (mask >> c & 1)
          for (int st = 0; st + m <= n; ++st) fs.insert(words[c].substr(st, m));
      if ((double)fs.size() > floors[m]) {
        feasible = false;
        break;
      }
      obj = std::min(obj, std::log((double)fs.size()) / m);
    }
    if (!feasible) continue;
    if (obj > best_obj) {
      best_obj = obj;
      best_codes.clear();
      for (uint64_t c = 0; c < ground; ++c)
        if (mask >> c & 1) best_codes.push_back(c);
    } else if (obj == best_obj) {
      std::vector<uint64_t> codes;
      for (uint64_t c = 0; c < ground; ++c)
        if (mask >> c & 1) codes.push_back(c);
      if (std::lexicographical_compare(codes.begin(), codes.end(), best_codes.begin(),
                                       best_codes.end()))
        best_codes = std::move(codes);
    }
  }
  OracleResult r;
  r.value = best_obj;
  r.enumeration_size = masks;
  for (uint64_t c : best_codes) r.witness_words.push_back(Word::from_code(alphabet, c, n));
  return r;
}

OracleResult exhaustive_interval_oracle(const std::vector<Interval>& intervals, int k_max) {
  if (intervals.size() > 12)
    throw ResourceError("exhaustive_interval_oracle refuses more than 12 intervals");
  for (auto& iv : intervals)
    if (iv.length() <= 0) throw ArgumentError("intervals must be non-empty");
  uint64_t masks = uint64_t(1) << intervals.size();
  int64_t best = -1;
  uint64_t best_mask = 0;
  for (uint64_t mask = 0; mask < masks; ++mask) {
    if (k_max > 0 && __builtin_popcountll(mask) > k_max) continue;
    bool disjoint = true;
    int64_t total = 0;
    for (size_t i = 0; i < intervals.size() && disjoint; ++i) {
      if (!(mask >> i & 1)) continue;
      total += intervals[i].length();
      for (size_t j = i + 1; j < intervals.size() && disjoint; ++j) {
        if (!(mask >> j & 1)) continue;
        if (intervals[i].lo < intervals[j].hi && intervals[j].lo < intervals[i].hi)
          disjoint = false;
      }
    }
    if (disjoint && total > best) {
      best = total;
      best_mask = mask;
    }
  }
  OracleResult r;
  r.value = (double)best;
  r.enumeration_size = masks;
  for (size_t i = 0; i < intervals.size(); ++i)
    if (best_mask >> i & 1) r.witness_intervals.push_back(intervals[i]);
  return r;
}

uint64_t naive_factor_count(const Word& word, int n) {
  if (n < 1 || (size_t)n > word.size()) throw RangeError("naive_factor_count: n out of range");
  auto syms = word.symbols();
  size_t wins = syms.size() - n + 1;
  uint64_t count = 0;
  for (size_t i = 0; i < wins; ++i) {
    bool first = true;
    for (size_t j = 0; j < i && first; ++j) {
      bool eq = true;
      for (int k = 0; k < n; ++k)
        if (syms[i + k] != syms[j + k]) {
          eq = false;
          break;
        }
      if (eq) first = false;
    }
    if (first) ++count;
  }
  return count;
}

}  // namespace wordent
