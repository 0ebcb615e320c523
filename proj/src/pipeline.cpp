#include "wordent/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace wordent {

std::vector<TwinPair> twin_pairs(const Word& w, int n_hat) {
  if (n_hat < 1 || (size_t)n_hat > w.size()) throw RangeError("twin_pairs: n_hat out of range");
  int64_t wins = (int64_t)w.size() - n_hat + 1;
  std::vector<TwinPair> out;
  // last occurrence of each window content; packed codes when possible
  if (n_hat <= packed_capacity(w.q())) {
    std::unordered_map<uint64_t, int64_t> last;
    last.reserve(wins * 2);
    for (int64_t i = 0; i < wins; ++i) {
      uint64_t code = w.range_code(i, i + n_hat);
      auto it = last.find(code);
      if (it != last.end()) {
        out.push_back({it->second + 1, i + 1});  // paper positions are 1-indexed
        it->second = i;
      } else {
        last.emplace(code, i);
      }
    }
  } else {
    std::map<std::vector<uint8_t>, int64_t> last;
    auto syms = w.symbols();
    for (int64_t i = 0; i < wins; ++i) {
      std::vector<uint8_t> key(syms.begin() + i, syms.begin() + i + n_hat);
      auto it = last.find(key);
      if (it != last.end()) {
        out.push_back({it->second + 1, i + 1});
        it->second = i;
      } else {
        last.emplace(std::move(key), i);
      }
    }
  }
  return out;  // ascending t by construction
}

std::vector<Interval> select_disjoint_intervals(std::vector<Interval> intervals) {
  for (auto& iv : intervals)
    if (iv.length() <= 0) throw ArgumentError("intervals must be non-empty");
  if (intervals.empty()) return {};
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) {
              return a.lo != b.lo ? a.lo < b.lo : a.hi > b.hi;
            });
  // drop nested intervals (covered by an earlier one): union unchanged
  std::vector<Interval> anti;
  for (auto& iv : intervals) {
    if (!anti.empty() && iv.hi <= anti.back().hi) continue;
    anti.push_back(iv);
  }
  // drop bridged intervals: if I_j and I_{j+2} overlap, I_{j+1} lies inside
  // their union and can go; afterwards every other interval is disjoint
  std::vector<Interval> kept;
  for (auto& iv : anti) {
    while (kept.size() >= 2 && iv.lo < kept[kept.size() - 2].hi) kept.pop_back();
    kept.push_back(iv);
  }
  int64_t even = 0, odd = 0;
  for (size_t i = 0; i < kept.size(); ++i)
    (i % 2 == 0 ? even : odd) += kept[i].length();
  std::vector<Interval> out;
  size_t parity = even >= odd ? 0 : 1;
  for (size_t i = parity; i < kept.size(); i += 2) out.push_back(kept[i]);
  return out;
}

std::vector<Word> project(const std::vector<Word>& words, int64_t s, int64_t t) {
  std::vector<Word> out;
  out.reserve(words.size());
  for (auto& w : words) {
    if (s < 1 || s >= t || t > (int64_t)w.size() + 1)
      throw RangeError("project: 1 <= s < t <= |word|+1 required");
    out.push_back(w.subword((size_t)(s - 1), (size_t)(t - 1)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::vector<Word> sorted_unique(std::vector<Word> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// factors of length len of every word, with the set of word indices each
// factor occurs in (occurrence = containment, counted once per word)
std::map<Word, std::vector<uint32_t>> factor_owners(const std::vector<Word>& words, int len) {
  std::map<Word, std::vector<uint32_t>> owners;
  for (uint32_t i = 0; i < words.size(); ++i) {
    if ((size_t)len > words[i].size()) continue;
    for (auto& x : factors(words[i], len)) {
      auto& v = owners[x];
      if (v.empty() || v.back() != i) v.push_back(i);
    }
  }
  return owners;
}

}  // namespace

std::vector<Word> delete_scarce_factors(const std::vector<Word>& words, const Word& wrap,
                                        const Budget& f, int len, uint64_t count) {
  std::vector<Word> wrapped;
  wrapped.reserve(words.size());
  for (auto& w : words) wrapped.push_back(concat(w, wrap));
  auto owners = factor_owners(wrapped, len);
  uint64_t c = owners.size();
  BigUint fl = f.floor_eval(len);
  uint64_t pool = fl.fits_u64() ? fl.as_u64() : ~uint64_t(0);
  uint64_t ghosts = pool > c ? pool - c : 0;
  if (count <= ghosts) return words;  // ghosts absorb the whole selection
  uint64_t need = count - ghosts;
  std::vector<std::pair<size_t, const Word*>> by_freq;
  by_freq.reserve(owners.size());
  for (auto& [w, own] : owners) by_freq.push_back({own.size(), &w});
  std::stable_sort(by_freq.begin(), by_freq.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<bool> del(words.size(), false);
  for (uint64_t k = 0; k < need && k < by_freq.size(); ++k)
    for (uint32_t idx : owners[*by_freq[k].second]) del[idx] = true;
  std::vector<Word> keep;
  for (size_t i = 0; i < words.size(); ++i)
    if (!del[i]) keep.push_back(words[i]);
  return keep;
}

std::vector<bool> mark_least_frequent_owners(const std::vector<Word>& words, const Budget& f,
                                             int n, int block_len) {
  std::vector<bool> del(words.size(), false);
  double quota_d = std::floor(f.eval(n) / ((double)block_len * n * (double)n));
  uint64_t quota = quota_d >= 0 ? (uint64_t)quota_d : 0;
  if (quota == 0) return del;
  auto owners = factor_owners(words, n);
  uint64_t c = owners.size();
  BigUint fl = f.floor_eval(n);
  uint64_t pool = fl.fits_u64() ? fl.as_u64() : ~uint64_t(0);
  uint64_t ghosts = pool > c ? pool - c : 0;
  if (quota <= ghosts) return del;
  uint64_t need = quota - ghosts;
  std::vector<std::pair<size_t, const Word*>> by_freq;
  by_freq.reserve(owners.size());
  for (auto& [w, own] : owners) by_freq.push_back({own.size(), &w});
  std::stable_sort(by_freq.begin(), by_freq.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (uint64_t k = 0; k < need && k < by_freq.size(); ++k)
    for (uint32_t idx : owners[*by_freq[k].second]) del[idx] = true;
  return del;
}

PipelineState shrink_pipeline(const std::vector<Word>& y, const Budget& f,
                              const PipelineParams& params) {
  if (y.empty()) throw ArgumentError("shrink_pipeline: empty input set");
  PipelineState st;
  st.n_hat = params.n_hat;
  st.epsilon_tilde = params.epsilon_tilde > 0 ? params.epsilon_tilde : params.epsilon / 15.0;
  if (params.n_hat < 1 || !(params.h > 0) || !(params.e0 > 0) || !(st.epsilon_tilde > 0))
    throw ArgumentError("shrink_pipeline: parameters must be positive");
  size_t word_len = y[0].size();
  for (auto& w : y)
    if (w.size() != word_len) throw ArgumentError("shrink_pipeline: input words must have equal length");
  if ((size_t)params.n_hat >= word_len)
    throw ArgumentError("shrink_pipeline: n_hat must be smaller than the word length");

  auto fail = [&](const char* stage) {
    st.failed_stage = stage;
    return st;
  };
  auto log = [&](const char* stage, size_t size, std::string detail = "") {
    st.log.push_back({stage, size, std::move(detail)});
  };

  // Y1: all length-N_hat factors of Y, N_hat = ceil(exp(e0/2) f(n_hat))
  st.big_n_hat = (int64_t)std::ceil(std::exp(params.e0 / 2.0) * f.eval(params.n_hat));
  if (st.big_n_hat < params.n_hat + 1 || (size_t)st.big_n_hat > word_len) {
    log("Y1", 0, "N_hat=" + std::to_string(st.big_n_hat) + " outside the word length");
    return fail("Y1");
  }
  {
    std::vector<Word> all;
    for (auto& w : y) {
      auto fs = factors(w, (int)st.big_n_hat);
      all.insert(all.end(), fs.begin(), fs.end());
    }
    st.y1 = sorted_unique(std::move(all));
  }
  log("Y1", st.y1.size(), "N_hat=" + std::to_string(st.big_n_hat));
  if (st.y1.empty()) return fail("Y1");

  // stage 1+2: per-word twin pairs, disjoint selection, signature grouping
  std::map<std::vector<TwinPair>, std::vector<uint32_t>> groups;
  for (uint32_t i = 0; i < st.y1.size(); ++i) {
    auto pairs = twin_pairs(st.y1[i], params.n_hat);
    if (pairs.empty()) continue;
    std::vector<Interval> ivs;
    ivs.reserve(pairs.size());
    for (auto& p : pairs) ivs.push_back({p.s, p.t + params.n_hat});
    auto chosen = select_disjoint_intervals(ivs);
    std::vector<TwinPair> sig;
    sig.reserve(chosen.size());
    for (auto& iv : chosen) sig.push_back({iv.lo, iv.hi - params.n_hat});
    groups[sig].push_back(i);
  }
  if (groups.empty()) {
    log("pairs", 0, "no word of Y1 has a twin pair at n_hat");
    return fail("pairs");
  }
  auto best = groups.begin();
  for (auto it = groups.begin(); it != groups.end(); ++it)
    if (it->second.size() > best->second.size()) best = it;  // ties: smaller signature
  st.signature = best->first;
  for (uint32_t i : best->second) st.y2.push_back(st.y1[i]);
  log("Y2", st.y2.size(), std::to_string(groups.size()) + " signature groups");

  // stage 3: the pair maximizing |project(Y2, s, t+n_hat)| against
  // exp((1 - eps~) h (t + n_hat - s))
  {
    double best_score = -std::numeric_limits<double>::infinity();
    for (auto& p : st.signature) {
      auto proj = project(st.y2, p.s, p.t + params.n_hat);
      double score = std::log((double)proj.size()) -
                     (1.0 - st.epsilon_tilde) * params.h * (double)(p.t + params.n_hat - p.s);
      if (score > best_score) {
        best_score = score;
        st.chosen = p;
      }
    }
    st.m = (int)(st.chosen.t - st.chosen.s);
  }
  if (st.m < 1) return fail("pair-choice");
  log("pair-choice", 1,
      "(s,t)=(" + std::to_string(st.chosen.s) + "," + std::to_string(st.chosen.t) +
          ") m=" + std::to_string(st.m));

  // stage 4: Z1 = project(Y2, s_i, t_i)
  st.z1 = project(st.y2, st.chosen.s, st.chosen.t);
  log("Z1", st.z1.size());
  if (st.z1.empty()) return fail("Z1");

  // stage 5: shared prefix gamma1 and suffix gamma2 of length
  // round(mult * eps~ * m), floored at 1 so the stage-7 length range never
  // degenerates to n = 1; gamma0 is the shared prefix capped at n_hat
  int glen = (int)std::lround(params.z2_multiplier * st.epsilon_tilde * st.m);
  glen = std::min(std::max(glen, 1), st.m);
  {
    std::map<std::pair<Word, Word>, std::vector<uint32_t>> keyed;
    for (uint32_t i = 0; i < st.z1.size(); ++i) {
      Word pre = st.z1[i].subword(0, glen);
      Word suf = st.z1[i].subword(st.z1[i].size() - glen, st.z1[i].size());
      keyed[{pre, suf}].push_back(i);
    }
    auto bestk = keyed.begin();
    for (auto it = keyed.begin(); it != keyed.end(); ++it)
      if (it->second.size() > bestk->second.size()) bestk = it;
    st.gamma1 = bestk->first.first;
    st.gamma2 = bestk->first.second;
    st.gamma0 = st.gamma1.subword(0, std::min<size_t>(params.n_hat, st.gamma1.size()));
    for (uint32_t i : bestk->second) st.z2.push_back(st.z1[i]);
  }
  log("Z2", st.z2.size(), "prefix/suffix length " + std::to_string(glen));
  if (st.z2.empty()) return fail("Z2");

  // stage 6: scarce twin factors at lengths n_hat + 2 .. glen, over the
  // wrapped words w . gamma0; ghost factors pad the candidate pool to
  // exactly floor f(n_hat + j)
  st.z3 = st.z2;
  for (int len = params.n_hat + 2; len <= glen; ++len) {
    uint64_t j = (uint64_t)(len - params.n_hat);
    size_t before = st.z3.size();
    st.z3 = delete_scarce_factors(st.z3, st.gamma0, f, len, j);
    st.log.push_back({"Z3", st.z3.size(),
                      "len " + std::to_string(len) +
                          (st.z3.size() == before ? ": ghosts cover the deletion" : "")});
    if (st.z3.empty()) return fail("Z3");
  }
  log("Z3", st.z3.size());

  // stage 7: for each n in (glen, m], drop words carrying one of the
  // floor(f(n) / (m n^2)) least frequent length-n factors (ghosts first);
  // frequencies are taken against Z3 for every n
  {
    std::vector<bool> del(st.z3.size(), false);
    for (int n = glen + 1; n <= st.m; ++n) {
      auto marks = mark_least_frequent_owners(st.z3, f, n, st.m);
      for (size_t i = 0; i < marks.size(); ++i)
        if (marks[i]) del[i] = true;
    }
    for (size_t i = 0; i < st.z3.size(); ++i)
      if (!del[i]) st.z4.push_back(st.z3[i]);
  }
  log("Z4", st.z4.size());
  if (st.z4.empty()) return fail("Z4");

  // stage 8: lexicographic cap at ceil(exp((1 - 4 eps~) h m))
  {
    double cap_d = std::ceil(std::exp((1.0 - 4.0 * st.epsilon_tilde) * params.h * st.m));
    uint64_t cap = cap_d < 1 ? 1 : (cap_d > 1e18 ? (uint64_t)1e18 : (uint64_t)cap_d);
    st.z5 = st.z4;
    if (st.z5.size() > cap) st.z5.resize(cap);
  }
  log("Z5", st.z5.size());
  if (st.z5.empty()) return fail("Z5");
  return st;
}

VerifyResult verify_budget(const Word& stream, const Budget& f, int n_max) {
  if (n_max < 1 || (size_t)n_max > stream.size())
    throw RangeError("verify_budget: n_max out of range");
  VerifyResult r;
  for (int n = 1; n <= n_max; ++n) {
    uint64_t c = distinct_factor_count(stream, n);
    double fv = f.eval(n);
    bool ok;
    if (auto ex = f.eval_exact(n)) ok = BigUint(c) <= *ex;
    else ok = (double)c <= fv;
    if (!ok) {
      r.pass = false;
      r.violation_n = n;
      r.count = c;
      r.budget_value = fv;
      return r;
    }
  }
  r.pass = true;
  return r;
}

}  // namespace wordent
