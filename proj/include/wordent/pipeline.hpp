#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wordent/budget.hpp"
#include "wordent/words.hpp"

namespace wordent {

/// Two starting positions s < t (1-indexed) of equal length-n_hat factors of
/// one word, with the attached integer interval [s, t + n_hat).
struct TwinPair {
  int64_t s = 0;
  int64_t t = 0;
  friend bool operator==(const TwinPair& a, const TwinPair& b) {
    return a.s == b.s && a.t == b.t;
  }
  friend auto operator<=>(const TwinPair&, const TwinPair&) = default;
};

/// All pairs of occurrences of the same length-n_hat factor, one pair per
/// repeated occurrence position t (s = the previous occurrence), ordered by
/// ascending t.
std::vector<TwinPair> twin_pairs(const Word& w, int n_hat);

struct Interval {
  int64_t lo = 0;  // half-open [lo, hi)
  int64_t hi = 0;
  int64_t length() const { return hi - lo; }
  friend bool operator==(const Interval& a, const Interval& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Pairwise-disjoint subfamily of total length >= |union| / 2: sort by left
/// endpoint, drop nested and bridged intervals, keep the better parity class.
std::vector<Interval> select_disjoint_intervals(std::vector<Interval> intervals);

/// pi_{s,t}: the blocks w[s..t) extracted with the 1-indexed convention
/// (symbols at positions s..t-1), duplicates collapsed, sorted.
std::vector<Word> project(const std::vector<Word>& words, int64_t s, int64_t t);

struct PipelineParams {
  double h = 0.0;
  double epsilon = 0.0;
  double epsilon_tilde = 0.0;  // <= 0 means epsilon / 15
  int n_hat = 0;
  double e0 = 0.0;
  double z2_multiplier = 6.0;  // knob for the shared prefix/suffix length
};

struct StageLog {
  std::string stage;
  size_t size = 0;
  std::string detail;
};

struct PipelineState {
  int n_hat = 0;
  int64_t big_n_hat = 0;  // ceil(exp(e0/2) f(n_hat))
  std::vector<Word> y1;
  std::vector<Word> y2;
  std::vector<TwinPair> signature;  // selected disjoint pair list of Y2
  TwinPair chosen;                  // the pair (s_i, t_i) maximizing the ratio
  double epsilon_tilde = 0.0;
  int m = 0;                        // t_i - s_i
  Word gamma0, gamma1, gamma2;
  std::vector<Word> z1, z2, z3, z4, z5;
  std::vector<StageLog> log;
  // failure report: stage name when some stage emptied
  std::optional<std::string> failed_stage;
};

/// One scarce-factor deletion round: pads the distinct length-len factors of
/// the wrapped words w.wrap to exactly floor f(len) candidates with ghost
/// placeholders (never materialized, only counted), picks `count` of them
/// least-frequent-first (ghosts before any real factor), and removes the
/// words owning a selected real factor.
std::vector<Word> delete_scarce_factors(const std::vector<Word>& words, const Word& wrap,
                                        const Budget& f, int len, uint64_t count);

/// Deletion marks for the words carrying one of the floor(f(n)/(block_len n^2))
/// least frequent length-n factors, ghost padding included.
std::vector<bool> mark_least_frequent_owners(const std::vector<Word>& words, const Budget& f,
                                             int n, int block_len);

/// The shrink pipeline: twin pairs + disjoint selection per word, signature
/// grouping, best-ratio pair choice, projection, shared prefix/suffix
/// restriction, scarce-twin-factor deletion with ghost padding, least-
/// frequent-factor removal, and the lexicographic cap.
PipelineState shrink_pipeline(const std::vector<Word>& y, const Budget& f,
                              const PipelineParams& params);

struct VerifyResult {
  bool pass = false;
  int violation_n = 0;
  uint64_t count = 0;
  double budget_value = 0.0;
};

/// complexity_profile(stream).count(n) <= f(n) for all n <= n_max.
VerifyResult verify_budget(const Word& stream, const Budget& f, int n_max);

}  // namespace wordent
