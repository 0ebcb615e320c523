#pragma once

#include <cstdint>
#include <vector>

#include "wordent/budget.hpp"
#include "wordent/words.hpp"

namespace wordent {

/// Count of length-n words whose internal distinct-factor counts satisfy the
/// budget at every length m <= n; a certified upper-bound datum for the word
/// entropy: u_value >= E_W(f) for every n and every ext_depth.
struct AdmissibleCount {
  int n = 0;
  uint64_t count = 0;
  int ext_depth = 0;
  double u_value = 0.0;  // (1/n) log count
};

struct AdmissibleOptions {
  int ext_depth = 0;
  int threads = 1;
  /// DFS node guard; exceeding it raises ResourceError naming the length.
  uint64_t max_nodes = uint64_t(4) << 30;
};

/// Exact |A_n(f)| over the alphabet, using prefix-tree DFS with incremental
/// per-length distinct-factor counters (prune as soon as a counter exceeds
/// the budget). Deterministic and independent of the thread count.
AdmissibleCount count_admissible(const Budget& f, Alphabet alphabet, int n,
                                 const AdmissibleOptions& opts = {});

/// Lexicographically first min(count, limit) admissible words of length n.
std::vector<Word> enumerate_admissible(const Budget& f, Alphabet alphabet, int n,
                                       uint64_t limit, int ext_depth = 0);

/// Counts for every n in 1..n_max from a single traversal.
std::vector<AdmissibleCount> upper_bound_sequence(const Budget& f, Alphabet alphabet,
                                                  int n_max,
                                                  const AdmissibleOptions& opts = {});

struct UpperBoundPartial {
  std::vector<AdmissibleCount> counts;
  bool partial = false;  // the node ceiling cut the scan short
  int requested_n_max = 0;
};

/// Like upper_bound_sequence, but a tripped node ceiling degrades to the
/// largest completing depth instead of failing, flagging the result.
UpperBoundPartial upper_bound_sequence_partial(const Budget& f, Alphabet alphabet, int n_max,
                                               const AdmissibleOptions& opts = {});

}  // namespace wordent
