#pragma once

#include <cstdint>
#include <vector>

#include "wordent/budget.hpp"
#include "wordent/pipeline.hpp"
#include "wordent/words.hpp"

namespace wordent {

/// Brute-force reference results. Oracles share no code with the fast paths
/// and never prune: enumeration_size is the full search-space cardinality.
struct OracleResult {
  double value = 0.0;
  std::vector<Word> witness_words;
  std::vector<Interval> witness_intervals;
  uint64_t enumeration_size = 0;
};

/// Global maximum of min_n (1/n) log q_n(Y) over every feasible subset of
/// A^N by full subset enumeration. Guard: q^N <= 20.
OracleResult exhaustive_y_oracle(const Budget& f, Alphabet alphabet, int n);

/// Maximum total length of a pairwise-disjoint subfamily by full enumeration.
/// Guard: at most 12 intervals. k_max limits the subfamily size (0 = none).
OracleResult exhaustive_interval_oracle(const std::vector<Interval>& intervals,
                                        int k_max = 0);

/// Distinct length-n windows by pairwise comparison (quadratic, no sets).
uint64_t naive_factor_count(const Word& word, int n);

}  // namespace wordent
