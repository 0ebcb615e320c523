#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wordent/bigint.hpp"
#include "wordent/budget.hpp"
#include "wordent/words.hpp"

namespace wordent {

/// A finite block set Z of uniform length m together with the language of all
/// bi-infinite concatenations of its blocks.
struct ConcatSystem {
  Alphabet alphabet{2};
  int block_len = 0;
  std::vector<Word> blocks;  // lex sorted, distinct, uniform length

  static ConcatSystem from_blocks(std::vector<Word> blocks);
  size_t size() const { return blocks.size(); }
};

/// Prefix of the Champernowne-type word of Z: all blocks in lex order, then
/// all pairs in lex tuple order, then all triples, ...
Word champernowne(std::vector<Word> z, uint64_t length);

struct ConcatCountOptions {
  size_t max_states = 2'000'000;   // determinized state guard per level
  int max_code_bits = 26;          // bitmap guard: q^len <= 2^max_code_bits
};

/// Exact |L_n| of the concatenation shift for n = 1..n_max.
/// Raises ResourceError on state blow-up.
LanguageTable concat_language_counts(const ConcatSystem& z, int n_max,
                                     const ConcatCountOptions& opts = {});

/// Exact counts as far as the state guard allows, up to n_max; the second
/// member is the horizon actually reached.
std::pair<LanguageTable, int> concat_language_counts_partial(
    const ConcatSystem& z, int n_max, const ConcatCountOptions& opts = {});

enum class CertStatus { Sound, Conditional };

/// A finite, re-checkable verification that the concatenation language of Z
/// respects the budget at every length: per-n checks up to max(H*, extra
/// horizon) plus the closed-form tail  log m + (ceil(n/m)+1) log|Z| <= e0 n
/// for n >= H*, which clears f via f(n) >= exp(e0 n).
struct LowerCertificate {
  double value = 0.0;       // (1/m) log |Z| in nats
  int checked_horizon = 0;  // every n <= this was verified against f
  int tail_start = 0;       // H*
  double e0_used = 0.0;
  CertStatus status = CertStatus::Conditional;
  std::string note;
  int exact_horizon = 0;    // counts below here were computed exactly
  std::vector<BigUint> exact_counts;  // 1..exact_horizon
};

struct CertifyOutcome {
  enum class Kind { Accepted, Violation, Rejected };
  Kind kind = Kind::Rejected;
  std::optional<LowerCertificate> certificate;
  // violation content
  int violation_n = 0;
  std::string violation_count;
  std::string budget_value;
  // rejection content (precondition failure or unverifiable range)
  std::string reject_reason;
};

struct CertifyOptions {
  ConcatCountOptions count;
  int markov_w_max = 16;          // largest window order tried
  size_t markov_state_cap = 200000;
  int max_tail_start = 4000;      // reject when H* exceeds this guard
};

/// Verifies counts(n) <= f(n) for every n <= max(H*, extra_horizon), where
/// H* is the smallest integer from which the tail bound closes, and returns a
/// certificate of value (1/m) log|Z|. The per-n inequality is established by
/// exact counts where affordable and by rigorous over-approximations beyond
/// (w-local language bound, per-offset decomposition bound); if some n cannot
/// be covered the certificate is rejected, never weakened.
CertifyOutcome certify_lower_bound(const ConcatSystem& z, const Budget& f, double e0,
                                   int extra_horizon, const CertifyOptions& opts = {});

}  // namespace wordent
