#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wordent/bigint.hpp"

namespace wordent {

struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};
struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ModeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Alphabet {0, ..., q-1}, q >= 2.
struct Alphabet {
  int q = 2;
  explicit Alphabet(int q_ = 2) : q(q_) {
    if (q < 2) throw ArgumentError("alphabet size must be >= 2");
  }
  friend bool operator==(Alphabet a, Alphabet b) { return a.q == b.q; }
};

/// Largest word length such that q^len fits in 63 bits.
int packed_capacity(int q);

/// A finite word over a fixed alphabet. Short words are stored as a packed
/// base-q integer (most significant symbol first, so for equal lengths the
/// integer order is the lexicographic order); longer words fall back to a
/// byte sequence. Comparison is lexicographic on the symbol sequence.
class Word {
 public:
  Word() : q_(2), len_(0), code_(0) {}
  Word(Alphabet a, std::span<const uint8_t> symbols);
  static Word from_code(Alphabet a, uint64_t code, int len);
  static Word from_digits(Alphabet a, std::string_view digits);

  int q() const { return q_; }
  Alphabet alphabet() const { return Alphabet(q_); }
  size_t size() const { return len_; }
  bool empty() const { return len_ == 0; }
  bool packed() const { return bytes_.empty(); }
  uint64_t code() const { return code_; }  // valid when packed()

  uint8_t at(size_t i) const;
  /// Packed base-q code of the range [from, to); requires it to fit.
  uint64_t range_code(size_t from, size_t to) const;
  Word subword(size_t from, size_t to) const;
  std::vector<uint8_t> symbols() const;
  std::string digits() const;

  friend bool operator==(const Word& a, const Word& b);
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  uint8_t q_;
  uint32_t len_;
  uint64_t code_;
  std::vector<uint8_t> bytes_;  // used when the word does not pack
};

Word concat(const Word& a, const Word& b);

/// Per-length factor data for a word, word set or automaton. Counts are kept
/// for every length; the factor sets themselves are kept only while the total
/// footprint stays under the memory ceiling, after which the table switches
/// to count-only mode for the remaining lengths.
class LanguageTable {
 public:
  LanguageTable() = default;

  int n_max() const { return (int)counts_.size(); }
  const BigUint& count(int n) const;
  uint64_t count_u64(int n) const;
  double log_count(int n) const;
  bool has_set(int n) const;
  const std::vector<Word>& set(int n) const;  // sorted; requires has_set(n)

  void push_level(BigUint count, std::optional<std::vector<Word>> set);
  std::string source;

 private:
  std::vector<BigUint> counts_;                          // index n-1
  std::vector<std::optional<std::vector<Word>>> sets_;   // index n-1
};

constexpr size_t kDefaultSetMemoryCeiling = size_t(1) << 28;  // bytes

/// Distinct length-n contiguous blocks of `word`, sorted. 1 <= n <= |word|.
std::vector<Word> factors(const Word& word, int n);

/// Number of distinct length-n blocks (fast path, no materialized set).
uint64_t distinct_factor_count(const Word& word, int n);

/// Factor counts for lengths 1..n_max; sets are kept under the ceiling.
LanguageTable complexity_profile(const Word& word, int n_max,
                                 size_t set_memory_ceiling = kDefaultSetMemoryCeiling);

struct FeketeResult {
  double estimate = 0.0;
  size_t argmin_index = 0;  // 1-based, smallest index attaining the minimum
  bool subadditive_ok = false;
};

/// min_n a_n / n over the provided prefix of a sequence (1-indexed), with a
/// subadditivity scan of every index pair in range. Non-subadditive input is
/// flagged, not rejected.
FeketeResult fekete_limit(std::span<const double> a);

/// min over 1 <= n <= n_max of (1/n) log(number of distinct length-n factors).
double entropy_estimate(const Word& word_prefix, int n_max);

/// Word files: one word per line, symbols as ASCII digits '0'..'9';
/// lines beginning with '#' are comments. If no alphabet is given, q is
/// inferred as max(2, largest digit + 1) over the whole file.
std::vector<Word> read_word_file(const std::string& path,
                                 std::optional<Alphabet> alphabet = {});
void write_word_file(const std::string& path, const std::vector<Word>& words);

}  // namespace wordent
