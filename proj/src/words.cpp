#include "wordent/words.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace wordent {

int packed_capacity(int q) {
  int len = 0;
  uint64_t v = 1;
  const uint64_t lim = uint64_t(1) << 63;
  while (v < lim / (uint64_t)q) {
    v *= (uint64_t)q;
    ++len;
  }
  return len;
}

Word::Word(Alphabet a, std::span<const uint8_t> symbols)
    : q_((uint8_t)a.q), len_((uint32_t)symbols.size()), code_(0) {
  for (uint8_t s : symbols)
    if (s >= a.q) throw ArgumentError("symbol out of alphabet range");
  if ((int)symbols.size() <= packed_capacity(a.q)) {
    for (uint8_t s : symbols) code_ = code_ * a.q + s;
  } else {
    bytes_.assign(symbols.begin(), symbols.end());
  }
}

Word Word::from_code(Alphabet a, uint64_t code, int len) {
  if (len > packed_capacity(a.q)) throw ArgumentError("length exceeds packed capacity");
  Word w;
  w.q_ = (uint8_t)a.q;
  w.len_ = (uint32_t)len;
  w.code_ = code;
  return w;
}

Word Word::from_digits(Alphabet a, std::string_view digits) {
  std::vector<uint8_t> syms;
  syms.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '9') throw ArgumentError("word digits must be '0'..'9'");
    syms.push_back((uint8_t)(c - '0'));
  }
  return Word(a, syms);
}

uint8_t Word::at(size_t i) const {
  if (!bytes_.empty()) return bytes_[i];
  uint64_t c = code_;
  for (size_t k = len_ - 1; k > i; --k) c /= q_;
  return (uint8_t)(c % q_);
}

uint64_t Word::range_code(size_t from, size_t to) const {
  if ((int)(to - from) > packed_capacity(q_)) throw RangeError("range does not pack");
  uint64_t c = 0;
  if (!bytes_.empty()) {
    for (size_t i = from; i < to; ++i) c = c * q_ + bytes_[i];
    return c;
  }
  // strip the (len - to) trailing symbols, then take (to - from) low digits
  uint64_t v = code_;
  for (size_t k = len_; k > to; --k) v /= q_;
  uint64_t mod = 1;
  for (size_t k = from; k < to; ++k) mod *= q_;
  return v % mod;
}

Word Word::subword(size_t from, size_t to) const {
  if (from > to || to > len_) throw RangeError("subword range out of bounds");
  if ((int)(to - from) <= packed_capacity(q_) && bytes_.empty())
    return from_code(Alphabet(q_), range_code(from, to), (int)(to - from));
  std::vector<uint8_t> syms;
  syms.reserve(to - from);
  for (size_t i = from; i < to; ++i) syms.push_back(at(i));
  return Word(Alphabet(q_), syms);
}

std::vector<uint8_t> Word::symbols() const {
  if (!bytes_.empty()) return bytes_;
  std::vector<uint8_t> out(len_);
  uint64_t c = code_;
  for (size_t i = len_; i-- > 0;) {
    out[i] = (uint8_t)(c % q_);
    c /= q_;
  }
  return out;
}

std::string Word::digits() const {
  auto syms = symbols();
  std::string s(syms.size(), '0');
  for (size_t i = 0; i < syms.size(); ++i) s[i] = (char)('0' + syms[i]);
  return s;
}

bool operator==(const Word& a, const Word& b) {
  if (a.q_ != b.q_ || a.len_ != b.len_) return false;
  if (a.packed() && b.packed()) return a.code_ == b.code_;
  return a.symbols() == b.symbols();
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (a.packed() && b.packed() && a.q_ == b.q_ && a.len_ == b.len_)
    return a.code_ <=> b.code_;
  size_t n = std::min(a.size(), b.size());
  for (size_t i = 0; i < n; ++i)
    if (a.at(i) != b.at(i)) return a.at(i) <=> b.at(i);
  return a.size() <=> b.size();
}

Word concat(const Word& a, const Word& b) {
  if (a.q() != b.q()) throw ArgumentError("alphabet mismatch");
  auto syms = a.symbols();
  auto sb = b.symbols();
  syms.insert(syms.end(), sb.begin(), sb.end());
  return Word(Alphabet(a.q()), syms);
}

const BigUint& LanguageTable::count(int n) const {
  if (n < 1 || n > n_max()) throw RangeError("LanguageTable::count out of range");
  return counts_[n - 1];
}

uint64_t LanguageTable::count_u64(int n) const {
  const BigUint& c = count(n);
  if (!c.fits_u64()) throw RangeError("count does not fit u64");
  return c.as_u64();
}

double LanguageTable::log_count(int n) const {
  const BigUint& c = count(n);
  if (c.is_zero()) throw RangeError("log of zero count");
  return c.log_nat();
}

bool LanguageTable::has_set(int n) const {
  if (n < 1 || n > n_max()) return false;
  return sets_[n - 1].has_value();
}

const std::vector<Word>& LanguageTable::set(int n) const {
  if (!has_set(n)) throw RangeError("LanguageTable has no set at this length");
  return *sets_[n - 1];
}

void LanguageTable::push_level(BigUint count, std::optional<std::vector<Word>> set) {
  counts_.push_back(std::move(count));
  sets_.push_back(std::move(set));
}

namespace {

// Distinct windows of length n: packed rolling codes when they fit,
// otherwise a comparison sort of window start positions.
uint64_t count_windows(const std::vector<uint8_t>& s, int q, int n,
                       std::vector<uint64_t>* codes_out) {
  size_t wins = s.size() - n + 1;
  if (n <= packed_capacity(q)) {
    std::vector<uint64_t> codes;
    codes.reserve(wins);
    uint64_t pw = 1;
    for (int i = 0; i < n - 1; ++i) pw *= (uint64_t)q;
    uint64_t c = 0;
    for (int i = 0; i < n; ++i) c = c * q + s[i];
    codes.push_back(c);
    for (size_t i = 1; i < wins; ++i) {
      c = (c - s[i - 1] * pw) * q + s[i + n - 1];
      codes.push_back(c);
    }
    std::sort(codes.begin(), codes.end());
    codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
    if (codes_out) *codes_out = codes;
    return codes.size();
  }
  std::vector<uint32_t> idx(wins);
  for (size_t i = 0; i < wins; ++i) idx[i] = (uint32_t)i;
  const uint8_t* base = s.data();
  std::sort(idx.begin(), idx.end(), [&](uint32_t a, uint32_t b) {
    return std::memcmp(base + a, base + b, n) < 0;
  });
  uint64_t distinct = 1;
  for (size_t i = 1; i < wins; ++i)
    if (std::memcmp(base + idx[i - 1], base + idx[i], n) != 0) ++distinct;
  return distinct;
}

}  // namespace

std::vector<Word> factors(const Word& word, int n) {
  if (n < 1 || (size_t)n > word.size()) throw RangeError("factor length out of range");
  auto syms = word.symbols();
  int q = word.q();
  if (n <= packed_capacity(q)) {
    std::vector<uint64_t> codes;
    count_windows(syms, q, n, &codes);
    std::vector<Word> out;
    out.reserve(codes.size());
    for (uint64_t c : codes) out.push_back(Word::from_code(Alphabet(q), c, n));
    return out;
  }
  std::vector<Word> out;
  for (size_t i = 0; i + n <= syms.size(); ++i)
    out.push_back(word.subword(i, i + n));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

uint64_t distinct_factor_count(const Word& word, int n) {
  if (n < 1 || (size_t)n > word.size()) throw RangeError("factor length out of range");
  auto syms = word.symbols();
  return count_windows(syms, word.q(), n, nullptr);
}

LanguageTable complexity_profile(const Word& word, int n_max, size_t set_memory_ceiling) {
  if (n_max < 1 || (size_t)n_max > word.size())
    throw RangeError("complexity_profile: n_max out of range");
  LanguageTable table;
  table.source = "word";
  auto syms = word.symbols();
  size_t budget = set_memory_ceiling;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<uint64_t> codes;
    bool packable = n <= packed_capacity(word.q());
    uint64_t cnt = count_windows(syms, word.q(), n, packable ? &codes : nullptr);
    std::optional<std::vector<Word>> set;
    if (packable) {
      size_t bytes = codes.size() * (sizeof(Word) + 8);
      if (bytes <= budget) {
        budget -= bytes;
        std::vector<Word> ws;
        ws.reserve(codes.size());
        for (uint64_t c : codes) ws.push_back(Word::from_code(word.alphabet(), c, n));
        set = std::move(ws);
      }
    }
    table.push_level(BigUint(cnt), std::move(set));
  }
  return table;
}

FeketeResult fekete_limit(std::span<const double> a) {
  if (a.empty()) throw ArgumentError("fekete_limit: empty sequence");
  FeketeResult r;
  r.estimate = a[0];
  r.argmin_index = 1;
  for (size_t i = 0; i < a.size(); ++i) {
    double ratio = a[i] / (double)(i + 1);
    if (ratio < r.estimate) {
      r.estimate = ratio;
      r.argmin_index = i + 1;
    }
  }
  r.subadditive_ok = true;
  for (size_t i = 1; i <= a.size() && r.subadditive_ok; ++i)
    for (size_t j = i; i + j <= a.size(); ++j) {
      double lhs = a[i + j - 1], rhs = a[i - 1] + a[j - 1];
      if (lhs > rhs + 1e-12 * std::max(1.0, std::abs(rhs))) {
        r.subadditive_ok = false;
        break;
      }
    }
  return r;
}

double entropy_estimate(const Word& word_prefix, int n_max) {
  if (n_max < 1 || (size_t)n_max > word_prefix.size())
    throw RangeError("entropy_estimate: n_max out of range");
  double best = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= n_max; ++n) {
    double v = std::log((double)distinct_factor_count(word_prefix, n)) / n;
    best = std::min(best, v);
  }
  return best;
}

std::vector<Word> read_word_file(const std::string& path, std::optional<Alphabet> alphabet) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open word file: " + path);
  std::vector<std::string> lines;
  std::string line;
  int max_digit = 1;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    for (char c : line) {
      if (c < '0' || c > '9') throw ArgumentError("bad symbol in word file: " + path);
      max_digit = std::max(max_digit, c - '0');
    }
    lines.push_back(line);
  }
  Alphabet a = alphabet.value_or(Alphabet(std::max(2, max_digit + 1)));
  std::vector<Word> out;
  out.reserve(lines.size());
  for (auto& l : lines) out.push_back(Word::from_digits(a, l));
  return out;
}

void write_word_file(const std::string& path, const std::vector<Word>& words) {
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot open for writing: " + path);
  for (auto& w : words) out << w.digits() << "\n";
}

}  // namespace wordent
