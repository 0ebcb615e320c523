#include "wordent/concat.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>

namespace wordent {

namespace {

struct StateKey {
  uint64_t suf;
  uint32_t live;
  friend bool operator<(const StateKey& a, const StateKey& b) {
    return a.suf != b.suf ? a.suf < b.suf : a.live < b.live;
  }
  friend bool operator==(const StateKey& a, const StateKey& b) {
    return a.suf == b.suf && a.live == b.live;
  }
};

// Counting machinery for one block system. The factor sets for n < m come
// from code bitmaps (infixes plus suffix*prefix splits across one boundary);
// from n = m-1 on, the language is tracked by the determinized state
// (last m-1 symbols, mask of alignment classes still consistent), one entry
// per distinct factor-class, with exact multiplicity-free counts.
class Context {
 public:
  Context(const ConcatSystem& z, const ConcatCountOptions& opts)
      : z_(z), q_(z.alphabet.q), m_(z.block_len), t_((int)z.blocks.size()), opts_(opts) {
    bitmap_ok_ = fits_bits(m_);
    if (bitmap_ok_) build_bitmaps();
  }

  bool bitmap_ok() const { return bitmap_ok_; }
  int m() const { return m_; }
  int t() const { return t_; }

  // Exact counts for n = 1..n_limit; stops early (without error) if the
  // determinized width exceeds the guard. Returns counts and the horizon
  // actually reached.
  std::pair<std::vector<BigUint>, int> exact_counts(int n_limit) {
    std::vector<BigUint> counts(n_limit + 1);
    if (m_ == 1) {
      // blocks are single symbols; the language is (symbol set)^n
      for (int n = 1; n <= n_limit; ++n) counts[n] = BigUint::pow((uint64_t)t_, (unsigned)n);
      return {std::move(counts), n_limit};
    }
    if (!bitmap_ok_) return exact_counts_subsets(n_limit);

    for (int n = 1; n < m_ && n <= n_limit; ++n) counts[n] = BigUint(popcount(fact_[n]));
    if (n_limit < m_) return {std::move(counts), n_limit};

    // seed at level m-1 from the factor bitmap
    std::vector<std::pair<StateKey, BigUint>> cur;
    {
      int n0 = m_ - 1;
      for (uint64_t code = 0; code < pow_q_[n0]; ++code) {
        if (!get_bit(fact_[n0], code)) continue;
        uint32_t live = head_live(code, n0);
        if (!live) continue;
        cur.push_back({{code, live}, BigUint(1)});
      }
    }
    std::vector<std::pair<StateKey, BigUint>> nxt;
    int reached = m_ - 1;
    for (int n = m_; n <= n_limit; ++n) {
      nxt.clear();
      nxt.reserve(cur.size() * q_);
      for (auto& [key, cnt] : cur) {
        for (int s = 0; s < q_; ++s) {
          uint64_t full = key.suf * q_ + (uint64_t)s;  // last m symbols
          uint32_t nlive = 0;
          bool completed = false;
          uint32_t vv = key.live;
          while (vv) {
            int c = __builtin_ctz(vv);
            vv &= vv - 1;
            int l = c + 1;
            if (!get_bit(validp_[l], full % pow_q_[l])) continue;
            if (l == m_) completed = true;
            else nlive |= 1u << l;
          }
          if (completed) nlive |= 1u;
          if (!nlive) continue;
          nxt.push_back({{full % pow_q_[m_ - 1], nlive}, cnt});
        }
      }
      std::sort(nxt.begin(), nxt.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      size_t w = 0;
      for (size_t i = 0; i < nxt.size();) {
        StateKey k = nxt[i].first;
        BigUint c = std::move(nxt[i].second);
        ++i;
        while (i < nxt.size() && nxt[i].first == k) c += nxt[i++].second;
        nxt[w++] = {k, std::move(c)};
      }
      nxt.resize(w);
      if (w > opts_.max_states) break;  // exact range ends here
      cur.swap(nxt);
      BigUint tot;
      for (auto& [k, c] : cur) tot += c;
      counts[n] = std::move(tot);
      reached = n;
    }
    return {std::move(counts), std::min(reached, n_limit)};
  }

  /// Exact counts of the w-local over-approximation (all strings whose every
  /// (w+1)-window is a factor): a superset of the language, so the counts
  /// bound the true counts from above. Requires w + 1 < m. Counts valid for
  /// n >= w; entries below w are zero.
  std::optional<std::vector<BigUint>> markov_counts(int w, int H, size_t state_cap) {
    if (!bitmap_ok_ || m_ < 2 || w < 1 || w + 1 > m_ - 1) return std::nullopt;
    std::vector<uint64_t> states;
    for (uint64_t c = 0; c < pow_q_[w]; ++c)
      if (get_bit(fact_[w], c)) states.push_back(c);
    if (states.empty() || states.size() > state_cap) return std::nullopt;
    // transitions: x --s--> (x q + s) mod q^w when (x q + s) in L_{w+1}
    std::vector<int32_t> succ(states.size() * q_, -1);
    for (size_t i = 0; i < states.size(); ++i)
      for (int s = 0; s < q_; ++s) {
        uint64_t y = states[i] * q_ + (uint64_t)s;
        if (!get_bit(fact_[w + 1], y)) continue;
        uint64_t tgt = y % pow_q_[w];
        auto it = std::lower_bound(states.begin(), states.end(), tgt);
        succ[i * q_ + s] = (int32_t)(it - states.begin());
      }
    std::vector<BigUint> counts(H + 1);
    std::vector<BigUint> v(states.size(), BigUint(1)), nv(states.size());
    counts[w] = BigUint((uint64_t)states.size());
    for (int n = w + 1; n <= H; ++n) {
      for (auto& x : nv) x = BigUint();
      for (size_t i = 0; i < states.size(); ++i) {
        if (v[i].is_zero()) continue;
        for (int s = 0; s < q_; ++s) {
          int32_t j = succ[i * q_ + s];
          if (j >= 0) nv[j] += v[i];
        }
      }
      v.swap(nv);
      BigUint tot;
      for (auto& x : v) tot += x;
      counts[n] = std::move(tot);
    }
    return counts;
  }

  /// Per-offset decomposition bound: every factor of length n >= 2m-1 splits
  /// at its first block boundary u in [0, m) into a distinct block suffix and
  /// a string of the (blocks)*(prefix) language, so
  ///   counts(n) <= sum_u S(u) * D(n - u).
  /// Returns bounds for n in [2m-1, H]; entries elsewhere are zero.
  std::vector<BigUint> offset_bounds(int H) {
    std::vector<BigUint> out(H + 1);
    if (m_ == 1) return out;
    build_trie();
    // D(j): path counts in the deterministic prefix-trie automaton with wrap
    std::vector<BigUint> D(H + 1);
    {
      std::vector<BigUint> v(trie_.size()), nv(trie_.size());
      v[0] = BigUint(1);
      for (int j = 1; j <= H; ++j) {
        for (auto& x : nv) x = BigUint();
        for (size_t u = 0; u < trie_.size(); ++u) {
          if (v[u].is_zero()) continue;
          for (int s = 0; s < q_; ++s) {
            int32_t ch = trie_[u].child[s];
            if (ch >= 0) nv[ch] += v[u];
            if (trie_[u].wrap >> s & 1) nv[0] += v[u];
          }
        }
        v.swap(nv);
        BigUint tot;
        for (auto& x : v) tot += x;
        D[j] = std::move(tot);
      }
    }
    std::vector<uint64_t> S(m_, 1);  // S(0) = 1 (empty suffix)
    for (int u = 1; u < m_; ++u) S[u] = suffix_count(u);
    for (int n = std::max(2 * m_ - 1, 1); n <= H; ++n) {
      BigUint b;
      for (int u = 0; u < m_ && u < n; ++u) {
        BigUint term = D[n - u];
        term.mul_small(S[u]);
        b += term;
      }
      out[n] = std::move(b);
    }
    return out;
  }

 private:
  bool fits_bits(int len) const {
    double bits = len * std::log2((double)q_);
    return bits <= (double)opts_.max_code_bits;
  }

  static bool get_bit(const std::vector<uint64_t>& bm, uint64_t i) {
    return (bm[i >> 6] >> (i & 63)) & 1;
  }
  static void set_bit(std::vector<uint64_t>& bm, uint64_t i) {
    bm[i >> 6] |= uint64_t(1) << (i & 63);
  }
  static uint64_t popcount(const std::vector<uint64_t>& bm) {
    uint64_t c = 0;
    for (uint64_t w : bm) c += (uint64_t)__builtin_popcountll(w);
    return c;
  }

  void build_bitmaps() {
    pow_q_.assign(m_ + 1, 1);
    for (int l = 1; l <= m_; ++l) pow_q_[l] = pow_q_[l - 1] * (uint64_t)q_;
    block_codes_.resize(t_);
    for (int i = 0; i < t_; ++i) block_codes_[i] = z_.blocks[i].range_code(0, m_);

    validp_.assign(m_ + 1, {});
    for (int l = 1; l <= m_; ++l) validp_[l].assign(pow_q_[l] / 64 + 1, 0);
    for (uint64_t bc : block_codes_)
      for (int l = 1; l <= m_; ++l) set_bit(validp_[l], bc / pow_q_[m_ - l]);

    sufs_.assign(m_, {});
    for (int u = 1; u < m_; ++u) {
      std::vector<uint64_t> v;
      v.reserve(t_);
      for (uint64_t bc : block_codes_) v.push_back(bc % pow_q_[u]);
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      sufs_[u] = std::move(v);
    }
    prefs_.assign(m_, {});
    for (int l = 1; l < m_; ++l) {
      std::vector<uint64_t> v;
      v.reserve(t_);
      for (uint64_t bc : block_codes_) v.push_back(bc / pow_q_[m_ - l]);
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
      prefs_[l] = std::move(v);
    }

    fact_.assign(m_, {});
    for (int n = 1; n < m_; ++n) {
      fact_[n].assign(pow_q_[n] / 64 + 1, 0);
      for (uint64_t bc : block_codes_)
        for (int end = n; end <= m_; ++end)
          set_bit(fact_[n], (bc / pow_q_[m_ - end]) % pow_q_[n]);
      for (int u = 1; u < n; ++u)
        for (uint64_t sc : sufs_[u])
          for (uint64_t pc : prefs_[n - u]) set_bit(fact_[n], sc * pow_q_[n - u] + pc);
    }
  }

  // liveness mask of a head of length n0 = m-1: class c is alive when the
  // last c symbols are a valid block prefix and the first n0 - c symbols are
  // a valid block suffix
  uint32_t head_live(uint64_t code, int n0) const {
    uint32_t live = 0;
    for (int c = 0; c <= n0; ++c) {
      if (c > 0 && !get_bit(validp_[c], code % pow_q_[c])) continue;
      int u = n0 - c;
      if (u > 0 && !std::binary_search(sufs_[u].begin(), sufs_[u].end(), code / pow_q_[c]))
        continue;
      live |= 1u << c;
    }
    return live;
  }

  uint64_t suffix_count(int u) const { return sufs_[u].size(); }

  struct TrieNode {
    int32_t child[10];
    uint32_t wrap = 0;  // bit s: reading s completes a block
    TrieNode() { std::fill(child, child + 10, -1); }
  };
  void build_trie() {
    if (!trie_.empty()) return;
    trie_.emplace_back();
    for (auto& b : z_.blocks) {
      int cur = 0;
      for (int i = 0; i + 1 < m_; ++i) {
        int s = b.at(i);
        if (trie_[cur].child[s] < 0) {
          trie_[cur].child[s] = (int32_t)trie_.size();
          trie_.emplace_back();
        }
        cur = trie_[cur].child[s];
      }
      trie_[cur].wrap |= 1u << b.at(m_ - 1);
    }
  }

  // Fallback exact engine: subset construction over NFA states
  // (block, phase), usable when t*m is small regardless of q^m.
  std::pair<std::vector<BigUint>, int> exact_counts_subsets(int n_limit) {
    if ((size_t)t_ * (size_t)m_ > 8192)
      throw ResourceError("concat system too large for exact counting");
    std::map<std::vector<uint32_t>, int> ids;
    std::vector<std::vector<uint32_t>> states;
    std::vector<std::vector<int32_t>> succ;
    std::vector<uint32_t> init;
    for (int b = 0; b < t_; ++b)
      for (int ph = 0; ph < m_; ++ph) init.push_back((uint32_t)(b * m_ + ph));
    ids[init] = 0;
    states.push_back(init);

    auto transition = [&](const std::vector<uint32_t>& st, int s) {
      std::vector<uint32_t> out;
      bool completed = false;
      for (uint32_t e : st) {
        int b = (int)(e / m_), ph = (int)(e % m_);
        if (z_.blocks[b].at(ph) != s) continue;
        if (ph + 1 == m_) completed = true;
        else out.push_back((uint32_t)(b * m_ + ph + 1));
      }
      if (completed)
        for (int b = 0; b < t_; ++b) out.push_back((uint32_t)(b * m_));
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    };

    std::vector<BigUint> counts(n_limit + 1);
    std::vector<BigUint> v(1, BigUint(1));
    for (int n = 1; n <= n_limit; ++n) {
      std::vector<BigUint> nv(states.size());
      size_t alive = states.size();
      for (size_t i = 0; i < alive; ++i) {
        if (v.size() <= i || v[i].is_zero()) continue;
        if (succ.size() <= i) succ.resize(i + 1, std::vector<int32_t>(q_, -2));
        for (int s = 0; s < q_; ++s) {
          if (succ[i][s] == -2) {
            auto ns = transition(states[i], s);
            if (ns.empty()) {
              succ[i][s] = -1;
            } else {
              auto [it, ins] = ids.try_emplace(ns, (int)states.size());
              if (ins) {
                states.push_back(std::move(ns));
                if (states.size() > opts_.max_states)
                  throw ResourceError("concat determinization exceeded the state guard");
              }
              succ[i][s] = (int32_t)it->second;
            }
          }
          if (succ[i][s] >= 0) {
            if ((size_t)succ[i][s] >= nv.size()) nv.resize(states.size());
            nv[succ[i][s]] += v[i];
          }
        }
      }
      nv.resize(states.size());
      v.swap(nv);
      BigUint tot;
      for (auto& x : v) tot += x;
      counts[n] = std::move(tot);
    }
    return {std::move(counts), n_limit};
  }

  const ConcatSystem& z_;
  int q_, m_, t_;
  ConcatCountOptions opts_;
  bool bitmap_ok_ = false;
  std::vector<uint64_t> pow_q_, block_codes_;
  std::vector<std::vector<uint64_t>> validp_, fact_;
  std::vector<std::vector<uint64_t>> sufs_, prefs_;
  std::vector<TrieNode> trie_;
};

}  // namespace

ConcatSystem ConcatSystem::from_blocks(std::vector<Word> blocks) {
  if (blocks.empty()) throw ArgumentError("block set must be non-empty");
  ConcatSystem z;
  z.alphabet = blocks[0].alphabet();
  z.block_len = (int)blocks[0].size();
  if (z.block_len < 1) throw ArgumentError("blocks must be non-empty words");
  for (auto& b : blocks) {
    if ((int)b.size() != z.block_len) throw ArgumentError("blocks must have uniform length");
    if (b.q() != z.alphabet.q) throw ArgumentError("blocks must share one alphabet");
  }
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  z.blocks = std::move(blocks);
  return z;
}

Word champernowne(std::vector<Word> z, uint64_t length) {
  if (z.empty()) throw ArgumentError("champernowne: empty block set");
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  int q = z[0].q();
  std::vector<uint8_t> out;
  out.reserve(length);
  size_t t = z.size();
  std::vector<std::vector<uint8_t>> syms(t);
  for (size_t i = 0; i < t; ++i) syms[i] = z[i].symbols();
  for (size_t k = 1; out.size() < length; ++k) {
    std::vector<size_t> tuple(k, 0);  // odometer over k-tuples, lex order
    for (;;) {
      for (size_t j = 0; j < k && out.size() < length; ++j) {
        auto& bs = syms[tuple[j]];
        for (uint8_t s : bs) {
          if (out.size() >= length) break;
          out.push_back(s);
        }
      }
      if (out.size() >= length) break;
      size_t pos = k;
      while (pos > 0 && ++tuple[pos - 1] == t) {
        tuple[pos - 1] = 0;
        --pos;
      }
      if (pos == 0) break;
    }
  }
  return Word(Alphabet(q), out);
}

std::pair<LanguageTable, int> concat_language_counts_partial(const ConcatSystem& z, int n_max,
                                                             const ConcatCountOptions& opts) {
  if (n_max < 1) throw ArgumentError("concat_language_counts: n_max >= 1");
  Context ctx(z, opts);
  auto [counts, reached] = ctx.exact_counts(n_max);
  LanguageTable table;
  table.source = "concat";
  for (int n = 1; n <= reached; ++n) table.push_level(std::move(counts[n]), std::nullopt);
  return {std::move(table), reached};
}

LanguageTable concat_language_counts(const ConcatSystem& z, int n_max,
                                     const ConcatCountOptions& opts) {
  auto [table, reached] = concat_language_counts_partial(z, n_max, opts);
  if (reached < n_max)
    throw ResourceError("concat determinization exceeded the state guard at n=" +
                        std::to_string(reached + 1));
  return table;
}

CertifyOutcome certify_lower_bound(const ConcatSystem& z, const Budget& f, double e0,
                                   int extra_horizon, const CertifyOptions& opts) {
  CertifyOutcome out;
  int m = z.block_len;
  uint64_t t = z.blocks.size();
  double value = std::log((double)t) / m;
  double gap = e0 - value;
  char buf[160];
  if (!(gap > 0)) {
    // the tail cannot close; still look for a concrete per-n violation on a
    // short horizon before rejecting, so over-rich systems report the
    // smallest failing length
    Context pre(z, opts.count);
    int h0 = std::max(extra_horizon, 2 * m);
    auto [counts, reached] = pre.exact_counts(h0);
    for (int n = 1; n <= reached; ++n) {
      bool ok;
      if (auto ex = f.eval_exact(n)) ok = counts[n] <= *ex;
      else ok = counts[n] <= f.floor_eval(n);
      if (!ok) {
        out.kind = CertifyOutcome::Kind::Violation;
        out.violation_n = n;
        out.violation_count = counts[n].to_string();
        out.budget_value = f.floor_eval(n).to_string();
        return out;
      }
    }
    std::snprintf(buf, sizeof buf,
                  "tail cannot close: log|Z|/m = %.6f >= e0 = %.6f (margin %.3e)", value, e0,
                  gap);
    out.kind = CertifyOutcome::Kind::Rejected;
    out.reject_reason = buf;
    return out;
  }
  double C = std::log((double)m) + 2.0 * std::log((double)t);
  int h_star = std::max<int64_t>(1, (int64_t)std::ceil(C / gap));
  while ((double)h_star * gap < C) ++h_star;  // absorb FP edge
  while (h_star > 1 && (double)(h_star - 1) * gap >= C) --h_star;
  if (h_star > opts.max_tail_start) {
    std::snprintf(buf, sizeof buf, "tail start H* = %d exceeds the guard %d (gap %.3e)",
                  h_star, opts.max_tail_start, gap);
    out.kind = CertifyOutcome::Kind::Rejected;
    out.reject_reason = buf;
    return out;
  }
  int H = std::max(h_star, extra_horizon);

  // layer 1: exact counts while affordable
  Context ctx(z, opts.count);
  auto [exact, exact_to] = ctx.exact_counts(H);

  // one bulk pass over the budget keeps the per-n comparisons cheap
  std::vector<BigUint> fexact;
  std::vector<BigUint> ffloor;
  if (f.eval_exact(1)) {
    fexact = f.exact_values(H);
  } else {
    ffloor.reserve(H);
    for (int n = 1; n <= H; ++n) ffloor.push_back(f.floor_eval(n));
  }
  auto budget_le = [&](const BigUint& count, int n) -> bool {
    if (!fexact.empty()) return count <= fexact[n - 1];
    return count <= ffloor[n - 1];
  };

  for (int n = 1; n <= exact_to; ++n) {
    if (!budget_le(exact[n], n)) {
      out.kind = CertifyOutcome::Kind::Violation;
      out.violation_n = n;
      out.violation_count = exact[n].to_string();
      out.budget_value = (fexact.empty() ? ffloor[n - 1] : fexact[n - 1]).to_string();
      return out;
    }
  }

  // layers 2 and 3 cover the remaining lengths
  std::vector<bool> covered(H + 1, false);
  for (int n = 1; n <= exact_to; ++n) covered[n] = true;
  auto fully_covered = [&] {
    for (int n = 1; n <= H; ++n)
      if (!covered[n]) return false;
    return true;
  };
  bool all_covered = fully_covered();
  std::string note;

  if (!all_covered) {
    for (int w = 1; w <= opts.markov_w_max && !all_covered; ++w) {
      // trial run on a short horizon first; a window order whose rate beats
      // the budget on the trial range cannot cover the tail
      int trial = std::min(H, std::max(5 * m, exact_to + 2 * m));
      auto mk = ctx.markov_counts(w, trial, opts.markov_state_cap);
      if (!mk) continue;
      bool trial_clean = true;
      for (int n = std::max(w, exact_to + 1); n <= trial; ++n)
        if (!budget_le((*mk)[n], n)) {
          trial_clean = false;
          break;
        }
      if (!trial_clean) continue;
      if (trial < H) mk = ctx.markov_counts(w, H, opts.markov_state_cap);
      if (!mk) continue;
      bool useful = false;
      for (int n = std::max(w, exact_to + 1); n <= H; ++n)
        if (!covered[n] && budget_le((*mk)[n], n)) {
          covered[n] = true;
          useful = true;
        }
      if (useful) note += (note.empty() ? "" : ", ") + std::string("w-local bound w=") +
                          std::to_string(w);
      all_covered = fully_covered();
    }
  }
  if (!all_covered && ctx.bitmap_ok()) {
    auto ob = ctx.offset_bounds(H);
    bool useful = false;
    for (int n = std::max(2 * m - 1, exact_to + 1); n <= H; ++n)
      if (!covered[n] && !ob[n].is_zero() && budget_le(ob[n], n)) {
        covered[n] = true;
        useful = true;
      }
    if (useful) note += (note.empty() ? "" : ", ") + std::string("offset decomposition bound");
    all_covered = fully_covered();
  }

  if (!all_covered) {
    int first = 0;
    for (int n = 1; n <= H; ++n)
      if (!covered[n]) {
        first = n;
        break;
      }
    out.kind = CertifyOutcome::Kind::Rejected;
    out.reject_reason = "could not verify counts(n) <= f(n) at n=" + std::to_string(first) +
                        " (exact horizon " + std::to_string(exact_to) + ", H=" + std::to_string(H) + ")";
    return out;
  }

  LowerCertificate cert;
  cert.value = value;
  cert.checked_horizon = H;
  cert.tail_start = h_star;
  cert.e0_used = e0;
  cert.exact_horizon = exact_to;
  cert.exact_counts.assign(exact.begin() + 1, exact.begin() + exact_to + 1);

  // soundness audit: declared e0 floor and (C*) on the checked range
  std::string cond;
  if (!f.declared_e0()) {
    cond = "no declared_e0";
  } else if (e0 > *f.declared_e0() + 1e-12) {
    cond = "e0_used exceeds declared_e0";
  } else {
    auto rep = f.check_cstar(H);
    if (!rep.pass) {
      cond = "(C*) violated at n=" + std::to_string(rep.violation_n);
    } else {
      auto est = f.estimate_e0(1, H);
      if (!est.floor_ok) cond = "budget floor f(n) >= exp(e0 n) failed on range";
    }
  }
  cert.status = cond.empty() ? CertStatus::Sound : CertStatus::Conditional;
  cert.note = cond.empty() ? note : (note.empty() ? cond : note + "; " + cond);
  out.kind = CertifyOutcome::Kind::Accepted;
  out.certificate = std::move(cert);
  return out;
}

}  // namespace wordent
