#include "wordent/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "wordent/admissible.hpp"
#include "wordent/pipeline.hpp"

namespace wordent {

std::string TowerEntry::render() const {
  char buf[96];
  if (height == 0) {
    std::snprintf(buf, sizeof buf, "%.0f", lo);
  } else if (height == 1) {
    std::snprintf(buf, sizeof buf, "exp(%.6g)", hi);
  } else {
    std::snprintf(buf, sizeof buf, "exp^(%d)(%.6g)", height, hi);
  }
  return buf;
}

Schedule build_schedule(double e0, double epsilon, std::optional<int64_t> n0_override) {
  if (!(epsilon > 0) || !(epsilon < 1)) throw ArgumentError("epsilon must be in (0,1)");
  if (!(e0 > 0)) throw ArgumentError("e0 must be positive");
  Schedule s;
  s.epsilon = epsilon;
  s.e0 = e0;
  s.delta = e0 * epsilon / (105.0 * (4.0 + 2.0 * e0));
  s.K = (int64_t)std::ceil(1.0 / s.delta) + 1;
  s.epsilon_tilde = epsilon / 15.0;
  double n0f = std::max((double)s.K, 4.0 * (double)s.K * (double)s.K /
                                         (420.0 * 420.0 * 420.0 * e0));
  s.n0 = (int64_t)std::ceil(n0f - 1e-12);
  if (n0_override) {
    if (*n0_override < s.n0)
      throw ArgumentError("n0 override below the schedule floor");
    s.n0 = *n0_override;
  }

  double A = (double)s.K * (1.0 + s.delta) * (1.0 + s.delta) * e0;
  double B = (double)s.K * e0;
  s.tower.reserve(s.K + 1);
  s.tower.push_back({0, (double)s.n0, (double)s.n0});
  if (s.K >= 1) {
    double v = A * (double)s.n0 + B;
    s.tower.push_back({1, std::nextafter(v, 0.0), std::nextafter(v, 1e308)});
  }
  double logA = std::log(A);
  for (int64_t t = 2; t <= s.K; ++t) {
    const TowerEntry& prev = s.tower.back();
    double lo, hi;
    if (t == 2) {
      // log log n_2 = log A + log n_1 + log(1 + B/(A n_1)); the correction is
      // far below double resolution for any schedule-sized n_1
      lo = std::nextafter(prev.lo + std::nextafter(logA, 0.0), 0.0);
      hi = std::nextafter(prev.hi + std::nextafter(logA, 1e308), 1e308);
    } else {
      // log^(t)(n_t) = log^(t-1)(n_{t-1}) + log(1 + (log A + eps)/log n_{t-1});
      // the correction term is <= exp(-v) * (log A + 1), zero at double scale
      lo = prev.lo;
      hi = std::nextafter(prev.hi, 1e308);
    }
    s.tower.push_back({(int)t, lo, hi});
  }
  return s;
}

bool check_n0(const Budget& f, int64_t n0, double delta, double e0) {
  if (n0 < 1) throw ArgumentError("check_n0: n0 >= 1 required");
  double bound = (1.0 + delta / 2.0) * e0;
  for (int64_t n = n0; n <= 2 * n0 - 1; ++n)
    if (!(f.log_eval(n) / (double)n < bound)) return false;
  return true;
}

std::optional<int> find_plateau(const std::vector<double>& ratios, double delta) {
  if (ratios.size() < 2) throw ArgumentError("find_plateau needs at least two ratios");
  for (size_t r = 0; r + 1 < ratios.size(); ++r)
    if (ratios[r] < (1.0 + delta) * ratios[r + 1]) return (int)r;
  return std::nullopt;
}

namespace {

// Shared machinery for the subset optimizer: the ground set is all q^N words
// of length N in code order; factor occupancy is tracked per length with
// bitsets over the q^n codes.
struct Ground {
  int q, n;
  uint64_t size;                        // q^N
  std::vector<uint64_t> pow;            // q^i
  std::vector<uint64_t> floors;         // floor f(m), 1..N
  // bit offsets: level m occupies bitset words [off[m-1], off[m]) and
  // multiplicity slots [coff[m-1], coff[m])
  std::vector<size_t> off, coff;
  size_t words_total, codes_total;

  Ground(const Budget& f, Alphabet a, int n_) : q(a.q), n(n_) {
    pow.assign(n + 1, 1);
    for (int i = 1; i <= n; ++i) {
      if (pow[i - 1] > (uint64_t(1) << 20) / q)
        throw ResourceError("optimize_y ground set too large (q^N > 2^20)");
      pow[i] = pow[i - 1] * q;
    }
    size = pow[n];
    floors.assign(n + 1, 0);
    for (int m = 1; m <= n; ++m) {
      BigUint fl = f.floor_eval(m);
      floors[m] = fl.fits_u64() ? fl.as_u64() : ~uint64_t(0);
      if (floors[m] < 1)
        throw ArgumentError("budget admits no nonempty candidate set: f(" +
                            std::to_string(m) + ") < 1");
    }
    off.assign(n + 1, 0);
    coff.assign(n + 1, 0);
    for (int m = 1; m <= n; ++m) {
      off[m] = off[m - 1] + (pow[m] + 63) / 64;
      coff[m] = coff[m - 1] + pow[m];
    }
    words_total = off[n];
    codes_total = coff[n];
  }

  uint64_t window(uint64_t code, int start, int len) const {
    return (code / pow[n - start - len]) % pow[len];
  }
};

struct Occupancy {
  const Ground& g;
  std::vector<uint64_t> bits;   // distinct-factor bitsets (for bounds)
  std::vector<uint32_t> mult;   // per-factor multiplicities (for removal)
  std::vector<uint64_t> cnt;    // distinct factors per length
  explicit Occupancy(const Ground& g_)
      : g(g_), bits(g.words_total, 0), mult(g.codes_total, 0), cnt(g.n + 1, 0) {}

  // adds the word; records newly distinct (m, code) pairs for undo, or fails
  // (and fully undoes) when a counter would exceed its floor
  bool add(uint64_t code, std::vector<std::pair<int, uint64_t>>& undo) {
    size_t mark = undo.size();
    bool ok = true;
    for (int m = 1; m <= g.n && ok; ++m) {
      for (int st = 0; st + m <= g.n; ++st) {
        uint64_t w = g.window(code, st, m);
        if (mult[g.coff[m - 1] + w]++ == 0) {
          if (cnt[m] + 1 > g.floors[m]) {
            --mult[g.coff[m - 1] + w];
            ok = false;
            break;
          }
          bits[g.off[m - 1] + (w >> 6)] |= uint64_t(1) << (w & 63);
          ++cnt[m];
          undo.push_back({m, w});
        } else {
          undo.push_back({-m, w});  // multiplicity-only bump
        }
      }
    }
    if (!ok) remove(undo, mark);
    return ok;
  }
  void remove(std::vector<std::pair<int, uint64_t>>& undo, size_t mark) {
    while (undo.size() > mark) {
      auto [m, c] = undo.back();
      undo.pop_back();
      int mm = m < 0 ? -m : m;
      --mult[g.coff[mm - 1] + c];
      if (m > 0) {
        bits[g.off[mm - 1] + (c >> 6)] &= ~(uint64_t(1) << (c & 63));
        --cnt[mm];
      }
    }
  }
  // removes a word that is known to be present (inverse of a successful add)
  void remove_word(uint64_t code) {
    for (int m = 1; m <= g.n; ++m)
      for (int st = 0; st + m <= g.n; ++st) {
        uint64_t w = g.window(code, st, m);
        if (--mult[g.coff[m - 1] + w] == 0) {
          bits[g.off[m - 1] + (w >> 6)] &= ~(uint64_t(1) << (w & 63));
          --cnt[m];
        }
      }
  }

  double objective() const {
    double best = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= g.n; ++m) {
      if (cnt[m] == 0) return -std::numeric_limits<double>::infinity();
      best = std::min(best, std::log((double)cnt[m]) / m);
    }
    return best;
  }
};

// suffix factor occupancy: bits of all words with code >= i
struct SuffixBits {
  const Ground& g;
  std::vector<uint64_t> bits;  // (size+1) x words_total, index i * words_total
  explicit SuffixBits(const Ground& g_) : g(g_) {
    bits.assign((g.size + 1) * g.words_total, 0);
    for (int64_t i = (int64_t)g.size - 1; i >= 0; --i) {
      uint64_t* cur = &bits[(size_t)i * g.words_total];
      const uint64_t* nxt = &bits[(size_t)(i + 1) * g.words_total];
      std::copy(nxt, nxt + g.words_total, cur);
      for (int m = 1; m <= g.n; ++m)
        for (int st = 0; st + m <= g.n; ++st) {
          uint64_t w = g.window((uint64_t)i, st, m);
          cur[g.off[m - 1] + (w >> 6)] |= uint64_t(1) << (w & 63);
        }
    }
  }
  // min over m of (1/m) log min(popcount(cur | suffix_i), floor_m)
  double bound(const Occupancy& occ, uint64_t i) const {
    const uint64_t* suf = &bits[(size_t)i * g.words_total];
    double best = std::numeric_limits<double>::infinity();
    for (int m = 1; m <= g.n; ++m) {
      uint64_t c = 0;
      for (size_t w = g.off[m - 1]; w < g.off[m]; ++w)
        c += (uint64_t)__builtin_popcountll(occ.bits[w] | suf[w]);
      c = std::min(c, g.floors[m]);
      if (c == 0) return -std::numeric_limits<double>::infinity();
      best = std::min(best, std::log((double)c) / m);
    }
    return best;
  }
};

CandidateSet finish(const Ground& g, Alphabet a, const std::vector<uint64_t>& codes,
                    uint64_t trace, bool global_opt) {
  CandidateSet cs;
  cs.n = g.n;
  Occupancy occ(g);
  std::vector<std::pair<int, uint64_t>> undo;
  for (uint64_t c : codes) {
    cs.words.push_back(Word::from_code(a, c, g.n));
    if (!occ.add(c, undo)) throw ModeError("internal: witness infeasible");
  }
  cs.ratios.resize(g.n);
  for (int m = 1; m <= g.n; ++m)
    cs.ratios[m - 1] = occ.cnt[m] ? std::log((double)occ.cnt[m]) / m
                                  : -std::numeric_limits<double>::infinity();
  cs.objective = occ.objective();
  cs.feasible = true;
  cs.global_optimum = global_opt;
  cs.search_trace = trace;
  return cs;
}

// subset-lex order on code lists (sorted ascending): sequence lexicographic,
// a strict prefix precedes its extensions
bool subset_lex_less(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct BnB {
  const Ground& g;
  const SuffixBits& suf;
  Alphabet a;
  uint64_t max_nodes;
  uint64_t nodes = 0;
  Occupancy occ;
  std::vector<std::pair<int, uint64_t>> undo;
  std::vector<uint64_t> cur;
  double best_obj = -std::numeric_limits<double>::infinity();
  double target = 0.0;
  std::vector<uint64_t> witness;
  bool witness_found = false;

  BnB(const Ground& g_, const SuffixBits& s_, Alphabet a_, uint64_t mn)
      : g(g_), suf(s_), a(a_), max_nodes(mn), occ(g_) {}

  void tick() {
    if (++nodes > max_nodes) throw ResourceError("optimize_y exceeded the node ceiling");
  }

  // phase 1: optimal value
  void value_dfs(uint64_t i) {
    tick();
    if (i == g.size) {
      if (!cur.empty()) best_obj = std::max(best_obj, occ.objective());
      return;
    }
    if (suf.bound(occ, i) <= best_obj) {
      // the best completion cannot strictly beat the incumbent, but the
      // incumbent may live here; evaluate the full-stop leaf once
      if (!cur.empty()) best_obj = std::max(best_obj, occ.objective());
      return;
    }
    size_t mark = undo.size();
    if (occ.add(i, undo)) {
      cur.push_back(i);
      value_dfs(i + 1);
      cur.pop_back();
      occ.remove(undo, mark);
    }
    value_dfs(i + 1);
  }

  // phase 2: lexicographically-smallest witness achieving the target
  bool witness_dfs(uint64_t i) {
    tick();
    if (!cur.empty() && occ.objective() == target) {
      witness = cur;
      return true;
    }
    if (i == g.size) return false;
    size_t mark = undo.size();
    if (occ.add(i, undo)) {
      bool ok = suf.bound(occ, i + 1) >= target;
      if (ok) {
        cur.push_back(i);
        if (witness_dfs(i + 1)) return true;
        cur.pop_back();
      }
      occ.remove(undo, mark);
    }
    if (suf.bound(occ, i + 1) >= target && witness_dfs(i + 1)) return true;
    return false;
  }
};

CandidateSet optimize_exact(const Budget& f, Alphabet a, int n, const OptimizeOptions& opts) {
  Ground g(f, a, n);
  if (g.size > opts.exact_ceiling)
    throw ModeError("exact mode requires q^N <= " + std::to_string(opts.exact_ceiling));
  uint64_t masks = uint64_t(1) << g.size;
  double best_obj = -std::numeric_limits<double>::infinity();
  std::vector<uint64_t> best_codes;
  std::vector<std::pair<int, uint64_t>> undo;
  for (uint64_t mask = 1; mask < masks; ++mask) {
    Occupancy occ(g);
    undo.clear();
    bool feas = true;
    std::vector<uint64_t> codes;
    for (uint64_t c = 0; c < g.size && feas; ++c)
      if (mask >> c & 1) {
        if (occ.add(c, undo)) codes.push_back(c);
        else feas = false;
      }
    if (!feas) continue;
    double obj = occ.objective();
    if (obj > best_obj || (obj == best_obj && subset_lex_less(codes, best_codes))) {
      best_obj = obj;
      best_codes = std::move(codes);
    }
  }
  if (best_codes.empty()) throw ModeError("no feasible nonempty candidate set");
  return finish(g, a, best_codes, masks, true);
}

CandidateSet optimize_bnb(const Budget& f, Alphabet a, int n, const OptimizeOptions& opts) {
  Ground g(f, a, n);
  if (g.size > 16384)
    throw ResourceError("branch-and-bound ground set too large (q^N > 16384)");
  SuffixBits suf(g);
  BnB b(g, suf, a, opts.max_nodes);
  b.value_dfs(0);
  if (b.best_obj == -std::numeric_limits<double>::infinity())
    throw ModeError("no feasible nonempty candidate set");
  uint64_t trace = b.nodes;
  BnB w(g, suf, a, opts.max_nodes);
  w.target = b.best_obj;
  if (!w.witness_dfs(0)) throw ModeError("internal: witness pass found nothing");
  return finish(g, a, w.witness, trace + w.nodes, true);
}

CandidateSet optimize_greedy(const Budget& f, Alphabet a, int n, const OptimizeOptions&) {
  Ground g(f, a, n);
  Occupancy occ(g);
  std::vector<std::pair<int, uint64_t>> undo;
  std::vector<uint64_t> codes;
  for (uint64_t c = 0; c < g.size; ++c)
    if (occ.add(c, undo)) codes.push_back(c);
  return finish(g, a, codes, g.size, false);
}

CandidateSet optimize_anneal(const Budget& f, Alphabet a, int n, const OptimizeOptions& opts) {
  Ground g(f, a, n);
  Occupancy occ(g);
  std::vector<std::pair<int, uint64_t>> undo;
  std::vector<char> in(g.size, 0);
  for (uint64_t c = 0; c < g.size; ++c)
    if (occ.add(c, undo)) in[c] = 1;

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double cur_obj = occ.objective();
  uint64_t in_count = 0;
  std::vector<uint64_t> best_codes;
  for (uint64_t c = 0; c < g.size; ++c)
    if (in[c]) {
      best_codes.push_back(c);
      ++in_count;
    }
  double best_obj = cur_obj;

  double temp = 0.05;
  for (uint64_t it = 0; it < opts.anneal_iterations; ++it, temp *= 0.9997) {
    uint64_t c = rng() % g.size;
    if (in[c]) {
      if (in_count == 1) continue;  // keep the set nonempty
      occ.remove_word(c);
      double obj = occ.objective();
      if (obj >= cur_obj || unif(rng) < std::exp((obj - cur_obj) / temp)) {
        in[c] = 0;
        --in_count;
        cur_obj = obj;
      } else {
        std::vector<std::pair<int, uint64_t>> u2;
        occ.add(c, u2);  // re-adding a removed word is always feasible
      }
    } else {
      size_t mark = undo.size();
      if (!occ.add(c, undo)) continue;
      double obj = occ.objective();
      if (obj >= cur_obj || unif(rng) < std::exp((obj - cur_obj) / temp)) {
        in[c] = 1;
        ++in_count;
        cur_obj = obj;
      } else {
        occ.remove(undo, mark);
      }
    }
    if (cur_obj > best_obj) {
      best_obj = cur_obj;
      best_codes.clear();
      for (uint64_t x = 0; x < g.size; ++x)
        if (in[x]) best_codes.push_back(x);
    }
  }
  return finish(g, a, best_codes, opts.anneal_iterations, false);
}

}  // namespace

CandidateSet optimize_y(const Budget& f, Alphabet alphabet, int n, const OptimizeOptions& opts) {
  if (n < 1) throw ArgumentError("optimize_y: N >= 1 required");
  switch (opts.mode) {
    case OptimizeMode::Exact: return optimize_exact(f, alphabet, n, opts);
    case OptimizeMode::BranchAndBound: return optimize_bnb(f, alphabet, n, opts);
    case OptimizeMode::Greedy: return optimize_greedy(f, alphabet, n, opts);
    case OptimizeMode::Anneal: return optimize_anneal(f, alphabet, n, opts);
  }
  throw ArgumentError("unknown optimize mode");
}

namespace {

struct LowerCandidate {
  CertifyOutcome outcome;
  int m = 0;
  uint64_t z_size = 0;
  std::string source;
};

// prefer sound over conditional, then larger value
bool better_lower(const LowerCandidate& a, const LowerCandidate& b) {
  auto rank = [](const LowerCandidate& c) {
    return c.outcome.certificate->status == CertStatus::Sound ? 1 : 0;
  };
  if (rank(a) != rank(b)) return rank(a) > rank(b);
  return a.outcome.certificate->value > b.outcome.certificate->value;
}

// Direct block search: admissible blocks of length m with a synchronizing
// all-zero suffix, repaired by deleting blocks that carry the rarest factor
// at the smallest violating length, then certified in full.
std::optional<LowerCandidate> search_blocks(const Budget& f, Alphabet a, double e0, int m,
                                            int horizon, uint64_t cap) {
  std::optional<LowerCandidate> best;
  for (int k = 1; k <= std::min(6, m - 1); ++k) {
    std::vector<Word> adm = enumerate_admissible(f, a, m, cap + 1);
    if (adm.size() > cap) break;  // enumeration guard
    std::vector<Word> z;
    for (auto& w : adm) {
      bool zeros = true;
      for (int i = 0; i < k && zeros; ++i)
        if (w.at(w.size() - 1 - i) != 0) zeros = false;
      if (zeros) z.push_back(w);
    }
    if (z.size() < 2) continue;

    bool accepted = false;
    for (int round = 0; round < 24 && z.size() >= 2; ++round) {
      ConcatSystem sys = ConcatSystem::from_blocks(z);
      // cheap pre-screen on a short horizon (partial counts are fine)
      int h0 = std::min(3 * m, horizon);
      ConcatCountOptions copts;
      copts.max_states = 50000;
      int viol = 0;
      {
        auto [t, reached] = concat_language_counts_partial(sys, h0, copts);
        for (int nn = 1; nn <= reached; ++nn) {
          if (t.count(nn) > f.floor_eval(nn)) {
            viol = nn;
            break;
          }
        }
      }
      if (!viol && std::log((double)z.size()) / m > e0 - 0.005) {
        // feasible so far but the tail gap is unworkably thin; a subset keeps
        // the language inside the budget, so truncate lexicographically
        double margin = std::max(0.01, 0.03 * e0);
        uint64_t cap = (uint64_t)std::floor(std::exp((e0 - margin) * m));
        if (cap < 2 || cap >= z.size()) break;
        z.resize(cap);
        continue;
      }
      if (!viol) {
        CertifyOptions co;
        co.count.max_states = 300000;
        auto out = certify_lower_bound(sys, f, e0, horizon, co);
        if (out.kind == CertifyOutcome::Kind::Accepted) {
          LowerCandidate c{std::move(out), m, sys.blocks.size(),
                           "block-search m=" + std::to_string(m) + " k=" + std::to_string(k)};
          if (!best || better_lower(c, *best)) best = std::move(c);
          accepted = true;
          break;
        }
        if (out.kind == CertifyOutcome::Kind::Violation && out.violation_n <= m)
          viol = out.violation_n;
        else
          break;  // cannot repair junction-scale or unverifiable lengths
      }
      if (viol > m) break;
      // repair: remove the blocks owning the rarest internal factor
      std::map<Word, std::vector<uint32_t>> owners;
      for (uint32_t i = 0; i < z.size(); ++i)
        for (auto& x : factors(z[i], viol)) owners[x].push_back(i);
      if (owners.empty()) break;
      auto rare = owners.begin();
      for (auto it = owners.begin(); it != owners.end(); ++it)
        if (it->second.size() < rare->second.size()) rare = it;
      if (4 * rare->second.size() >= 3 * z.size()) break;  // removal would gut the set
      std::vector<char> del(z.size(), 0);
      for (uint32_t i : rare->second) del[i] = 1;
      std::vector<Word> keep;
      for (size_t i = 0; i < z.size(); ++i)
        if (!del[i]) keep.push_back(z[i]);
      if (keep.size() == z.size()) break;  // no progress
      z.swap(keep);
    }
    if (accepted) break;  // tighter suffixes only shrink the value
  }
  return best;
}

}  // namespace

EntropyBracket estimate_word_entropy(const Budget& f, Alphabet alphabet, double epsilon,
                                     const EstimateConfig& config) {
  if (!(epsilon > 0) || !(epsilon < 1)) throw ArgumentError("epsilon must be in (0,1)");
  EntropyBracket br;
  const DeskConfig& d = config.desk;

  double e0 = f.declared_e0() ? *f.declared_e0()
                              : f.estimate_e0(1, std::max(2, d.horizon)).e0_estimate;
  bool e0_declared = f.declared_e0().has_value();
  br.schedule = build_schedule(e0, epsilon);

  // zero shortcut: any checked n with f(n) < n+1 pins E_W = 0
  for (int n = 1; n <= std::max(d.horizon, d.n_desk); ++n) {
    if (f.eval(n) < (double)(n + 1)) {
      br.zero_shortcut = true;
      br.lower = BoundSource{0.0, "zero-shortcut f(" + std::to_string(n) + ") < n+1", true, n};
      br.upper = br.lower;
      br.h = 0.0;
      return br;
    }
  }

  if (config.paper_scale) {
    br.numeric = false;
    br.notes = "paper-symbolic scale: N = n_K is astronomically large; no numeric run";
    return br;
  }

  // upper bounds
  AdmissibleOptions aopts;
  aopts.ext_depth = d.ext_depth;
  aopts.threads = d.threads;
  auto ubs = upper_bound_sequence(f, alphabet, d.upper_nmax, aopts);
  BoundSource ub_adm;
  ub_adm.value = std::numeric_limits<double>::infinity();
  for (auto& u : ubs)
    if (u.count > 0 && u.u_value < ub_adm.value) {
      ub_adm.value = u.u_value;
      ub_adm.n = u.n;
    }
  ub_adm.source = "admissible-counts";
  ub_adm.sound = true;
  br.upper_sources.push_back(ub_adm);

  OptimizeOptions oopts;
  oopts.mode = d.mode;
  oopts.seed = d.seed;
  CandidateSet cs;
  try {
    cs = optimize_y(f, alphabet, d.n_desk, oopts);
  } catch (const ResourceError&) {
    // the exact search blew its node guard; fall back to the greedy set,
    // which keeps the bracket sound (its objective is not an upper source)
    oopts.mode = OptimizeMode::Greedy;
    cs = optimize_y(f, alphabet, d.n_desk, oopts);
    br.notes += "optimizer node guard tripped; greedy candidate set used. ";
  }
  br.optimizer_ratios = cs.ratios;
  if (cs.global_optimum) {
    BoundSource ub_opt{cs.objective, "optimizer-objective", true, d.n_desk};
    br.upper_sources.push_back(ub_opt);
  }
  br.upper = br.upper_sources[0];
  for (auto& s : br.upper_sources)
    if (s.value < br.upper->value) br.upper = s;

  // h and the plateau index from the optimizer ratios at the schedule delta
  auto r = find_plateau(cs.ratios, br.schedule.delta);
  if (r) {
    br.plateau_found = true;
    br.r = *r;
    br.h = cs.ratios[*r];
  } else {
    br.plateau_found = false;
    double best = cs.ratios[0];
    int arg = 0;
    for (size_t i = 1; i < cs.ratios.size(); ++i)
      if (cs.ratios[i] < best) {
        best = cs.ratios[i];
        arg = (int)i;
      }
    br.r = arg;
    br.h = best;
    br.notes += "no plateau at the schedule delta; h is the optimizer objective. ";
  }

  // lower bounds: shrink-pipeline output and the direct block search
  std::optional<LowerCandidate> best;
  try {
    PipelineParams pp;
    pp.h = br.h;
    pp.epsilon = epsilon;
    pp.n_hat = d.pipeline_n_hat;
    pp.e0 = e0;
    PipelineState ps = shrink_pipeline(cs.words, f, pp);
    if (!ps.failed_stage && ps.z5.size() >= 2) {
      ConcatSystem sys = ConcatSystem::from_blocks(ps.z5);
      CertifyOptions co;
      co.count.max_states = 300000;
      auto out = certify_lower_bound(sys, f, e0, d.horizon, co);
      if (out.kind == CertifyOutcome::Kind::Accepted)
        best = LowerCandidate{std::move(out), sys.block_len, sys.blocks.size(), "pipeline"};
    }
  } catch (const std::exception&) {
    // pipeline failures surface in diagnostics elsewhere; the search continues
  }
  for (int m : d.block_lens) {
    if (m < 2) continue;
    auto c = search_blocks(f, alphabet, e0, m, d.horizon, d.enumerate_cap);
    if (c && (!best || better_lower(*c, *best))) best = std::move(c);
  }
  if (best) {
    auto& cert = *best->outcome.certificate;
    bool sound = cert.status == CertStatus::Sound && e0_declared;
    br.lower = BoundSource{cert.value, best->source, sound, best->m};
    br.lower_certificate = cert;
    br.lower_block_len = best->m;
    br.lower_z_size = best->z_size;
  } else {
    br.notes += "no lower certificate found by the desk search. ";
  }
  return br;
}

}  // namespace wordent
