#include "wordent/admissible.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace wordent {

namespace {

// DFS over the prefix tree of admissible words. A node at depth d is an
// admissible word of length d; appending a symbol adds exactly one window per
// length m in (z, d+1], where z is the longest suffix of the extended word
// that already occurs in it earlier (shorter suffixes of a repeated suffix
// repeat as well, so the new lengths form the top range and z can be found by
// binary search).
class Scanner {
 public:
  Scanner(int q, int depth_max, std::vector<uint64_t> floors, uint64_t node_budget)
      : q_(q),
        depth_max_(depth_max),
        floors_(std::move(floors)),
        node_budget_(node_budget),
        seen_(depth_max + 1),
        level_nodes_(depth_max + 1, 0),
        level_ext_(depth_max + 1, 0) {
    syms_.reserve(depth_max);
  }

  // Runs the subtree rooted at the given prefix. Returns max depth reached.
  int run_prefix(const std::vector<uint8_t>& prefix, int ext_depth) {
    for (uint8_t s : prefix)
      if (!push(s)) {
        for (size_t i = syms_.size(); i-- > 0;) pop();
        return 0;
      }
    int deepest = descend((int)prefix.size(), ext_depth);
    for (size_t i = syms_.size(); i-- > 0;) pop();
    return deepest;
  }

  const std::vector<uint64_t>& level_nodes() const { return level_nodes_; }
  const std::vector<uint64_t>& level_ext() const { return level_ext_; }
  uint64_t nodes() const { return nodes_; }

 private:
  uint64_t suffix_code(int m, uint8_t s) const {
    uint64_t c = 0;
    int d = (int)syms_.size();
    for (int i = d - (m - 1); i < d; ++i) c = c * q_ + syms_[i];
    return c * q_ + s;
  }
  bool seen_has(int m, uint64_t code) const {
    for (uint64_t v : seen_[m])
      if (v == code) return true;
    return false;
  }

  // Appends s when admissible; false = pruned.
  bool push(uint8_t s) {
    int dnew = (int)syms_.size() + 1;
    int lo = 0, hi = dnew - 1;
    while (lo < hi) {
      int mid = (lo + hi + 1) / 2;
      if (seen_has(mid, suffix_code(mid, s))) lo = mid;
      else hi = mid - 1;
    }
    int z = lo;
    for (int m = z + 1; m <= dnew; ++m)
      if (seen_[m].size() + 1 > floors_[m]) return false;
    for (int m = z + 1; m <= dnew; ++m) seen_[m].push_back(suffix_code(m, s));
    syms_.push_back(s);
    undo_.push_back(z);
    return true;
  }

  void pop() {
    int d = (int)syms_.size();
    int z = undo_.back();
    undo_.pop_back();
    for (int m = z + 1; m <= d; ++m) seen_[m].pop_back();
    syms_.pop_back();
  }

  // Returns the deepest level reached in this subtree (including this node).
  int descend(int depth, int ext_depth) {
    if (++nodes_ > node_budget_)
      throw ResourceError("admissible scan exceeded the node ceiling at n=" +
                          std::to_string(depth));
    ++level_nodes_[depth];
    int deepest = depth;
    if (depth < depth_max_) {
      for (uint8_t s = 0; s < q_; ++s) {
        if (!push(s)) continue;
        deepest = std::max(deepest, descend(depth + 1, ext_depth));
        pop();
      }
    }
    if (deepest - depth >= ext_depth) ++level_ext_[depth];
    return deepest;
  }

  int q_, depth_max_;
  std::vector<uint64_t> floors_;
  uint64_t node_budget_, nodes_ = 0;
  std::vector<uint8_t> syms_;
  std::vector<int> undo_;
  std::vector<std::vector<uint64_t>> seen_;
  std::vector<uint64_t> level_nodes_, level_ext_;
};

std::vector<uint64_t> budget_floors(const Budget& f, int n_max) {
  std::vector<uint64_t> floors(n_max + 1, 0);
  for (int m = 1; m <= n_max; ++m) {
    BigUint fl = f.floor_eval(m);
    floors[m] = fl.fits_u64() ? fl.as_u64() : ~uint64_t(0);
  }
  return floors;
}

// Deterministic merged scan: explores only subtrees whose first symbol is 0
// (budget constraints are invariant under alphabet permutation, so each first
// symbol contributes the same counts) and multiplies by q at the end. The
// work partition is fixed at depth-2 prefixes independent of the thread
// count, so counts and guard behaviour are identical for any --threads.
std::vector<uint64_t> scan_levels(const Budget& f, Alphabet alphabet, int depth_max,
                                  const AdmissibleOptions& opts) {
  auto floors = budget_floors(f, depth_max);
  int q = alphabet.q;
  int threads = std::max(1, opts.threads);

  std::vector<uint64_t> levels(depth_max + 1, 0);
  if (depth_max == 1) {
    if (floors[1] >= 1) levels[1] = (uint64_t)q;
    return levels;
  }

  std::vector<std::vector<uint8_t>> roots;
  for (int s = 0; s < q; ++s) roots.push_back({0, (uint8_t)s});

  std::vector<std::vector<uint64_t>> partial(roots.size());
  std::vector<int> deepest(roots.size(), 0);
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::string error_msg;
  std::mutex err_mu;
  uint64_t per_root_budget = opts.max_nodes / roots.size() + 1;
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= roots.size() || failed.load()) break;
      try {
        Scanner sc(q, depth_max, floors, per_root_budget);
        deepest[i] = sc.run_prefix(roots[i], opts.ext_depth);
        partial[i] = sc.level_ext();
      } catch (const ResourceError& e) {
        std::lock_guard<std::mutex> g(err_mu);
        error_msg = e.what();
        failed.store(true);
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failed.load()) throw ResourceError(error_msg);

  for (auto& p : partial)
    for (size_t i = 0; i < p.size(); ++i) levels[i] += p[i];
  // the depth-1 node ("0") sits above the partition roots
  if (floors[1] >= 1) {
    int max_deep = 1;
    for (int d : deepest) max_deep = std::max(max_deep, d);
    if (max_deep - 1 >= opts.ext_depth) levels[1] = 1;
  }
  for (auto& v : levels) v *= (uint64_t)q;
  return levels;
}

}  // namespace

AdmissibleCount count_admissible(const Budget& f, Alphabet alphabet, int n,
                                 const AdmissibleOptions& opts) {
  if (n < 1) throw ArgumentError("count_admissible: n >= 1 required");
  if (opts.ext_depth < 0) throw ArgumentError("ext_depth must be >= 0");
  auto levels = scan_levels(f, alphabet, n + opts.ext_depth, opts);
  AdmissibleCount out;
  out.n = n;
  out.ext_depth = opts.ext_depth;
  out.count = levels[n];
  out.u_value = out.count ? std::log((double)out.count) / n : -std::numeric_limits<double>::infinity();
  return out;
}

std::vector<AdmissibleCount> upper_bound_sequence(const Budget& f, Alphabet alphabet,
                                                  int n_max, const AdmissibleOptions& opts) {
  if (n_max < 1) throw ArgumentError("upper_bound_sequence: n_max >= 1 required");
  auto levels = scan_levels(f, alphabet, n_max + opts.ext_depth, opts);
  std::vector<AdmissibleCount> out;
  out.reserve(n_max);
  for (int n = 1; n <= n_max; ++n) {
    AdmissibleCount c;
    c.n = n;
    c.ext_depth = opts.ext_depth;
    c.count = levels[n];
    c.u_value = c.count ? std::log((double)c.count) / n : -std::numeric_limits<double>::infinity();
    out.push_back(c);
  }
  return out;
}

UpperBoundPartial upper_bound_sequence_partial(const Budget& f, Alphabet alphabet, int n_max,
                                               const AdmissibleOptions& opts) {
  UpperBoundPartial out;
  out.requested_n_max = n_max;
  int depth = n_max;
  for (;;) {
    try {
      out.counts = upper_bound_sequence(f, alphabet, depth, opts);
      out.partial = depth < n_max;
      return out;
    } catch (const ResourceError&) {
      if (depth <= 1) throw;
      depth /= 2;
    }
  }
}

std::vector<Word> enumerate_admissible(const Budget& f, Alphabet alphabet, int n,
                                       uint64_t limit, int ext_depth) {
  if (n < 1 || limit < 1) throw ArgumentError("enumerate_admissible: bad arguments");
  auto floors = budget_floors(f, n + ext_depth);
  int q = alphabet.q;

  // lexicographic DFS, stop at limit
  std::vector<Word> out;
  struct Enum {
    int q, n, ext_depth;
    uint64_t limit;
    const std::vector<uint64_t>& floors;
    std::vector<Word>& out;
    std::vector<uint8_t> syms;
    std::vector<std::vector<uint64_t>> seen;
    std::vector<int> undo;

    uint64_t suffix_code(int m, uint8_t s) const {
      uint64_t c = 0;
      int d = (int)syms.size();
      for (int i = d - (m - 1); i < d; ++i) c = c * q + syms[i];
      return c * q + s;
    }
    bool push(uint8_t s) {
      int dnew = (int)syms.size() + 1;
      int lo = 0, hi = dnew - 1;
      while (lo < hi) {
        int mid = (lo + hi + 1) / 2;
        uint64_t code = suffix_code(mid, s);
        bool found = false;
        for (uint64_t v : seen[mid])
          if (v == code) { found = true; break; }
        if (found) lo = mid;
        else hi = mid - 1;
      }
      int z = lo;
      for (int m = z + 1; m <= dnew; ++m)
        if (seen[m].size() + 1 > floors[m]) return false;
      for (int m = z + 1; m <= dnew; ++m) seen[m].push_back(suffix_code(m, s));
      syms.push_back(s);
      undo.push_back(z);
      return true;
    }
    void pop() {
      int d = (int)syms.size(), z = undo.back();
      undo.pop_back();
      for (int m = z + 1; m <= d; ++m) seen[m].pop_back();
      syms.pop_back();
    }
    // returns deepest depth reached below (for ext_depth gating)
    int dfs(int depth) {
      int deepest = depth;
      if (depth < n + ext_depth && out.size() < limit) {
        for (uint8_t s = 0; s < q && out.size() < limit; ++s) {
          if (!push(s)) continue;
          if ((int)syms.size() == n) {
            // look ahead for extendability before accepting
            int sub = dfs(depth + 1);
            if (sub - n >= ext_depth) out.push_back(Word(Alphabet(q), syms));
            deepest = std::max(deepest, sub);
          } else {
            deepest = std::max(deepest, dfs(depth + 1));
          }
          pop();
        }
      }
      return deepest;
    }
  } en{q, n, ext_depth, limit, floors, out, {}, std::vector<std::vector<uint64_t>>(n + ext_depth + 1), {}};
  en.dfs(0);
  return out;
}

}  // namespace wordent
