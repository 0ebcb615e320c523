#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wordent/budget.hpp"
#include "wordent/concat.hpp"
#include "wordent/words.hpp"

namespace wordent {

/// One level of the parameter tower: n_t is represented as the height-fold
/// iterated exponential of the enclosed value, exp^(height)([lo, hi]).
/// Height 0 stores n_0 itself, height 1 stores log n_1, height t >= 2 stores
/// log^(t)(n_t) with outward rounding.
struct TowerEntry {
  int height = 0;
  double lo = 0.0, hi = 0.0;
  std::string render() const;
};

struct Schedule {
  double epsilon = 0.0;
  double e0 = 0.0;
  double delta = 0.0;
  int64_t K = 0;
  double epsilon_tilde = 0.0;
  int64_t n0 = 0;
  std::vector<TowerEntry> tower;  // indices 0..K, tower[K] describes N = n_K
};

/// delta = e0 eps / (105 (4 + 2 e0)), K = ceil(1/delta) + 1, eps~ = eps/15,
/// n0 = smallest integer >= max(K, 4 K^2 / (420^3 e0)) unless overridden
/// upward, and the tower n_{t+1} = exp(K((1+delta)^2 e0 n_t + e0)).
Schedule build_schedule(double e0, double epsilon,
                        std::optional<int64_t> n0_override = {});

/// log f(n) / n < (1 + delta/2) e0 for every n in [n0, 2 n0 - 1].
bool check_n0(const Budget& f, int64_t n0, double delta, double e0);

enum class OptimizeMode { Exact, BranchAndBound, Greedy, Anneal };

struct CandidateSet {
  int n = 0;                   // word length N
  std::vector<Word> words;     // Y, sorted
  std::vector<double> ratios;  // (1/n) log q_n(Y), n = 1..N
  double objective = 0.0;      // min ratio
  bool feasible = false;
  bool global_optimum = false;  // exact / branch-and-bound modes
  uint64_t search_trace = 0;    // nodes or iterations examined
};

struct OptimizeOptions {
  OptimizeMode mode = OptimizeMode::BranchAndBound;
  uint64_t seed = 1;
  uint64_t exact_ceiling = 20;      // exact mode requires q^N <= this
  uint64_t max_nodes = 20'000'000;  // branch-and-bound node guard
  uint64_t anneal_iterations = 20000;
};

/// Feasible Y subset of A^N maximizing min_n (1/n) log q_n(Y); exact and
/// branch-and-bound modes return the global maximizer that is smallest in
/// the subset-lexicographic order.
CandidateSet optimize_y(const Budget& f, Alphabet alphabet, int n,
                        const OptimizeOptions& opts = {});

/// Smallest r with ratios[r] < (1 + delta) ratios[r+1]; empty when none.
std::optional<int> find_plateau(const std::vector<double>& ratios, double delta);

struct BoundSource {
  double value = 0.0;
  std::string source;
  bool sound = false;
  int n = 0;  // the length the bound was attained at, when applicable
};

struct EntropyBracket {
  std::optional<BoundSource> lower;
  std::optional<BoundSource> upper;
  std::vector<BoundSource> upper_sources;
  double h = 0.0;
  int r = -1;  // index into the optimizer ratio list (n_r = r + 1)
  bool plateau_found = false;
  bool zero_shortcut = false;  // f(n) < n+1 seen: exact bracket [0, 0]
  bool numeric = true;         // false for the paper-symbolic scale
  Schedule schedule;
  std::optional<LowerCertificate> lower_certificate;
  int lower_block_len = 0;
  uint64_t lower_z_size = 0;
  std::vector<double> optimizer_ratios;
  std::string notes;
};

struct DeskConfig {
  int n_desk = 12;
  std::vector<int> block_lens = {10, 20};
  int horizon = 60;     // certificate extra horizon and shortcut scan range
  int upper_nmax = 18;  // admissible upper-bound scan depth
  int ext_depth = 0;
  OptimizeMode mode = OptimizeMode::BranchAndBound;
  uint64_t seed = 1;
  int threads = 1;
  int pipeline_n_hat = 2;
  uint64_t enumerate_cap = 200000;  // block-search enumeration guard
};

struct EstimateConfig {
  bool paper_scale = false;
  DeskConfig desk;
};

/// Certified two-sided bracket for E_W(f): upper bounds from admissible
/// counts and the exact optimizer objective, lower bounds from certified
/// concatenation systems (shrink-pipeline output and a direct block search),
/// h and the plateau index from the optimizer ratios at the schedule's delta.
EntropyBracket estimate_word_entropy(const Budget& f, Alphabet alphabet, double epsilon,
                                     const EstimateConfig& config = {});

}  // namespace wordent
