#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wordent/bigint.hpp"
#include "wordent/words.hpp"

namespace wordent {

enum class BudgetKind { CeilGeo, FibOffset, Pow, Table };
enum class TableExtend { Error, SubmultHull };

enum class CstarState { Unchecked, Verified, Violated };
struct CstarStatus {
  CstarState state = CstarState::Unchecked;
  int64_t n = 0;  // verified-on-range(n) or violated-at(n)
};

struct CstarReport {
  bool pass = false;
  int n_max = 0;
  // first violation, when any
  int violation_n = 0;
  std::string violation_kind;  // "strict-increase", "floor", "submultiplicative"
  std::string detail;
};

struct E0Estimate {
  double e0_estimate = 0.0;
  int argmin_n = 0;
  bool floor_ok = false;
  bool fekete_applies = false;  // (C*) verified on the scanned range
};

/// The complexity budget f. Evaluation of the closed forms is exact
/// (integer / rational arithmetic); doubles are derived views.
class Budget {
 public:
  static Budget ceil_geo(int64_t theta_num, int64_t theta_den,
                         std::optional<double> declared_e0 = {});
  static Budget fib_offset(int offset, std::optional<double> declared_e0 = {});
  static Budget pow(int64_t base, std::optional<double> declared_e0 = {});
  static Budget table(std::vector<double> values, TableExtend extend,
                      std::optional<double> declared_e0 = {});

  static Budget from_json_text(const std::string& text);
  static Budget from_json_file(const std::string& path);
  std::string to_json_text() const;
  std::string describe() const;

  BudgetKind kind() const { return kind_; }
  std::optional<double> declared_e0() const { return declared_e0_; }
  CstarStatus cstar_status() const;

  /// f(n) as a double. n >= 1.
  double eval(int64_t n) const;
  /// Exact integer value when the kind is integer-valued (ceil-geo,
  /// fib-offset, pow); empty for tables.
  std::optional<BigUint> eval_exact(int64_t n) const;
  /// Exact values f(1)..f(n_max) in one incremental pass (closed forms only).
  std::vector<BigUint> exact_values(int64_t n_max) const;
  /// log f(n), computed from the exact representation where one exists.
  double log_eval(int64_t n) const;
  /// Largest integer <= f(n); requires f(n) < 2^63 for table kinds.
  BigUint floor_eval(int64_t n) const;

  /// Checks (C*): strict increase with f(n) >= n+1 up to n_max, and
  /// submultiplicativity over every pair n + n' <= n_max. Violations are
  /// report content, not errors. Updates the cached status.
  CstarReport check_cstar(int n_max) const;

  /// min over the range of (1/n) log f(n), plus the declared-e0 floor audit
  /// f(n) >= exp(declared_e0 * n) over the range.
  E0Estimate estimate_e0(int n_lo, int n_hi) const;

  /// Smallest n' in [n, (1+delta) n] with f(n'+j) >= exp(e0 j / 2) f(n') for
  /// all 1 <= j <= j_horizon; empty when no point in the interval passes.
  std::optional<int64_t> find_growth_point(int64_t n, double delta, int j_horizon) const;

 private:
  Budget() = default;
  double table_value(int64_t n) const;

  BudgetKind kind_ = BudgetKind::Pow;
  int64_t num_ = 2, den_ = 1;  // ceil-geo theta = num/den (reduced); pow base = num
  int offset_ = 2;             // fib-offset
  std::vector<double> values_;
  TableExtend extend_ = TableExtend::Error;
  std::optional<double> declared_e0_;

  // cached (C*) status; monotone updates, benign races
  struct Cache {
    std::atomic<int> state{0};
    std::atomic<int64_t> n{0};
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

}  // namespace wordent
