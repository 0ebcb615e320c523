#include "wordent/budget.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace wordent {

using nlohmann::json;

Budget Budget::ceil_geo(int64_t theta_num, int64_t theta_den, std::optional<double> e0) {
  if (theta_den < 1 || theta_num <= theta_den)
    throw ArgumentError("ceil-geo requires theta = num/den > 1");
  int64_t g = std::gcd(theta_num, theta_den);
  Budget b;
  b.kind_ = BudgetKind::CeilGeo;
  b.num_ = theta_num / g;
  b.den_ = theta_den / g;
  b.declared_e0_ = e0;
  return b;
}

Budget Budget::fib_offset(int offset, std::optional<double> e0) {
  if (offset < 1) throw ArgumentError("fib-offset requires offset >= 1");
  Budget b;
  b.kind_ = BudgetKind::FibOffset;
  b.offset_ = offset;
  b.declared_e0_ = e0;
  return b;
}

Budget Budget::pow(int64_t base, std::optional<double> e0) {
  if (base < 2) throw ArgumentError("pow requires base >= 2");
  Budget b;
  b.kind_ = BudgetKind::Pow;
  b.num_ = base;
  b.declared_e0_ = e0;
  return b;
}

Budget Budget::table(std::vector<double> values, TableExtend extend, std::optional<double> e0) {
  if (values.empty()) throw ArgumentError("table budget needs at least one value");
  for (double v : values)
    if (!(v > 0)) throw ArgumentError("table budget values must be positive");
  Budget b;
  b.kind_ = BudgetKind::Table;
  b.values_ = std::move(values);
  b.extend_ = extend;
  b.declared_e0_ = e0;
  return b;
}

Budget Budget::from_json_text(const std::string& text) {
  json j = json::parse(text);
  std::string kind = j.at("kind").get<std::string>();
  std::optional<double> e0;
  if (j.contains("declared_e0")) e0 = j["declared_e0"].get<double>();
  if (kind == "ceil-geo")
    return ceil_geo(j.at("theta_num").get<int64_t>(), j.at("theta_den").get<int64_t>(), e0);
  if (kind == "fib-offset") return fib_offset(j.at("offset").get<int>(), e0);
  if (kind == "pow") return pow(j.at("base").get<int64_t>(), e0);
  if (kind == "table") {
    auto vals = j.at("values").get<std::vector<double>>();
    TableExtend ext = TableExtend::Error;
    if (j.contains("extend")) {
      std::string e = j["extend"].get<std::string>();
      if (e == "submult-hull") ext = TableExtend::SubmultHull;
      else if (e != "error") throw ArgumentError("unknown table extend policy: " + e);
    }
    return table(vals, ext, e0);
  }
  throw ArgumentError("unknown budget kind: " + kind);
}

Budget Budget::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open budget file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string Budget::to_json_text() const {
  json j;
  switch (kind_) {
    case BudgetKind::CeilGeo:
      j = {{"kind", "ceil-geo"}, {"theta_num", num_}, {"theta_den", den_}};
      break;
    case BudgetKind::FibOffset:
      j = {{"kind", "fib-offset"}, {"offset", offset_}};
      break;
    case BudgetKind::Pow:
      j = {{"kind", "pow"}, {"base", num_}};
      break;
    case BudgetKind::Table:
      j = {{"kind", "table"}, {"values", values_},
           {"extend", extend_ == TableExtend::Error ? "error" : "submult-hull"}};
      break;
  }
  if (declared_e0_) j["declared_e0"] = *declared_e0_;
  return j.dump();
}

std::string Budget::describe() const {
  switch (kind_) {
    case BudgetKind::CeilGeo:
      return "ceil((" + std::to_string(num_) + "/" + std::to_string(den_) + ")^n)";
    case BudgetKind::FibOffset:
      return "F_{n+" + std::to_string(offset_) + "}";
    case BudgetKind::Pow:
      return std::to_string(num_) + "^n";
    case BudgetKind::Table:
      return "table[" + std::to_string(values_.size()) + "]";
  }
  return "?";
}

CstarStatus Budget::cstar_status() const {
  CstarStatus s;
  int st = cache_->state.load(std::memory_order_relaxed);
  s.state = st == 0 ? CstarState::Unchecked : (st > 0 ? CstarState::Verified : CstarState::Violated);
  s.n = cache_->n.load(std::memory_order_relaxed);
  return s;
}

double Budget::table_value(int64_t n) const {
  if (n <= (int64_t)values_.size()) return values_[n - 1];
  if (extend_ == TableExtend::Error)
    throw EvalError("table budget evaluated beyond its range at n=" + std::to_string(n));
  // submultiplicative hull: f(n) = min over splits of f(a) f(n-a)
  std::vector<double> v(values_);
  v.resize(n, 0.0);
  for (int64_t k = (int64_t)values_.size() + 1; k <= n; ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (int64_t a = 1; a < k; ++a) best = std::min(best, v[a - 1] * v[k - a - 1]);
    v[k - 1] = best;
  }
  return v[n - 1];
}

std::vector<BigUint> Budget::exact_values(int64_t n_max) const {
  std::vector<BigUint> out;
  out.reserve(n_max);
  switch (kind_) {
    case BudgetKind::CeilGeo: {
      BigUint num(1);
      for (int64_t n = 1; n <= n_max; ++n) {
        num.mul_small((uint64_t)num_);
        BigUint x = num;
        bool frac = false;
        for (int64_t i = 0; i < n && den_ > 1; ++i)
          if (x.divmod_small((uint64_t)den_) != 0) frac = true;
        if (frac) x += BigUint(1);
        out.push_back(std::move(x));
      }
      break;
    }
    case BudgetKind::FibOffset: {
      BigUint a(1), b(1);  // F_1, F_2
      int64_t idx = 2;
      auto fib_at = [&](int64_t target) {
        while (idx < target) {
          BigUint c = a + b;
          a = std::move(b);
          b = std::move(c);
          ++idx;
        }
        return target <= 1 ? BigUint(1) : b;
      };
      for (int64_t n = 1; n <= n_max; ++n) out.push_back(fib_at(n + offset_));
      break;
    }
    case BudgetKind::Pow: {
      BigUint p(1);
      for (int64_t n = 1; n <= n_max; ++n) {
        p.mul_small((uint64_t)num_);
        out.push_back(p);
      }
      break;
    }
    case BudgetKind::Table:
      throw EvalError("exact_values: table budgets have no exact form");
  }
  return out;
}

std::optional<BigUint> Budget::eval_exact(int64_t n) const {
  if (n < 1) throw RangeError("budget evaluated at n < 1");
  switch (kind_) {
    case BudgetKind::CeilGeo: {
      // ceil(num^n / den^n) via repeated small division; floor(floor(x/a)/b)
      // equals floor(x/(ab)), and any nonzero remainder means non-divisible.
      BigUint x = BigUint::pow((uint64_t)num_, (unsigned)n);
      bool frac = false;
      for (int64_t i = 0; i < n && den_ > 1; ++i)
        if (x.divmod_small((uint64_t)den_) != 0) frac = true;
      if (frac) x += BigUint(1);
      return x;
    }
    case BudgetKind::FibOffset: {
      // F_1 = F_2 = 1
      int64_t idx = n + offset_;
      BigUint a(1), b(1);  // F_1, F_2
      if (idx <= 2) return BigUint(1);
      for (int64_t i = 3; i <= idx; ++i) {
        BigUint c = a + b;
        a = std::move(b);
        b = std::move(c);
      }
      return b;
    }
    case BudgetKind::Pow:
      return BigUint::pow((uint64_t)num_, (unsigned)n);
    case BudgetKind::Table:
      return std::nullopt;
  }
  return std::nullopt;
}

double Budget::eval(int64_t n) const {
  if (n < 1) throw RangeError("budget evaluated at n < 1");
  if (kind_ == BudgetKind::Table) return table_value(n);
  return eval_exact(n)->to_double();
}

double Budget::log_eval(int64_t n) const {
  if (n < 1) throw RangeError("budget evaluated at n < 1");
  switch (kind_) {
    case BudgetKind::Pow:
      return (double)n * std::log((double)num_);
    case BudgetKind::Table:
      return std::log(table_value(n));
    default:
      return eval_exact(n)->log_nat();
  }
}

BigUint Budget::floor_eval(int64_t n) const {
  if (kind_ != BudgetKind::Table) return *eval_exact(n);
  double v = table_value(n);
  if (v >= 9.2e18) throw EvalError("table budget too large for floor at n=" + std::to_string(n));
  return BigUint((uint64_t)std::floor(v));
}

CstarReport Budget::check_cstar(int n_max) const {
  if (n_max < 2) throw ArgumentError("check_cstar needs n_max >= 2");
  CstarReport rep;
  rep.n_max = n_max;
  // cached verified ranges extend monotonically
  if (cache_->state.load(std::memory_order_relaxed) > 0 &&
      cache_->n.load(std::memory_order_relaxed) >= n_max) {
    rep.pass = true;
    return rep;
  }

  bool exact = kind_ != BudgetKind::Table;
  std::vector<BigUint> ev;
  std::vector<double> dv;
  if (exact) {
    ev = exact_values(n_max);
  } else {
    dv.reserve(n_max);
    for (int n = 1; n <= n_max; ++n) dv.push_back(table_value(n));
  }

  auto fail = [&](int n, const char* kind, std::string detail) {
    rep.pass = false;
    rep.violation_n = n;
    rep.violation_kind = kind;
    rep.detail = std::move(detail);
    cache_->state.store(-1, std::memory_order_relaxed);
    cache_->n.store(n, std::memory_order_relaxed);
  };

  // (i) f(n+1) > f(n) and f(n) >= n+1
  for (int n = 1; n <= n_max; ++n) {
    bool floor_ok = exact ? (ev[n - 1] >= BigUint((uint64_t)n + 1))
                          : (dv[n - 1] >= (double)(n + 1));
    if (!floor_ok) {
      fail(n, "floor", "f(" + std::to_string(n) + ") < n+1");
      return rep;
    }
    if (n < n_max) {
      bool inc = exact ? (ev[n] > ev[n - 1]) : (dv[n] > dv[n - 1]);
      if (!inc) {
        fail(n, "strict-increase", "f(" + std::to_string(n + 1) + ") not > f(" + std::to_string(n) + ")");
        return rep;
      }
    }
  }
  // (ii) f(n+n') <= f(n) f(n')
  for (int n = 1; n <= n_max; ++n)
    for (int m = n; n + m <= n_max; ++m) {
      bool ok = exact ? (ev[n + m - 1] <= ev[n - 1] * ev[m - 1])
                      : (dv[n + m - 1] <= dv[n - 1] * dv[m - 1] * (1 + 1e-12));
      if (!ok) {
        fail(n, "submultiplicative",
             "f(" + std::to_string(n + m) + ") > f(" + std::to_string(n) + ")f(" + std::to_string(m) + ")");
        return rep;
      }
    }

  rep.pass = true;
  // extend the verified range monotonically
  if (cache_->state.load(std::memory_order_relaxed) >= 0) {
    cache_->state.store(1, std::memory_order_relaxed);
    int64_t prev = cache_->n.load(std::memory_order_relaxed);
    if (n_max > prev) cache_->n.store(n_max, std::memory_order_relaxed);
  }
  return rep;
}

E0Estimate Budget::estimate_e0(int n_lo, int n_hi) const {
  if (n_lo < 1 || n_hi < n_lo) throw ArgumentError("estimate_e0: empty range");
  // bulk log evaluation: one pass of incremental exact values for the
  // closed forms, plain lookups for tables
  std::vector<double> logs(n_hi - n_lo + 1);
  if (kind_ == BudgetKind::Table) {
    for (int n = n_lo; n <= n_hi; ++n) logs[n - n_lo] = std::log(table_value(n));
  } else if (kind_ == BudgetKind::Pow) {
    for (int n = n_lo; n <= n_hi; ++n) logs[n - n_lo] = (double)n * std::log((double)num_);
  } else {
    auto vals = exact_values(n_hi);
    for (int n = n_lo; n <= n_hi; ++n) logs[n - n_lo] = vals[n - 1].log_nat();
  }
  E0Estimate r;
  r.e0_estimate = std::numeric_limits<double>::infinity();
  for (int n = n_lo; n <= n_hi; ++n) {
    double v = logs[n - n_lo] / n;
    if (v < r.e0_estimate) {
      r.e0_estimate = v;
      r.argmin_n = n;
    }
  }
  auto st = cstar_status();
  r.fekete_applies = st.state == CstarState::Verified && st.n >= n_hi;
  if (declared_e0_) {
    r.floor_ok = true;
    for (int n = n_lo; n <= n_hi; ++n) {
      double lhs = logs[n - n_lo], rhs = *declared_e0_ * n;
      if (lhs < rhs - 4e-13 * std::max(1.0, std::abs(lhs))) {
        r.floor_ok = false;
        break;
      }
    }
  }
  return r;
}

std::optional<int64_t> Budget::find_growth_point(int64_t n, double delta, int j_horizon) const {
  if (!declared_e0_) throw ArgumentError("find_growth_point requires declared_e0");
  if (!(delta > 0) || j_horizon < 1 || n < 1)
    throw ArgumentError("find_growth_point: bad parameters");
  double e0 = *declared_e0_;
  int64_t hi = (int64_t)std::floor((1.0 + delta) * (double)n);
  for (int64_t np = n; np <= hi; ++np) {
    bool ok = true;
    double base = log_eval(np);
    for (int j = 1; j <= j_horizon; ++j) {
      if (log_eval(np + j) - base < e0 * j / 2.0) {
        ok = false;
        break;
      }
    }
    if (ok) return np;
  }
  return std::nullopt;
}

}  // namespace wordent
