// wordent: certified two-sided brackets for the word entropy of a
// complexity budget, with the parameter schedule, Champernowne-type
// constructions and the shrink pipeline at desk scale.
//
// Structured results go to stdout as line-delimited JSON records; a short
// human summary goes to stderr. Exit codes: 0 success, 2 argument error,
// 3 violation result, 4 resource guard.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "wordent/admissible.hpp"
#include "wordent/budget.hpp"
#include "wordent/concat.hpp"
#include "wordent/oracles.hpp"
#include "wordent/pipeline.hpp"
#include "wordent/solver.hpp"
#include "wordent/words.hpp"

using nlohmann::json;
using namespace wordent;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Emitter {
  std::string command;
  std::optional<json> budget;
  json parameters = json::object();
  std::optional<uint64_t> seed;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  bool bits = false;

  double display(double nats) const { return bits ? nats / std::log(2.0) : nats; }

  void emit(const json& results) const {
    json rec;
    rec["command"] = command;
    if (budget) rec["budget"] = *budget;
    rec["parameters"] = parameters;
    rec["results"] = results;
    rec["wall_time"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec["version"] = kVersion;
    if (seed) rec["seed"] = *seed;
    rec["unit"] = "nats";
    std::cout << rec.dump() << "\n";
  }
};

json cert_to_json(const LowerCertificate& c) {
  json j;
  j["value"] = c.value;
  j["H"] = c.checked_horizon;
  j["H_star"] = c.tail_start;
  j["e0_used"] = c.e0_used;
  j["status"] = c.status == CertStatus::Sound ? "sound" : "conditional";
  j["exact_horizon"] = c.exact_horizon;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

json bracket_to_json(const EntropyBracket& br) {
  json j;
  if (br.lower) {
    j["lower"] = {{"value", br.lower->value},
                  {"source", br.lower->source},
                  {"status", br.lower->sound ? "sound" : "conditional"}};
    if (br.lower_certificate) {
      j["lower"]["m"] = br.lower_block_len;
      j["lower"]["z_size"] = br.lower_z_size;
      j["lower"]["H"] = br.lower_certificate->checked_horizon;
      j["lower"]["H_star"] = br.lower_certificate->tail_start;
    }
  }
  if (br.upper) {
    j["upper"] = {{"value", br.upper->value},
                  {"source", br.upper->source},
                  {"n", br.upper->n},
                  {"status", br.upper->sound ? "sound" : "diagnostic"}};
  }
  j["h"] = br.h;
  j["r"] = br.r;
  j["plateau_found"] = br.plateau_found;
  j["zero_shortcut"] = br.zero_shortcut;
  j["numeric"] = br.numeric;
  j["schedule"] = {{"delta", br.schedule.delta},
                   {"K", br.schedule.K},
                   {"epsilon_tilde", br.schedule.epsilon_tilde},
                   {"n0", br.schedule.n0}};
  if (!br.schedule.tower.empty()) {
    json tw = json::array();
    size_t K = br.schedule.tower.size() - 1;
    for (size_t t = 0; t < br.schedule.tower.size() && t <= 3; ++t)
      tw.push_back(br.schedule.tower[t].render());
    if (K > 3) {
      tw.push_back("...");
      tw.push_back(br.schedule.tower[K].render());
    }
    j["schedule"]["tower_preview"] = tw;
  }
  if (!br.notes.empty()) j["notes"] = br.notes;
  return j;
}

OptimizeMode parse_mode(const std::string& s) {
  if (s == "exact") return OptimizeMode::Exact;
  if (s == "bnb") return OptimizeMode::BranchAndBound;
  if (s == "greedy") return OptimizeMode::Greedy;
  if (s == "anneal") return OptimizeMode::Anneal;
  throw ArgumentError("unknown mode: " + s);
}

std::vector<Interval> parse_intervals(const std::string& s) {
  std::vector<Interval> out;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t end = s.find(';', pos);
    if (end == std::string::npos) end = s.size();
    std::string item = s.substr(pos, end - pos);
    size_t comma = item.find(',');
    if (comma == std::string::npos) throw ArgumentError("intervals: expected 'lo,hi;lo,hi;...'");
    out.push_back({std::stoll(item.substr(0, comma)), std::stoll(item.substr(comma + 1))});
    pos = end + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"word-entropy brackets for complexity budgets"};
  app.require_subcommand(1);

  std::string budget_path, z_path, stream_path, scale = "desk", mode_str = "bnb";
  std::string word_digits, intervals_str;
  double epsilon = 0.5, e0_flag = 0.0;
  int max_n = 0, min_n = 1, ext_depth = 0, block_len = 0, horizon = 0, n_arg = 0;
  int threads = 1, q_flag = 2;
  uint64_t seed = 1, length = 0;
  bool csv = false, bits = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--csv", csv, "flat CSV for per-n sequences");
    sub->add_flag("--bits", bits, "display logs in bits (records stay in nats)");
    sub->add_option("--threads", threads, "worker threads (results are unaffected)");
  };

  auto* c_cstar = app.add_subcommand("check-cstar", "verify the (C*) conditions on a range");
  c_cstar->add_option("--budget", budget_path)->required();
  c_cstar->add_option("--max-n", max_n)->required();
  add_common(c_cstar);

  auto* c_e0 = app.add_subcommand("e0", "estimate the exponential growth rate");
  c_e0->add_option("--budget", budget_path)->required();
  c_e0->add_option("--max-n", max_n)->required();
  c_e0->add_option("--min-n", min_n);
  add_common(c_e0);

  auto* c_upper = app.add_subcommand("upper", "admissible-count upper bounds u_n");
  c_upper->add_option("--budget", budget_path)->required();
  c_upper->add_option("--max-n", max_n)->required();
  c_upper->add_option("--ext-depth", ext_depth);
  c_upper->add_option("--q", q_flag, "alphabet size");
  add_common(c_upper);

  bool show_counts = false;
  auto* c_lower = app.add_subcommand("lower", "certify a lower bound from a block set");
  c_lower->add_option("--budget", budget_path)->required();
  c_lower->add_option("--z", z_path, "block file (one block per line)");
  c_lower->add_option("--block-len", block_len, "search block length when no --z");
  c_lower->add_option("--e0", e0_flag, "e0 for the tail (default: declared_e0)");
  c_lower->add_option("--horizon", horizon, "extra verification horizon");
  c_lower->add_flag("--counts", show_counts, "include the exactly verified per-n counts");
  c_lower->add_option("--q", q_flag);
  add_common(c_lower);

  auto* c_estimate = app.add_subcommand("estimate", "assemble the entropy bracket");
  c_estimate->add_option("--budget", budget_path)->required();
  c_estimate->add_option("--epsilon", epsilon)->required();
  c_estimate->add_option("--scale", scale, "desk|paper");
  c_estimate->add_option("--max-n", max_n, "desk N for the optimizer");
  c_estimate->add_option("--block-len", block_len, "single searched block length");
  c_estimate->add_option("--horizon", horizon);
  c_estimate->add_option("--ext-depth", ext_depth);
  c_estimate->add_option("--mode", mode_str, "exact|bnb|greedy|anneal");
  c_estimate->add_option("--seed", seed);
  c_estimate->add_option("--q", q_flag);
  add_common(c_estimate);

  auto* c_schedule = app.add_subcommand("schedule", "the parameter schedule, symbolically");
  c_schedule->add_option("--epsilon", epsilon)->required();
  c_schedule->add_option("--e0", e0_flag)->required();
  add_common(c_schedule);

  auto* c_champ = app.add_subcommand("champernowne", "Champernowne-type word of a block set");
  c_champ->add_option("--z", z_path)->required();
  c_champ->add_option("--length", length)->required();
  add_common(c_champ);

  auto* c_pipeline = app.add_subcommand("pipeline", "run the shrink pipeline");
  c_pipeline->add_option("--budget", budget_path)->required();
  c_pipeline->add_option("--epsilon", epsilon)->required();
  c_pipeline->add_option("--y", z_path, "input word set file (default: optimizer output)");
  c_pipeline->add_option("--max-n", max_n, "desk N for the optimizer input");
  c_pipeline->add_option("--n-hat", n_arg, "twin factor length");
  c_pipeline->add_option("--mode", mode_str);
  c_pipeline->add_option("--seed", seed);
  c_pipeline->add_option("--q", q_flag);
  add_common(c_pipeline);

  auto* c_verify = app.add_subcommand("verify", "check a stream against the budget");
  c_verify->add_option("--budget", budget_path)->required();
  c_verify->add_option("--stream", stream_path, "word file; first word is the stream");
  c_verify->add_option("--z", z_path, "generate the stream as champernowne of this block set");
  c_verify->add_option("--length", length, "generated stream length");
  c_verify->add_option("--max-n", max_n)->required();
  add_common(c_verify);

  auto* c_oracle = app.add_subcommand("oracle", "brute-force references");
  auto* o_y = c_oracle->add_subcommand("y", "exhaustive max-min subset search");
  o_y->add_option("--budget", budget_path)->required();
  o_y->add_option("--max-n", max_n)->required();
  o_y->add_option("--q", q_flag);
  auto* o_iv = c_oracle->add_subcommand("intervals", "optimal disjoint subfamily");
  o_iv->add_option("--intervals", intervals_str, "'lo,hi;lo,hi;...'")->required();
  auto* o_fc = c_oracle->add_subcommand("factor-count", "pairwise window counting");
  o_fc->add_option("--word", word_digits)->required();
  o_fc->add_option("--n", n_arg)->required();
  o_fc->add_option("--q", q_flag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  Emitter em;
  em.bits = bits;
  int exit_code = 0;
  try {
    std::optional<Budget> budget;
    if (!budget_path.empty()) {
      budget = Budget::from_json_file(budget_path);
      em.budget = json::parse(budget->to_json_text());
    }

    if (app.got_subcommand(c_cstar)) {
      em.command = "check-cstar";
      em.parameters = {{"max_n", max_n}};
      auto rep = budget->check_cstar(max_n);
      json res = {{"pass", rep.pass}, {"n_max", rep.n_max}};
      if (!rep.pass) {
        res["violation_n"] = rep.violation_n;
        res["violation_kind"] = rep.violation_kind;
        res["detail"] = rep.detail;
        exit_code = 3;
      }
      em.emit(res);
      std::cerr << (rep.pass ? "(C*) verified on 1.." + std::to_string(max_n)
                             : "(C*) violated at n=" + std::to_string(rep.violation_n) + " (" +
                                   rep.violation_kind + ")")
                << "\n";
    } else if (app.got_subcommand(c_e0)) {
      em.command = "e0";
      em.parameters = {{"min_n", min_n}, {"max_n", max_n}};
      budget->check_cstar(max_n);
      auto est = budget->estimate_e0(min_n, max_n);
      em.emit({{"e0_estimate", est.e0_estimate},
               {"argmin_n", est.argmin_n},
               {"floor_ok", est.floor_ok},
               {"fekete_applies", est.fekete_applies}});
      std::cerr << "e0 estimate " << em.display(est.e0_estimate) << (bits ? " bits" : " nats")
                << " at n=" << est.argmin_n << "\n";
    } else if (app.got_subcommand(c_upper)) {
      em.command = "upper";
      em.parameters = {{"max_n", max_n}, {"ext_depth", ext_depth}, {"q", q_flag}};
      AdmissibleOptions opts;
      opts.ext_depth = ext_depth;
      opts.threads = threads;
      auto res = upper_bound_sequence_partial(*budget, Alphabet(q_flag), max_n, opts);
      double best = std::numeric_limits<double>::infinity();
      int best_n = 0;
      for (auto& u : res.counts) {
        if (csv) {
          std::printf("%d,%llu,%.12f,%d\n", u.n, (unsigned long long)u.count, u.u_value,
                      u.ext_depth);
        } else {
          json rec = {{"n", u.n},
                      {"count", u.count},
                      {"u_value", u.u_value},
                      {"ext_depth", u.ext_depth}};
          if (res.partial) rec["partial"] = true;
          em.emit(rec);
        }
        if (u.count > 0 && u.u_value < best) {
          best = u.u_value;
          best_n = u.n;
        }
      }
      std::cerr << "best upper bound " << em.display(best) << (bits ? " bits" : " nats")
                << " at n=" << best_n << "\n";
      if (res.partial) {
        std::cerr << "node ceiling stopped the scan at n=" << res.counts.size()
                  << " of " << max_n << "\n";
        exit_code = 4;
      }
    } else if (app.got_subcommand(c_lower)) {
      em.command = "lower";
      double e0 = c_lower->count("--e0") ? e0_flag
                                         : budget->declared_e0().value_or(0.0);
      if (!(e0 > 0)) throw ArgumentError("lower: provide --e0 or a declared_e0 in the budget");
      em.parameters = {{"e0", e0}, {"horizon", horizon}};
      std::optional<ConcatSystem> sys;
      if (!z_path.empty()) {
        sys = ConcatSystem::from_blocks(read_word_file(z_path, Alphabet(q_flag)));
      } else {
        throw ArgumentError("lower: --z is required (searches run under `estimate`)");
      }
      auto out = certify_lower_bound(*sys, *budget, e0, horizon);
      if (out.kind == CertifyOutcome::Kind::Accepted) {
        json res = cert_to_json(*out.certificate);
        res["m"] = sys->block_len;
        res["z_size"] = sys->blocks.size();
        if (show_counts) {
          json counts = json::array();
          for (int n = 1; n <= out.certificate->exact_horizon; ++n)
            counts.push_back({{"n", n},
                              {"count", out.certificate->exact_counts[n - 1].to_string()}});
          res["verified_counts"] = counts;
        }
        em.emit(res);
        std::cerr << "certificate " << (out.certificate->status == CertStatus::Sound
                                            ? "sound"
                                            : "conditional")
                  << ", value " << em.display(out.certificate->value) << "\n";
      } else if (out.kind == CertifyOutcome::Kind::Violation) {
        em.emit({{"violation_n", out.violation_n},
                 {"count", out.violation_count},
                 {"budget", out.budget_value}});
        std::cerr << "violation at n=" << out.violation_n << "\n";
        exit_code = 3;
      } else {
        em.emit({{"rejected", out.reject_reason}});
        std::cerr << "rejected: " << out.reject_reason << "\n";
        exit_code = 3;
      }
    } else if (app.got_subcommand(c_estimate)) {
      em.command = "estimate";
      em.seed = seed;
      EstimateConfig cfg;
      cfg.paper_scale = scale == "paper";
      if (scale != "desk" && scale != "paper") throw ArgumentError("--scale must be desk|paper");
      if (max_n > 0) cfg.desk.n_desk = max_n;
      if (block_len > 0) cfg.desk.block_lens = {block_len};
      if (horizon > 0) cfg.desk.horizon = horizon;
      cfg.desk.ext_depth = ext_depth;
      cfg.desk.mode = parse_mode(mode_str);
      cfg.desk.seed = seed;
      cfg.desk.threads = threads;
      em.parameters = {{"epsilon", epsilon}, {"scale", scale},   {"n_desk", cfg.desk.n_desk},
                       {"horizon", cfg.desk.horizon}, {"mode", mode_str}, {"q", q_flag}};
      auto br = estimate_word_entropy(*budget, Alphabet(q_flag), epsilon, cfg);
      em.emit(bracket_to_json(br));
      if (br.numeric && br.lower && br.upper)
        std::cerr << "bracket [" << em.display(br.lower->value) << ", "
                  << em.display(br.upper->value) << "] h=" << em.display(br.h) << "\n";
      else if (!br.numeric)
        std::cerr << "paper scale: schedule only, run declared infeasible\n";
      else
        std::cerr << "partial bracket\n";
    } else if (app.got_subcommand(c_schedule)) {
      em.command = "schedule";
      em.parameters = {{"epsilon", epsilon}, {"e0", e0_flag}};
      auto s = build_schedule(e0_flag, epsilon);
      json tw = json::array();
      for (size_t t = 0; t < s.tower.size() && t <= 3; ++t) tw.push_back(s.tower[t].render());
      if (s.tower.size() > 5) {
        tw.push_back("...");
        tw.push_back(s.tower.back().render());
      }
      em.emit({{"delta", s.delta},
               {"K", s.K},
               {"epsilon_tilde", s.epsilon_tilde},
               {"n0", s.n0},
               {"log_n1", s.tower.size() > 1 ? s.tower[1].hi : 0.0},
               {"tower_preview", tw}});
      std::cerr << "delta=" << s.delta << " K=" << s.K << " n0=" << s.n0 << "\n";
    } else if (app.got_subcommand(c_champ)) {
      em.command = "champernowne";
      em.parameters = {{"length", length}};
      auto z = read_word_file(z_path);
      Word w = champernowne(z, length);
      em.emit({{"word", w.digits()}, {"length", w.size()}, {"z_size", z.size()}});
      std::cerr << w.digits() << "\n";
    } else if (app.got_subcommand(c_pipeline)) {
      em.command = "pipeline";
      em.seed = seed;
      int N = max_n > 0 ? max_n : 12;
      int n_hat = n_arg > 0 ? n_arg : 2;
      double e0 = budget->declared_e0().value_or(budget->estimate_e0(1, 40).e0_estimate);
      em.parameters = {{"epsilon", epsilon}, {"n_hat", n_hat}, {"N", N}, {"q", q_flag}};
      std::vector<Word> y;
      double h;
      if (!z_path.empty()) {
        y = read_word_file(z_path, Alphabet(q_flag));
        h = e0;  // no optimizer context for file input
      } else {
        OptimizeOptions oo;
        oo.mode = parse_mode(mode_str);
        oo.seed = seed;
        auto cs = optimize_y(*budget, Alphabet(q_flag), N, oo);
        y = cs.words;
        h = cs.objective;
      }
      PipelineParams pp;
      pp.h = h;
      pp.epsilon = epsilon;
      pp.n_hat = n_hat;
      pp.e0 = e0;
      auto st = shrink_pipeline(y, *budget, pp);
      json stages = json::array();
      for (auto& lg : st.log)
        stages.push_back({{"stage", lg.stage}, {"size", lg.size}, {"detail", lg.detail}});
      json res = {{"stages", stages},
                  {"n_hat", st.n_hat},
                  {"N_hat", st.big_n_hat},
                  {"m", st.m},
                  {"epsilon_tilde", st.epsilon_tilde},
                  {"z5_size", st.z5.size()}};
      if (st.failed_stage) {
        res["failed_stage"] = *st.failed_stage;
        exit_code = 3;
      }
      em.emit(res);
      std::cerr << (st.failed_stage ? "pipeline failed at stage " + *st.failed_stage
                                    : "pipeline ok, |Z5|=" + std::to_string(st.z5.size()))
                << "\n";
    } else if (app.got_subcommand(c_verify)) {
      em.command = "verify";
      em.parameters = {{"max_n", max_n}};
      Word stream;
      if (!stream_path.empty()) {
        auto ws = read_word_file(stream_path);
        if (ws.empty()) throw ArgumentError("verify: stream file has no words");
        stream = ws[0];
      } else if (!z_path.empty()) {
        if (length == 0) throw ArgumentError("verify: --length required with --z");
        stream = champernowne(read_word_file(z_path), length);
      } else {
        throw ArgumentError("verify: provide --stream or --z");
      }
      auto r = verify_budget(stream, *budget, max_n);
      json res = {{"pass", r.pass}, {"stream_length", stream.size()}};
      if (!r.pass) {
        res["violation_n"] = r.violation_n;
        res["count"] = r.count;
        res["budget"] = r.budget_value;
        exit_code = 3;
      }
      em.emit(res);
      std::cerr << (r.pass ? "pass" : "violation at n=" + std::to_string(r.violation_n)) << "\n";
    } else if (app.got_subcommand(c_oracle)) {
      if (c_oracle->got_subcommand(o_y)) {
        em.command = "oracle y";
        em.parameters = {{"max_n", max_n}, {"q", q_flag}};
        auto r = exhaustive_y_oracle(*budget, Alphabet(q_flag), max_n);
        json words = json::array();
        for (auto& w : r.witness_words) words.push_back(w.digits());
        em.emit({{"value", r.value},
                 {"witness", words},
                 {"enumeration_size", r.enumeration_size}});
        std::cerr << "optimum " << em.display(r.value) << " with " << r.witness_words.size()
                  << " words\n";
      } else if (c_oracle->got_subcommand(o_iv)) {
        em.command = "oracle intervals";
        auto ivs = parse_intervals(intervals_str);
        auto r = exhaustive_interval_oracle(ivs);
        json sel = json::array();
        for (auto& iv : r.witness_intervals) sel.push_back({iv.lo, iv.hi});
        em.emit({{"value", r.value},
                 {"witness", sel},
                 {"enumeration_size", r.enumeration_size}});
        std::cerr << "optimum total length " << (int64_t)r.value << "\n";
      } else if (c_oracle->got_subcommand(o_fc)) {
        em.command = "oracle factor-count";
        em.parameters = {{"n", n_arg}};
        Word w = Word::from_digits(Alphabet(q_flag), word_digits);
        em.emit({{"count", naive_factor_count(w, n_arg)}});
      } else {
        throw ArgumentError("oracle: choose y | intervals | factor-count");
      }
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource guard: " << e.what() << "\n";
    return 4;
  } catch (const ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const RangeError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const ModeError& e) {
    std::cerr << "mode error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
