#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hsmc/checker.hpp"
#include "hsmc/gen.hpp"
#include "hsmc/semantics.hpp"
#include "hsmc/snsat.hpp"
#include "json.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kExitSatisfied = 0;
constexpr int kExitViolated = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResourceCap = 3;

// A usage/parse/validation failure, already attributed to a stage.
struct StageError {
  std::string stage;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StageError{"reading input", "cannot open '" + path + "'"};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fnv1a(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char out[32];
  std::snprintf(out, sizeof out, "fnv1a:%016llx", static_cast<unsigned long long>(h));
  return out;
}

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const hsmc::ResourceCapError&) {
    throw;
  } catch (const hsmc::Error& e) {
    throw StageError{name, e.what()};
  }
}

struct ReportWriter {
  bool enabled = false;
  ordered_json j;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void finish() {
    if (!enabled) return;
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                          started)
                    .count();
    j["timing_ms"] = ms;
    std::cout << j.dump(2) << "\n";
  }
};

ordered_json verdict_json(const hsmc::KripkeStructure& k, bool answer,
                          const std::optional<hsmc::Track>& cex,
                          const hsmc::OracleStats& stats) {
  ordered_json v;
  v["answer"] = answer;
  if (cex) {
    ordered_json arr = ordered_json::array();
    for (hsmc::StateId s : cex->states()) arr.push_back(k.state_name(s));
    v["counterexample"] = arr;
  } else {
    v["counterexample"] = nullptr;
  }
  v["stats"]["oracle_calls"] = stats.oracle_calls;
  v["stats"]["configurations"] = stats.configurations;
  return v;
}

hsmc::OracleConfig oracle_config(const std::string& oracle, int threads, long dfs_cap) {
  hsmc::OracleConfig cfg;
  cfg.realization = oracle == "dfs" ? hsmc::OracleRealization::BoundedDfs
                                    : hsmc::OracleRealization::ConfigGraph;
  cfg.threads = threads;
  cfg.dfs_cap = dfs_cap;
  if (const char* cap = std::getenv("HSMC_MAX_CONFIGS")) {
    char* end = nullptr;
    long v = std::strtol(cap, &end, 10);
    if (end && *end == '\0' && v > 0) cfg.max_configs = v;
  }
  return cfg;
}

// Strips '#' comments; only meaningful for formula files, the grammar
// itself has no comment syntax.
std::string strip_comments(const std::string& text) {
  std::string out;
  bool skipping = false;
  for (char c : text) {
    if (c == '#') skipping = true;
    if (c == '\n') skipping = false;
    if (!skipping) out.push_back(c);
  }
  return out;
}

hsmc::Formula load_formula(const std::string& text_or_path, bool from_file,
                           ReportWriter& report) {
  std::string text = from_file ? strip_comments(read_file(text_or_path)) : text_or_path;
  if (report.enabled) {
    if (from_file) report.j["inputs"]["formula"]["path"] = text_or_path;
    report.j["inputs"]["formula"]["text"] = text;
    report.j["inputs"]["formula"]["digest"] = fnv1a(text);
  }
  return stage("parsing formula", [&] { return hsmc::parse_formula(text); });
}

hsmc::KripkeStructure load_kripke(const std::string& path, ReportWriter& report) {
  std::string text = read_file(path);
  if (report.enabled) {
    report.j["inputs"]["kripke"]["path"] = path;
    report.j["inputs"]["kripke"]["digest"] = fnv1a(text);
  }
  return stage("parsing structure", [&] { return hsmc::parse_kripke(text); });
}

int cmd_check(const std::string& kripke_path, const std::string& formula_arg,
              bool formula_from_file, const std::string& oracle, int threads, long dfs_cap,
              bool json, bool witness) {
  ReportWriter report;
  report.enabled = json;
  report.j["command"] = "check";

  hsmc::KripkeStructure k = load_kripke(kripke_path, report);
  hsmc::Formula f = load_formula(formula_arg, formula_from_file, report);
  hsmc::OracleConfig cfg = oracle_config(oracle, threads, dfs_cap);

  hsmc::Verdict v = stage("model checking", [&] { return hsmc::model_check(k, f, cfg); });

  if (report.enabled) {
    report.j["oracle"] = oracle;
    report.j["threads"] = threads;
    report.j["verdict"] = verdict_json(k, v.answer, v.counterexample, v.stats);
    report.finish();
  } else {
    std::cout << "result: " << (v.answer ? "satisfied" : "violated") << "\n";
    if (!v.answer && witness && v.counterexample)
      std::cout << "counterexample: " << v.counterexample->to_string() << "\n";
    std::cout << "oracle calls: " << v.stats.oracle_calls
              << ", configurations: " << v.stats.configurations << "\n";
  }
  return v.answer ? kExitSatisfied : kExitViolated;
}

int cmd_brute(const std::string& kripke_path, const std::string& formula_arg,
              bool formula_from_file, long max_len, const std::string& against, bool json,
              bool witness, long random_pairs, unsigned long seed) {
  ReportWriter report;
  report.enabled = json;
  report.j["command"] = "brute";

  if (random_pairs > 0) {
    // Differential suite: random structures and formulas, reference
    // verdict against the checker's.
    if (against != "checker")
      throw StageError{"usage", "--random needs --against=checker"};
    hsmc::Rng rng(seed);
    hsmc::KripkeGenOptions kopt;
    hsmc::FormulaGenOptions fopt;
    fopt.max_size = 6;
    long mismatches = 0;
    for (long i = 0; i < random_pairs; ++i) {
      fopt.use_b = i % 2 == 0;
      fopt.use_e = !fopt.use_b;
      hsmc::KripkeStructure k = hsmc::random_kripke(rng, kopt);
      hsmc::Formula f = hsmc::random_formula(rng, fopt);
      hsmc::BruteVerdict ref = hsmc::brute_model_check(k, f);
      hsmc::Verdict v = hsmc::model_check(k, f, oracle_config("configgraph", 1, 0));
      if (ref.satisfied != v.answer) ++mismatches;
    }
    if (report.enabled) {
      report.j["inputs"]["random"] = {{"pairs", random_pairs}, {"seed", seed}};
      report.j["agreement"] = mismatches == 0;
      report.finish();
    } else {
      std::cout << random_pairs << " random pairs, " << mismatches << " mismatches\n";
    }
    return mismatches == 0 ? kExitSatisfied : kExitViolated;
  }

  hsmc::KripkeStructure k = load_kripke(kripke_path, report);
  hsmc::Formula f = load_formula(formula_arg, formula_from_file, report);

  hsmc::BruteVerdict v =
      stage("reference model checking", [&] { return hsmc::brute_model_check(k, f, max_len); });

  bool agreement = true;
  std::optional<hsmc::Verdict> checker;
  if (against == "checker") {
    checker = stage("model checking", [&] {
      return hsmc::model_check(k, f, oracle_config("configgraph", 1, 0));
    });
    agreement = checker->answer == v.satisfied;
  } else if (!against.empty()) {
    throw StageError{"usage", "unknown --against target '" + against + "'"};
  }

  if (report.enabled) {
    report.j["verdict"] = verdict_json(k, v.satisfied, v.counterexample, {});
    report.j["brute"]["bound_used"] = v.bound_used;
    report.j["brute"]["complete_bound"] = v.complete_bound;
    report.j["brute"]["budget_limited"] = v.budget_limited;
    if (checker) {
      report.j["checker"] = verdict_json(k, checker->answer, checker->counterexample,
                                         checker->stats);
      report.j["agreement"] = agreement;
    }
    report.finish();
  } else {
    std::cout << "result: " << (v.satisfied ? "satisfied" : "violated") << "\n";
    if (!v.satisfied && witness && v.counterexample)
      std::cout << "counterexample: " << v.counterexample->to_string() << "\n";
    std::cout << "bound used: " << v.bound_used << " (complete at " << v.complete_bound
              << (v.budget_limited ? ", budget-limited)" : ")") << "\n";
    if (checker)
      std::cout << "checker: " << (checker->answer ? "satisfied" : "violated")
                << (agreement ? " (agreement)" : " (MISMATCH)") << "\n";
  }
  if (!against.empty()) return agreement ? kExitSatisfied : kExitViolated;
  return v.satisfied ? kExitSatisfied : kExitViolated;
}

int cmd_snsat(const std::string& instance_path, const std::string& action,
              const std::string& out_kripke, const std::string& out_formula, int psi_k,
              const std::string& oracle, int threads, bool force, bool no_items,
              bool json) {
  ReportWriter report;
  report.enabled = json;
  report.j["command"] = "snsat-" + action;

  std::string text = read_file(instance_path);
  if (report.enabled) {
    report.j["inputs"]["instance"]["path"] = instance_path;
    report.j["inputs"]["instance"]["digest"] = fnv1a(text);
  }
  hsmc::SnsatInstance inst =
      stage("parsing instance", [&] { return hsmc::parse_snsat(text); });

  if (action == "eval") {
    std::vector<bool> v = hsmc::eval_v(inst);
    if (report.enabled) {
      for (int i = 1; i <= inst.n; ++i)
        report.j["valuation"]["x" + std::to_string(i)] = static_cast<bool>(v[i - 1]);
      report.finish();
    } else {
      for (int i = 1; i <= inst.n; ++i)
        std::cout << "x" << i << "=" << (v[i - 1] ? "true" : "false") << "\n";
    }
    return kExitSatisfied;
  }

  if (action == "reduce") {
    int k_index = psi_k < 0 ? inst.n : psi_k;
    hsmc::KripkeStructure k = stage("building structure", [&] { return hsmc::build_kripke(inst); });
    hsmc::Formula psi = stage("building formula", [&] { return hsmc::build_psi(inst, k_index); });
    std::string kripke_path = out_kripke.empty() ? instance_path + ".kripke" : out_kripke;
    std::string formula_path = out_formula.empty() ? instance_path + ".formula" : out_formula;
    std::ofstream(kripke_path) << hsmc::to_text(k);
    std::ofstream(formula_path) << "[B]false -> " + psi.to_string() << "\n";
    if (report.enabled) {
      report.j["outputs"]["kripke"] = kripke_path;
      report.j["outputs"]["formula"] = formula_path;
      report.j["outputs"]["states"] = k.num_states();
      report.finish();
    } else {
      std::cout << "wrote " << kripke_path << " (" << k.num_states() << " states) and "
                << formula_path << "\n";
    }
    return kExitSatisfied;
  }

  if (action != "roundtrip")
    throw StageError{"usage", "unknown action '" + action + "' (eval|reduce|roundtrip)"};

  hsmc::OracleConfig cfg = oracle_config(oracle, threads, 0);
  hsmc::ReductionReport r = stage("reduction check", [&] {
    return hsmc::reduction_check(inst, cfg, !no_items, force);
  });

  if (report.enabled) {
    for (int i = 1; i <= inst.n; ++i)
      report.j["valuation"]["x" + std::to_string(i)] =
          static_cast<bool>(r.valuation[i - 1]);
    report.j["verdict"] = verdict_json(hsmc::build_kripke(inst), r.verdict.answer,
                                       r.verdict.counterexample, r.verdict.stats);
    report.j["agreement"] = r.all_ok();
    report.j["items_checked"] = static_cast<long>(r.items.size());
    report.finish();
  } else {
    std::cout << "valuation: x" << inst.n << "="
              << (r.valuation[inst.n - 1] ? "true" : "false") << "\n";
    std::cout << "model check: " << (r.verdict.answer ? "satisfied" : "violated") << "\n";
    std::cout << "items checked: " << r.items.size() << "\n";
    std::cout << "agreement: " << (r.all_ok() ? "yes" : "NO") << "\n";
  }
  return r.all_ok() ? kExitSatisfied : kExitViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hsmc: interval-logic model checking over finite Kripke structures"};
  app.require_subcommand(1);

  std::string kripke_path, formula_arg, oracle = "configgraph", against;
  bool formula_from_file = false, json = false, witness = false;
  int threads = 1;
  long dfs_cap = 0, max_len = 0, random_pairs = 0;
  unsigned long seed = 42;

  CLI::App* check = app.add_subcommand("check", "decide K |= formula with the track oracle");
  check->add_option("kripke", kripke_path, "structure file")->required();
  check->add_option("formula", formula_arg, "formula text (or file with --formula-file)")
      ->required();
  check->add_flag("--formula-file", formula_from_file, "treat the formula argument as a path");
  check->add_option("--oracle", oracle, "oracle realization")
      ->check(CLI::IsMember({"configgraph", "dfs"}));
  check->add_option("--threads", threads, "parallel per-state oracle calls")
      ->check(CLI::PositiveNumber);
  check->add_option("--dfs-cap", dfs_cap, "track-length cap for the dfs oracle");
  check->add_flag("--json", json, "machine-readable run report");
  check->add_flag("--witness", witness, "print a counterexample track on violation");

  CLI::App* brute = app.add_subcommand("brute", "reference check by track enumeration");
  brute->add_option("kripke", kripke_path, "structure file");
  brute->add_option("formula", formula_arg, "formula text (or file with --formula-file)");
  brute->add_flag("--formula-file", formula_from_file, "treat the formula argument as a path");
  brute->add_option("--max-len", max_len, "override the enumeration length cap");
  brute->add_option("--against", against, "also run this engine and compare verdicts")
      ->check(CLI::IsMember({"checker"}));
  brute->add_option("--random", random_pairs, "differential suite of N random pairs");
  brute->add_option("--seed", seed, "seed for --random");
  brute->add_flag("--json", json, "machine-readable run report");
  brute->add_flag("--witness", witness, "print a counterexample track on violation");

  std::string instance_path, action, out_kripke, out_formula;
  int psi_k = -1;
  bool force = false, no_items = false;
  CLI::App* snsat = app.add_subcommand("snsat", "chained-SAT instances and their reduction");
  snsat->add_option("instance", instance_path, "instance file")->required();
  snsat->add_option("action", action, "eval | reduce | roundtrip")->required();
  snsat->add_option("--out-kripke", out_kripke, "structure output path (reduce)");
  snsat->add_option("--out-formula", out_formula, "formula output path (reduce)");
  snsat->add_option("--k", psi_k, "formula family index to emit (reduce; default n)");
  snsat->add_option("--oracle", oracle, "oracle realization")
      ->check(CLI::IsMember({"configgraph", "dfs"}));
  snsat->add_option("--threads", threads, "parallel per-state oracle calls")
      ->check(CLI::PositiveNumber);
  snsat->add_flag("--force", force, "allow instances with n >= 3");
  snsat->add_flag("--no-items", no_items, "skip the per-variable membership checks");
  snsat->add_flag("--json", json, "machine-readable run report");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed())
      return cmd_check(kripke_path, formula_arg, formula_from_file, oracle, threads,
                       dfs_cap, json, witness);
    if (brute->parsed()) {
      if (random_pairs == 0 && (kripke_path.empty() || formula_arg.empty()))
        throw StageError{"usage", "brute needs a structure and a formula (or --random N)"};
      return cmd_brute(kripke_path, formula_arg, formula_from_file, max_len, against, json,
                       witness, random_pairs, seed);
    }
    return cmd_snsat(instance_path, action, out_kripke, out_formula, psi_k, oracle,
                     threads, force, no_items, json);
  } catch (const StageError& e) {
    std::cerr << "hsmc: " << e.stage << ": " << e.message << "\n";
    return kExitUsage;
  } catch (const hsmc::ResourceCapError& e) {
    std::cerr << "hsmc: resource cap: " << e.what() << "\n";
    return kExitResourceCap;
  } catch (const hsmc::Error& e) {
    std::cerr << "hsmc: " << e.what() << "\n";
    return kExitUsage;
  }
}
