#include "hsmc/snsat.hpp"

#include <cctype>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace hsmc {

namespace {

std::string x_name(int i) { return "x" + std::to_string(i); }
std::string r_name(int i) { return "r" + std::to_string(i); }
std::string pbar_name(int i) { return "p_xbar" + std::to_string(i); }

std::set<std::string> reserved_letters(int n) {
  std::set<std::string> out{"s", "t"};
  for (int i = 1; i <= n; ++i) {
    out.insert(x_name(i));
    out.insert(r_name(i));
    out.insert(pbar_name(i));
  }
  return out;
}

void collect_letters(const Formula& f, std::set<std::string>& out) {
  if (f.kind() == Formula::Kind::Letter) out.insert(f.name());
  for (int i = 0; i < f.arity(); ++i) collect_letters(f.child(i), out);
}

bool has_modality(const Formula& f) {
  if (f.kind() == Formula::Kind::Diamond || f.kind() == Formula::Kind::Box) return true;
  for (int i = 0; i < f.arity(); ++i)
    if (has_modality(f.child(i))) return true;
  return false;
}

bool eval_prop(const Formula& f, const std::map<std::string, bool>& env) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Letter: return env.at(f.name());
    case K::True: return true;
    case K::False: return false;
    case K::Not: return !eval_prop(f.child(), env);
    case K::And: return eval_prop(f.child(0), env) && eval_prop(f.child(1), env);
    case K::Or: return eval_prop(f.child(0), env) || eval_prop(f.child(1), env);
    case K::Implies: return !eval_prop(f.child(0), env) || eval_prop(f.child(1), env);
    case K::Iff: return eval_prop(f.child(0), env) == eval_prop(f.child(1), env);
    default: throw ValidationError("modal-clause", "chained-SAT clauses must be propositional");
  }
}

}  // namespace

void validate(const SnsatInstance& inst) {
  if (inst.n < 1)
    throw ValidationError("bad-instance", "an instance needs at least one variable");
  if (static_cast<int>(inst.z_blocks.size()) != inst.n ||
      static_cast<int>(inst.formulas.size()) != inst.n)
    throw ValidationError("bad-instance", "blocks/formulas must match the variable count");

  std::set<std::string> reserved = reserved_letters(inst.n);
  std::set<std::string> seen;
  for (int i = 1; i <= inst.n; ++i) {
    for (const std::string& z : inst.z_blocks[i - 1]) {
      if (reserved.contains(z))
        throw ValidationError("name-clash",
                              "local variable '" + z + "' collides with a reserved letter");
      if (!seen.insert(z).second)
        throw ValidationError("name-clash", "local variable '" + z + "' declared twice");
    }
  }

  for (int i = 1; i <= inst.n; ++i) {
    const Formula& fi = inst.formulas[i - 1];
    if (has_modality(fi))
      throw ValidationError("modal-clause",
                            "F" + std::to_string(i) + " must be propositional");
    std::set<std::string> allowed(inst.z_blocks[i - 1].begin(), inst.z_blocks[i - 1].end());
    for (int j = 1; j < i; ++j) allowed.insert(x_name(j));
    std::set<std::string> used;
    collect_letters(fi, used);
    for (const std::string& name : used)
      if (!allowed.contains(name))
        throw ValidationError("scope", "F" + std::to_string(i) + " mentions '" + name +
                                           "', which is not x1..x" + std::to_string(i - 1) +
                                           " or a local of block " + std::to_string(i));
  }
}

SnsatInstance parse_snsat(std::string_view text) {
  SnsatInstance inst;
  std::vector<bool> have_f, have_local;

  std::size_t pos = 0;
  bool saw_header = false;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line(text.substr(pos, eol - pos));
    std::size_t line_offset = pos;
    pos = eol == text.size() ? eol + 1 : eol + 1;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);

    std::istringstream in(line);
    std::string head;
    if (!(in >> head)) {
      if (eol == text.size()) break;
      continue;
    }

    if (!saw_header) {
      if (head != "snsat") throw ParseError(line_offset, "expected 'snsat <n>' header");
      if (!(in >> inst.n) || inst.n < 1)
        throw ParseError(line_offset, "bad variable count in header");
      inst.z_blocks.assign(inst.n, {});
      inst.formulas.assign(inst.n, Formula::falsum());
      have_f.assign(inst.n, false);
      have_local.assign(inst.n, false);
      saw_header = true;
    } else if (head == "local") {
      std::string idx;
      if (!(in >> idx) || idx.empty() || idx.back() != ':')
        throw ParseError(line_offset, "expected 'local <i>: ...'");
      int i = std::atoi(idx.c_str());
      if (i < 1 || i > inst.n) throw ParseError(line_offset, "local block index out of range");
      if (have_local[i - 1]) throw ParseError(line_offset, "duplicate local block");
      have_local[i - 1] = true;
      std::string z;
      while (in >> z) inst.z_blocks[i - 1].push_back(z);
    } else if (head.size() >= 3 && head[0] == 'F' && head.back() == ':') {
      int i = std::atoi(head.substr(1, head.size() - 2).c_str());
      if (i < 1 || i > inst.n) throw ParseError(line_offset, "clause index out of range");
      if (have_f[i - 1]) throw ParseError(line_offset, "duplicate clause F" + std::to_string(i));
      have_f[i - 1] = true;
      std::string rest;
      std::getline(in, rest);
      try {
        inst.formulas[i - 1] = parse_formula(rest);
      } catch (const ParseError& e) {
        throw ParseError(line_offset + e.position(), std::string("in F") + std::to_string(i) +
                                                         ": " + e.what());
      }
    } else {
      throw ParseError(line_offset, "unrecognized directive '" + head + "'");
    }
    if (eol == text.size()) break;
  }

  if (!saw_header) throw ParseError(0, "empty input, expected 'snsat <n>' header");
  for (int i = 1; i <= inst.n; ++i)
    if (!have_f[i - 1])
      throw ParseError(text.size(), "missing clause F" + std::to_string(i));

  validate(inst);
  return inst;
}

std::string to_text(const SnsatInstance& inst) {
  std::ostringstream out;
  out << "snsat " << inst.n << "\n";
  for (int i = 1; i <= inst.n; ++i) {
    if (inst.z_blocks[i - 1].empty()) continue;
    out << "local " << i << ":";
    for (const std::string& z : inst.z_blocks[i - 1]) out << ' ' << z;
    out << "\n";
  }
  for (int i = 1; i <= inst.n; ++i)
    out << "F" << i << ": " << inst.formulas[i - 1].to_string() << "\n";
  return out.str();
}

std::vector<bool> eval_v(const SnsatInstance& inst) {
  validate(inst);
  std::vector<bool> v;
  std::map<std::string, bool> env;
  for (int i = 1; i <= inst.n; ++i) {
    const auto& locals = inst.z_blocks[i - 1];
    bool satisfiable = false;
    for (unsigned long bits = 0; bits < (1ul << locals.size()); ++bits) {
      for (std::size_t u = 0; u < locals.size(); ++u)
        env[locals[u]] = (bits >> u) & 1;
      if (eval_prop(inst.formulas[i - 1], env)) {
        satisfiable = true;
        break;
      }
    }
    for (const std::string& z : locals) env.erase(z);
    v.push_back(satisfiable);
    env[x_name(i)] = satisfiable;
  }
  return v;
}

KripkeStructure build_kripke(const SnsatInstance& inst) {
  validate(inst);
  KripkeStructure::Spec spec;

  std::vector<std::string> all_x, all_z, all_r;
  for (int i = 1; i <= inst.n; ++i) all_x.push_back(x_name(i));
  for (int i = 1; i <= inst.n; ++i)
    for (const std::string& z : inst.z_blocks[i - 1]) all_z.push_back(z);
  for (int i = 1; i <= inst.n; ++i) all_r.push_back(r_name(i));

  spec.letters = all_x;
  spec.letters.insert(spec.letters.end(), all_z.begin(), all_z.end());
  spec.letters.push_back("s");
  spec.letters.push_back("t");
  spec.letters.insert(spec.letters.end(), all_r.begin(), all_r.end());
  for (int i = 1; i <= inst.n; ++i) spec.letters.push_back(pbar_name(i));

  // Everything except x_i / z / s / t / r_i, as requested per state.
  auto label = [&](int gadget, bool drop_s, bool drop_t, const std::string& drop_x,
                   const std::string& drop_z, bool pbar) {
    std::vector<std::string> out;
    for (const std::string& x : all_x)
      if (x != drop_x) out.push_back(x);
    for (const std::string& z : all_z)
      if (z != drop_z) out.push_back(z);
    if (!drop_s) out.push_back("s");
    if (!drop_t) out.push_back("t");
    for (int i = 1; i <= inst.n; ++i)
      if (i != gadget) out.push_back(r_name(i));
    if (pbar) out.push_back(pbar_name(gadget));
    return out;
  };

  auto w_x = [&](int i) { return "w_" + x_name(i); };
  auto wbar_x = [&](int i) { return "wbar_" + x_name(i); };
  auto sbar = [&](int i) { return "sbar_" + std::to_string(i); };
  auto w_z = [&](int i, int u) {
    return "w_z" + std::to_string(i) + "_" + std::to_string(u);
  };
  auto wbar_z = [&](int i, int u) {
    return "wbar_z" + std::to_string(i) + "_" + std::to_string(u);
  };

  for (int i = inst.n; i >= 1; --i) {
    spec.states.push_back(w_x(i));
    spec.states.push_back(wbar_x(i));
    spec.states.push_back(sbar(i));
    spec.labels.push_back({w_x(i), label(i, false, false, "", "", false)});
    spec.labels.push_back({wbar_x(i), label(i, false, false, x_name(i), "", true)});
    spec.labels.push_back({sbar(i), label(i, true, false, "", "", false)});
    for (int u = 1; u <= static_cast<int>(inst.z_blocks[i - 1].size()); ++u) {
      spec.states.push_back(w_z(i, u));
      spec.states.push_back(wbar_z(i, u));
      spec.labels.push_back({w_z(i, u), label(i, false, false, "", "", false)});
      spec.labels.push_back(
          {wbar_z(i, u), label(i, false, false, "", inst.z_blocks[i - 1][u - 1], false)});
    }
  }
  spec.states.push_back("s0");
  {
    std::vector<std::string> s0_label = all_x;
    s0_label.insert(s0_label.end(), all_z.begin(), all_z.end());
    s0_label.push_back("s");
    s0_label.insert(s0_label.end(), all_r.begin(), all_r.end());
    spec.labels.push_back({"s0", s0_label});
  }

  for (int i = inst.n; i >= 1; --i) {
    spec.edges.push_back({wbar_x(i), sbar(i)});
    spec.edges.push_back({sbar(i), w_x(i)});

    std::vector<std::string> level{w_x(i), wbar_x(i)};
    for (int u = 1; u <= static_cast<int>(inst.z_blocks[i - 1].size()); ++u) {
      for (const std::string& from : level) {
        spec.edges.push_back({from, w_z(i, u)});
        spec.edges.push_back({from, wbar_z(i, u)});
      }
      level = {w_z(i, u), wbar_z(i, u)};
    }

    std::vector<std::string> exits =
        i > 1 ? std::vector<std::string>{w_x(i - 1), wbar_x(i - 1)}
              : std::vector<std::string>{"s0"};
    for (const std::string& from : level)
      for (const std::string& to : exits) spec.edges.push_back({from, to});
  }
  spec.edges.push_back({"s0", "s0"});

  spec.initial = w_x(inst.n);
  return KripkeStructure::make(spec);
}

Formula build_psi(const SnsatInstance& inst, int k) {
  validate(inst);
  if (k < 0 || k > inst.n + 1)
    throw IndexError("psi index " + std::to_string(k) + " outside 0.." +
                     std::to_string(inst.n + 1));
  if (k == 0) return Formula::falsum();

  Formula len2 = Formula::conjunction(
      Formula::diamond(Mod::B, Formula::verum()),
      Formula::box(Mod::B, Formula::box(Mod::B, Formula::falsum())));

  Formula prev = build_psi(inst, k - 1);

  Formula guards = Formula::implication(
      Formula::conjunction(Formula::letter(x_name(1)),
                           Formula::negation(Formula::letter(r_name(1)))),
      inst.formulas[0]);
  for (int i = 2; i <= inst.n; ++i)
    guards = Formula::conjunction(
        guards, Formula::implication(
                    Formula::conjunction(Formula::letter(x_name(i)),
                                         Formula::negation(Formula::letter(r_name(i)))),
                    inst.formulas[i - 1]));

  Formula any_bar = Formula::diamond(Mod::A, Formula::letter(pbar_name(1)));
  for (int i = 2; i <= inst.n; ++i)
    any_bar = Formula::disjunction(
        any_bar, Formula::diamond(Mod::A, Formula::letter(pbar_name(i))));

  Formula refute = Formula::diamond(
      Mod::A, Formula::conjunction(
                  Formula::conjunction(Formula::negation(Formula::letter("s")), len2),
                  Formula::diamond(Mod::A, Formula::conjunction(
                                               len2, Formula::negation(prev)))));

  Formula body = Formula::conjunction(
      Formula::conjunction(
          Formula::conjunction(Formula::letter("s"),
                               Formula::negation(Formula::letter("t"))),
          guards),
      Formula::box(Mod::B, Formula::implication(any_bar, refute)));

  return Formula::diamond(Mod::A, body);
}

Formula build_phi(const SnsatInstance& inst) {
  return Formula::implication(Formula::box(Mod::B, Formula::falsum()),
                              build_psi(inst, inst.n));
}

ReductionReport reduction_check(const SnsatInstance& inst, const OracleConfig& cfg,
                                bool check_items, bool allow_large) {
  validate(inst);
  if (inst.n >= 3) {
    if (!allow_large)
      throw ValidationError("large-instance",
                            "instances with n >= 3 are expensive; pass the force flag");
    std::fprintf(stderr,
                 "warning: reduction check on n=%d may explore a large "
                 "configuration space\n",
                 inst.n);
  }

  ReductionReport report;
  report.valuation = eval_v(inst);
  KripkeStructure k = build_kripke(inst);
  report.verdict = model_check(k, build_phi(inst), cfg);
  report.main_agrees = report.valuation[inst.n - 1] == report.verdict.answer;

  if (check_items) {
    for (int kk = 1; kk <= inst.n + 1; ++kk) {
      // psi_k = <A>body: the point track at a state satisfies psi_k iff
      // some track from that state satisfies the body.
      NormalFormula body = normalize(build_psi(inst, kk).child());
      ValuationTables tables;
      OracleStats stats;
      mc(k, body, Direction::Forward, tables, cfg, stats);
      report.verdict.stats.oracle_calls += stats.oracle_calls;
      report.verdict.stats.configurations += stats.configurations;

      for (int r = 1; r <= inst.n; ++r) {
        StateId at_w = *k.state_id("w_" + x_name(r));
        StateId at_wbar = *k.state_id("wbar_" + x_name(r));
        if (kk >= r) {
          bool got = tables.value(Direction::Forward, body, at_w);
          report.items.push_back({kk, r, 1, report.valuation[r - 1], got});
        }
        if (kk >= r + 1) {
          bool got = tables.value(Direction::Forward, body, at_wbar);
          report.items.push_back({kk, r, 2, !report.valuation[r - 1], got});
        }
      }
    }
    for (const auto& item : report.items)
      if (item.expected != item.got) report.items_agree = false;
  }
  return report;
}

SnsatInstance random_snsat(Rng& rng, const SnsatGenOptions& opt) {
  SnsatInstance inst;
  inst.n = opt.n;
  for (int i = 1; i <= inst.n; ++i) {
    int locals = static_cast<int>(rng() % (opt.max_locals + 1));
    std::vector<std::string> block;
    for (int u = 1; u <= locals; ++u)
      block.push_back("z" + std::to_string(i) + "_" + std::to_string(u));
    inst.z_blocks.push_back(block);

    FormulaGenOptions fopt;
    fopt.max_size = opt.max_formula_size;
    fopt.max_modal_depth = 0;
    fopt.use_a = fopt.use_abar = fopt.use_b = fopt.use_e = false;
    fopt.letters = block;
    for (int j = 1; j < i; ++j) fopt.letters.push_back(x_name(j));
    inst.formulas.push_back(random_formula(rng, fopt));
  }
  return inst;
}

}  // namespace hsmc
