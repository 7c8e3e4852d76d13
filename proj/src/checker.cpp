#include "hsmc/checker.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "hsmc/semantics.hpp"
#include "json.hpp"

namespace hsmc {

namespace {

const char* dir_name(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

std::vector<std::pair<Formula, std::vector<char>>>* table_side(
    std::vector<std::pair<Formula, std::vector<char>>>& fwd,
    std::vector<std::pair<Formula, std::vector<char>>>& bwd, Direction dir) {
  return dir == Direction::Forward ? &fwd : &bwd;
}

}  // namespace

bool ValuationTables::has_row(Direction dir, const NormalFormula& f) const {
  const auto& side = dir == Direction::Forward ? fwd_ : bwd_;
  for (const auto& [g, row] : side)
    if (g == f.formula()) return true;
  return false;
}

void ValuationTables::add_row(Direction dir, const NormalFormula& f,
                              std::vector<char> values) {
  if (has_row(dir, f))
    throw TableError("valuation row written twice for " + f.formula().to_string());
  auto* side = table_side(fwd_, bwd_, dir);
  side->push_back({f.formula(), std::move(values)});
}

const std::vector<char>& ValuationTables::row(Direction dir, const NormalFormula& f) const {
  const auto& side = dir == Direction::Forward ? fwd_ : bwd_;
  for (const auto& [g, row] : side)
    if (g == f.formula()) return row;
  throw TableError("missing " + std::string(dir_name(dir)) + " valuation row for " +
                   f.formula().to_string());
}

bool ValuationTables::value(Direction dir, const NormalFormula& f, StateId v) const {
  return row(dir, f)[v] != 0;
}

std::vector<std::pair<Formula, std::vector<char>>> ValuationTables::rows(
    Direction dir) const {
  return dir == Direction::Forward ? fwd_ : bwd_;
}

ColumnEvaluator::ColumnEvaluator(const KripkeStructure& k, const NormalFormula& psi,
                                 const ValuationTables& tables)
    : k_(&k), tables_(&tables) {
  result_row_ = add(psi.formula());
}

int ColumnEvaluator::add(const Formula& g) {
  for (const auto& [f, id] : index_)
    if (f == g) return id;

  Row row;
  using K = Formula::Kind;
  switch (g.kind()) {
    case K::True: row.op = Row::Op::True; break;
    case K::False: row.op = Row::Op::False; break;
    case K::Letter:
      if (auto p = k_->letter_id(g.name())) {
        row.op = Row::Op::Letter;
        row.letter = *p;
      } else {
        row.op = Row::Op::LetterAbsent;
      }
      break;
    case K::Not:
      row.op = Row::Op::Not;
      row.a = add(g.child());
      break;
    case K::Or:
      row.op = Row::Op::Or;
      row.a = add(g.child(0));
      row.b = add(g.child(1));
      break;
    case K::Diamond:
      switch (g.mod()) {
        case Mod::B:
          row.op = Row::Op::DiamondB;
          row.a = add(g.child());
          break;
        case Mod::A:
        case Mod::Abar: {
          row.op = g.mod() == Mod::A ? Row::Op::ModA : Row::Op::ModAbar;
          Direction dir = g.mod() == Mod::A ? Direction::Forward : Direction::Backward;
          row.table_row = &tables_->row(dir, NormalFormula(g.child()));
          break;
        }
        default:
          throw FragmentError("oracle formulas must be E-free; found <" +
                              std::string(mod_name(g.mod())) + ">");
      }
      break;
    default:
      throw ValidationError("not-normal", "oracle formula not in normal shape");
  }

  rows_.push_back(row);
  int id = static_cast<int>(rows_.size()) - 1;
  index_.push_back({g, id});
  return id;
}

Bitset ColumnEvaluator::start(StateId first) const {
  Bitset col(row_count());
  for (int i = 0; i < row_count(); ++i) {
    const Row& r = rows_[i];
    bool v = false;
    switch (r.op) {
      case Row::Op::Letter: v = k_->letter_holds(r.letter, first); break;
      case Row::Op::LetterAbsent: v = false; break;
      case Row::Op::True: v = true; break;
      case Row::Op::False: v = false; break;
      case Row::Op::Not: v = !col.test(r.a); break;
      case Row::Op::Or: v = col.test(r.a) || col.test(r.b); break;
      case Row::Op::DiamondB: v = false; break;  // a point track has no proper prefix
      case Row::Op::ModA: v = (*r.table_row)[first] != 0; break;
      case Row::Op::ModAbar: v = (*r.table_row)[first] != 0; break;
    }
    col.set(i, v);
  }
  return col;
}

Bitset ColumnEvaluator::step(const Bitset& prev, StateId next) const {
  Bitset col(row_count());
  for (int i = 0; i < row_count(); ++i) {
    const Row& r = rows_[i];
    bool v = false;
    switch (r.op) {
      case Row::Op::Letter: v = prev.test(i) && k_->letter_holds(r.letter, next); break;
      case Row::Op::LetterAbsent: v = false; break;
      case Row::Op::True: v = true; break;
      case Row::Op::False: v = false; break;
      case Row::Op::Not: v = !col.test(r.a); break;
      case Row::Op::Or: v = col.test(r.a) || col.test(r.b); break;
      case Row::Op::DiamondB: v = prev.test(i) || prev.test(r.a); break;
      case Row::Op::ModA: v = (*r.table_row)[next] != 0; break;
      case Row::Op::ModAbar: v = prev.test(i); break;  // fixed by the first state
    }
    col.set(i, v);
  }
  return col;
}

namespace {

struct Config {
  StateId state;
  Bitset col;
  bool operator==(const Config& o) const = default;
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const {
    return c.col.hash() * 1099511628211ull + static_cast<std::size_t>(c.state);
  }
};

void check_hard_cap(const KripkeStructure& k, const ColumnEvaluator& eval, long visited) {
  if (eval.row_count() >= 44) return;  // cap astronomically large, nothing to check
  long cap = static_cast<long>(k.num_states()) << eval.row_count();
  if (visited > cap)
    throw Error("internal: configuration search exceeded |W|*2^rows = " +
                std::to_string(cap));
}

// Breadth-first closure over (state, column) configurations. Forward
// searches grow tracks from v; backward searches grow tracks from every
// possible first state and accept only at v. max_len < 0 means no length
// cap (the closure is finite anyway); otherwise tracks are cut at that
// length. Witnesses come out shortest-first thanks to the BFS order.
OracleAnswer config_graph_search(const KripkeStructure& k, const ColumnEvaluator& eval,
                                 StateId v, Direction dir, const OracleConfig& cfg,
                                 bool want_witness, long max_len) {
  struct Entry {
    Config config;
    int parent;
  };
  std::vector<Entry> entries;
  std::unordered_map<Config, int, ConfigHash> seen;
  std::vector<int> frontier, next_frontier;
  OracleAnswer out;

  int accept_at = -1;
  auto push = [&](Config c, int parent) {
    if (seen.contains(c)) return;
    if (cfg.max_configs > 0 && static_cast<long>(entries.size()) >= cfg.max_configs)
      throw ResourceCapError("configuration cap of " + std::to_string(cfg.max_configs) +
                             " exceeded");
    int id = static_cast<int>(entries.size());
    bool accept = c.col.test(eval.result_row()) &&
                  (dir == Direction::Forward || c.state == v);
    seen.emplace(c, id);
    entries.push_back({std::move(c), parent});
    next_frontier.push_back(id);
    if (accept && accept_at < 0) accept_at = id;
  };

  if (dir == Direction::Forward) {
    push({v, eval.start(v)}, -1);
  } else {
    for (StateId u = 0; u < k.num_states(); ++u) push({u, eval.start(u)}, -1);
  }

  long len = 1;
  std::swap(frontier, next_frontier);
  while (!frontier.empty() && accept_at < 0 && (max_len < 0 || len < max_len)) {
    for (int id : frontier) {
      Config cur = entries[id].config;  // by value: push may grow entries
      for (StateId w : k.successors(cur.state)) {
        push({w, eval.step(cur.col, w)}, id);
        if (accept_at >= 0) break;
      }
      if (accept_at >= 0) break;
    }
    ++len;
    frontier.clear();
    std::swap(frontier, next_frontier);
  }

  out.configurations = static_cast<long>(entries.size());
  check_hard_cap(k, eval, out.configurations);
  out.exists = accept_at >= 0;
  if (out.exists && want_witness) {
    std::vector<StateId> states;
    for (int id = accept_at; id >= 0; id = entries[id].parent)
      states.push_back(entries[id].config.state);
    std::reverse(states.begin(), states.end());
    out.witness = Track(k, std::move(states));
  }
  return out;
}

// Depth-first track enumeration up to a length cap, carrying the same
// column. A memo of the remaining depth already exhausted at each
// configuration prunes re-exploration; without it the enumeration would
// revisit identical configurations exponentially often.
OracleAnswer bounded_dfs_search(const KripkeStructure& k, const ColumnEvaluator& eval,
                                StateId v, Direction dir, const OracleConfig& cfg,
                                bool want_witness, long cap) {
  std::unordered_map<Config, long, ConfigHash> exhausted;
  std::vector<StateId> path;
  OracleAnswer out;

  std::function<bool(const Config&, long)> visit = [&](const Config& c,
                                                       long remaining) -> bool {
    path.push_back(c.state);
    bool accept =
        c.col.test(eval.result_row()) && (dir == Direction::Forward || c.state == v);
    if (accept) return true;

    auto it = exhausted.find(c);
    if (it != exhausted.end() && it->second >= remaining) {
      path.pop_back();
      return false;
    }
    if (it == exhausted.end()) {
      if (cfg.max_configs > 0 && static_cast<long>(exhausted.size()) >= cfg.max_configs)
        throw ResourceCapError("configuration cap of " + std::to_string(cfg.max_configs) +
                               " exceeded");
      exhausted.emplace(c, remaining);
    } else {
      it->second = remaining;
    }

    if (remaining > 0) {
      for (StateId w : k.successors(c.state)) {
        if (visit({w, eval.step(c.col, w)}, remaining - 1)) return true;
      }
    }
    path.pop_back();
    return false;
  };

  bool found = false;
  if (dir == Direction::Forward) {
    found = visit({v, eval.start(v)}, cap - 1);
  } else {
    for (StateId u = 0; u < k.num_states() && !found; ++u)
      found = visit({u, eval.start(u)}, cap - 1);
  }

  out.configurations = static_cast<long>(exhausted.size());
  check_hard_cap(k, eval, out.configurations);
  out.exists = found;
  if (found && want_witness) out.witness = Track(k, path);
  return out;
}

OracleAnswer run_oracle(const KripkeStructure& k, const ColumnEvaluator& eval,
                        const NormalFormula& psi, StateId v, Direction dir,
                        const OracleConfig& cfg, bool want_witness) {
  if (cfg.realization == OracleRealization::ConfigGraph)
    return config_graph_search(k, eval, v, dir, cfg, want_witness, -1);
  long cap = cfg.dfs_cap > 0 ? cfg.dfs_cap : track_bound(k.num_states(), size(psi));
  return bounded_dfs_search(k, eval, v, dir, cfg, want_witness, cap);
}

}  // namespace

OracleAnswer oracle_exists(const KripkeStructure& k, const NormalFormula& psi, StateId v,
                           Direction dir, const ValuationTables& tables,
                           const OracleConfig& cfg, bool want_witness) {
  ColumnEvaluator eval(k, psi, tables);
  return run_oracle(k, eval, psi, v, dir, cfg, want_witness);
}

OracleAnswer oracle_exists_bounded(const KripkeStructure& k, const NormalFormula& psi,
                                   StateId v, Direction dir, const ValuationTables& tables,
                                   const OracleConfig& cfg, long max_len) {
  ColumnEvaluator eval(k, psi, tables);
  return config_graph_search(k, eval, v, dir, cfg, false, max_len);
}

void mc(const KripkeStructure& k, const NormalFormula& psi, Direction dir,
        ValuationTables& tables, const OracleConfig& cfg, OracleStats& stats) {
  if (tables.has_row(dir, psi)) return;

  // Fill the tables for the modal frontier first, A bodies forward and
  // Abar bodies backward; the oracle below reads them per state.
  std::vector<NormalFormula> frontier = mods(psi);
  for (const NormalFormula& m : frontier)
    if (m.formula().mod() == Mod::A)
      mc(k, NormalFormula(m.formula().child()), Direction::Forward, tables, cfg, stats);
  for (const NormalFormula& m : frontier)
    if (m.formula().mod() == Mod::Abar)
      mc(k, NormalFormula(m.formula().child()), Direction::Backward, tables, cfg, stats);

  ColumnEvaluator eval(k, psi, tables);
  const int n = k.num_states();
  std::vector<char> row(n, 0);
  std::vector<long> configs(n, 0);
  std::vector<std::exception_ptr> errors(n);

#pragma omp parallel for schedule(dynamic) num_threads(cfg.threads) if (cfg.threads > 1)
  for (int v = 0; v < n; ++v) {
    try {
      OracleAnswer ans = run_oracle(k, eval, psi, v, dir, cfg, false);
      row[v] = ans.exists ? 1 : 0;
      configs[v] = ans.configurations;
    } catch (...) {
      errors[v] = std::current_exception();
    }
  }
  for (int v = 0; v < n; ++v)
    if (errors[v]) std::rethrow_exception(errors[v]);

  stats.oracle_calls += n;
  for (int v = 0; v < n; ++v) stats.configurations += configs[v];
  tables.add_row(dir, psi, std::move(row));
}

Verdict model_check(const KripkeStructure& k, const Formula& f, const OracleConfig& cfg,
                    CheckRoute route) {
  Fragment frag = fragment_of(f);
  if (!frag.checkable())
    throw FragmentError("formula outside the checkable fragments: " + frag.reason);

  bool mirrored;
  switch (route) {
    case CheckRoute::Auto: mirrored = frag.kind == Fragment::Kind::AAbarE; break;
    case CheckRoute::Forward:
      if (frag.kind == Fragment::Kind::AAbarE)
        throw FragmentError("the forward route cannot handle E modalities");
      mirrored = false;
      break;
    default:
      if (frag.kind == Fragment::Kind::AAbarB)
        throw FragmentError("the mirrored route cannot handle B modalities");
      mirrored = true;
      break;
  }

  Verdict verdict;
  if (!mirrored) {
    NormalFormula psi = normalize(Formula::negation(f));
    ValuationTables tables;
    mc(k, psi, Direction::Forward, tables, cfg, verdict.stats);
    bool violated = tables.value(Direction::Forward, psi, k.initial());
    verdict.answer = !violated;
    if (violated) {
      OracleAnswer wit =
          oracle_exists(k, psi, k.initial(), Direction::Forward, tables, cfg, true);
      verdict.stats.oracle_calls += 1;
      verdict.stats.configurations += wit.configurations;
      verdict.counterexample = wit.witness;
    }
    return verdict;
  }

  // Initial tracks of K are, reversed, exactly the tracks of the
  // transposed structure that end at the initial state; mirroring the
  // formula swaps prefix for suffix views to match.
  KripkeStructure kt = k.transposed();
  NormalFormula psi = normalize(mirror(Formula::negation(f)));
  ValuationTables tables;
  mc(kt, psi, Direction::Backward, tables, cfg, verdict.stats);
  bool violated = tables.value(Direction::Backward, psi, kt.initial());
  verdict.answer = !violated;
  if (violated) {
    OracleAnswer wit =
        oracle_exists(kt, psi, kt.initial(), Direction::Backward, tables, cfg, true);
    verdict.stats.oracle_calls += 1;
    verdict.stats.configurations += wit.configurations;
    if (wit.witness) verdict.counterexample = wit.witness->reversed_onto(k);
  }
  return verdict;
}

std::string verdict_to_json(const KripkeStructure& k, const Verdict& v) {
  nlohmann::ordered_json j;
  j["answer"] = v.answer;
  if (v.counterexample) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (StateId s : v.counterexample->states()) arr.push_back(k.state_name(s));
    j["counterexample"] = arr;
  } else {
    j["counterexample"] = nullptr;
  }
  j["stats"]["oracle_calls"] = v.stats.oracle_calls;
  j["stats"]["configurations"] = v.stats.configurations;
  return j.dump(2);
}

}  // namespace hsmc
