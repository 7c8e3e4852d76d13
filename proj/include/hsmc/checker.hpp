#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hsmc/bitset.hpp"
#include "hsmc/formula.hpp"
#include "hsmc/kripke.hpp"
#include "hsmc/track.hpp"

namespace hsmc {

/// How the track oracle resolves its nondeterministic track choice.
///
/// ConfigGraph runs a breadth-first reachability search over
/// configurations (current state, truth column). The column evolves
/// deterministically along edges, so closure over the reachable
/// configurations decides track existence exactly, with no length cap.
///
/// BoundedDfs enumerates tracks depth-first up to an explicit length cap,
/// carrying the same column; a futility memo on (configuration, remaining
/// length) keeps exhaustion finite. It is the transcription closest to a
/// guess-and-check oracle and serves as a differential reference on tiny
/// inputs.
enum class OracleRealization { ConfigGraph, BoundedDfs };

struct OracleConfig {
  OracleRealization realization = OracleRealization::ConfigGraph;
  long dfs_cap = 0;      // BoundedDfs length cap; 0 = track_bound(|W|, size)
  long max_configs = 0;  // safety valve per oracle call; 0 = unlimited
  int threads = 1;       // per-state oracle calls run in parallel when > 1
};

struct OracleStats {
  long oracle_calls = 0;
  long configurations = 0;
};

/// The two global valuation vectors: the Forward table answers "some
/// track starting at v satisfies the formula", the Backward one "some
/// track ending at v satisfies it". Rows are complete per-state vectors,
/// written exactly once by the driver level that owns them and only read
/// afterwards; that write-once discipline is what makes the per-state
/// oracle loop safe to parallelize.
class ValuationTables {
 public:
  bool has_row(Direction dir, const NormalFormula& f) const;

  /// Throws TableError if the row exists already (rows are written once).
  void add_row(Direction dir, const NormalFormula& f, std::vector<char> values);

  /// Throws TableError when the row is absent.
  const std::vector<char>& row(Direction dir, const NormalFormula& f) const;
  bool value(Direction dir, const NormalFormula& f, StateId v) const;

  std::vector<std::pair<Formula, std::vector<char>>> rows(Direction dir) const;

 private:
  std::vector<std::pair<Formula, std::vector<char>>> fwd_, bwd_;
};

/// Compiled truth-column transformer for one oracle formula psi.
///
/// Row i of a column holds the truth of the i-th closure subformula on
/// the track walked so far. Letters AND-accumulate along the track
/// (homogeneity), <B> rows OR-accumulate the body's previous row, Boolean
/// rows are pointwise in the current column, A rows are read from the
/// Forward table at the current state, and Abar rows are fixed by the
/// track's first state, so they are folded into the start column and
/// carried unchanged.
///
/// Construction resolves every A/Abar member of mods(psi) against the
/// tables and throws TableError when a row is missing — the signal that
/// the driver did not fill the tables bottom-up.
class ColumnEvaluator {
 public:
  ColumnEvaluator(const KripkeStructure& k, const NormalFormula& psi,
                  const ValuationTables& tables);

  int row_count() const { return static_cast<int>(rows_.size()); }
  int result_row() const { return result_row_; }

  /// Column of the point track [first].
  Bitset start(StateId first) const;
  /// Column of the one-step extension of a track with column `prev` by
  /// the state `next`. Deterministic in (prev, next).
  Bitset step(const Bitset& prev, StateId next) const;

 private:
  struct Row {
    enum class Op { Letter, LetterAbsent, True, False, Not, Or, DiamondB, ModA, ModAbar };
    Op op = Op::True;
    int a = -1, b = -1;
    LetterId letter = -1;
    const std::vector<char>* table_row = nullptr;
  };

  int add(const Formula& g);

  const KripkeStructure* k_;
  const ValuationTables* tables_;
  std::vector<Row> rows_;
  std::vector<std::pair<Formula, int>> index_;
  int result_row_ = -1;
};

struct OracleAnswer {
  bool exists = false;
  std::optional<Track> witness;
  long configurations = 0;
};

/// Does some track anchored at v (first state when Forward, last state
/// when Backward) satisfy psi? Preconditions: psi is E-free normal form
/// and the tables satisfy the mods(psi) contract; otherwise TableError /
/// FragmentError. Throws ResourceCapError past cfg.max_configs.
OracleAnswer oracle_exists(const KripkeStructure& k, const NormalFormula& psi, StateId v,
                           Direction dir, const ValuationTables& tables,
                           const OracleConfig& cfg, bool want_witness = false);

/// Same question restricted to tracks of length <= max_len (ConfigGraph
/// search cut at that depth). Used to probe the witness-length bound.
OracleAnswer oracle_exists_bounded(const KripkeStructure& k, const NormalFormula& psi,
                                   StateId v, Direction dir, const ValuationTables& tables,
                                   const OracleConfig& cfg, long max_len);

/// Recursive driver: first recurses on the bodies of the A members of
/// mods(psi) (forward) and the Abar members (backward), then fills the
/// (dir, psi) row with one oracle call per state. Rows already present
/// are not recomputed. The per-state calls run under cfg.threads.
void mc(const KripkeStructure& k, const NormalFormula& psi, Direction dir,
        ValuationTables& tables, const OracleConfig& cfg, OracleStats& stats);

/// Which reduction model_check applies; Auto picks Forward unless the
/// formula contains E, in which case everything is mirrored onto the
/// transposed structure.
enum class CheckRoute { Auto, Forward, Mirrored };

struct Verdict {
  bool answer = false;
  std::optional<Track> counterexample;  // initial track satisfying the negation
  OracleStats stats;
};

/// Decides K |= f for the supported fragments. The formula is negated and
/// normalized; f holds on every initial track iff no track from the
/// initial state satisfies the negation. With the Mirrored route the
/// question is asked backward on the transposed structure and the witness
/// is reversed back into an initial track of K.
Verdict model_check(const KripkeStructure& k, const Formula& f,
                    const OracleConfig& cfg = {}, CheckRoute route = CheckRoute::Auto);

/// {"answer": ..., "counterexample": [names] | null, "stats": {...}}
std::string verdict_to_json(const KripkeStructure& k, const Verdict& v);

}  // namespace hsmc
