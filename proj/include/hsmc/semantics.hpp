#pragma once

#include <optional>

#include "hsmc/formula.hpp"
#include "hsmc/kripke.hpp"
#include "hsmc/track.hpp"

namespace hsmc {

/// Length cap on the candidate tracks explored when an A/~A obligation
/// leaves the current track.
struct ExplorationBudget {
  long max_track_length = 1;  // >= 1
};

/// num_states * (2 * formula_size + 1)^2 : the witness-length cap that
/// makes bounded track search complete for the checkable fragments.
long track_bound(long num_states, long formula_size);

/// Outcome of a budgeted evaluation. budget_limited means some track
/// search was cut off by the budget before the answer became definitive;
/// the value is still the best answer within the budget.
struct EvalResult {
  bool value = false;
  bool budget_limited = false;
};

/// Reference evaluation of the track semantics, by direct recursion:
/// a letter holds iff it is in the induced label; <B>/<E> quantify over
/// proper prefixes/suffixes of the track; <A>/<~A> search tracks leaving
/// the last state / reaching the first state, up to the budget, shortest
/// candidates first. Boolean connectives and universal modalities are
/// evaluated natively, so raw and normalized formulas can be compared.
///
/// Complete whenever budget >= track_bound(|W|, size(normalize(f))).
/// Memoized per call on (track, subformula); single-threaded.
EvalResult holds(const KripkeStructure& k, const Track& rho, const Formula& f,
                 const ExplorationBudget& budget);

/// Whether some track of length <= budget anchored at v (first state when
/// Forward, last state when Backward) satisfies f.
EvalResult exists_track(const KripkeStructure& k, StateId v, const Formula& f,
                        Direction dir, const ExplorationBudget& budget);

struct BruteVerdict {
  bool satisfied = false;               // no initial track satisfies the negation
  std::optional<Track> counterexample;  // initial track satisfying the negation
  bool budget_limited = false;
  long bound_used = 0;      // initial-track length cap actually applied
  long complete_bound = 0;  // cap at which the enumeration would be definitive
};

/// Length cap brute_model_check applies by default: the completeness
/// bound when that is small enough to exhaust, otherwise a cap sized by
/// the structure and the prefix-modal depth of the negated formula.
long default_exploration_cap(const KripkeStructure& k, const Formula& f);

/// Reference model check: enumerates every initial track up to the cap
/// and evaluates the negated formula on each, shortest first. Exhaustive
/// within the cap; budget_limited is set when the cap is below the
/// completeness bound. cap_override = 0 picks the default cap.
BruteVerdict brute_model_check(const KripkeStructure& k, const Formula& f,
                               long cap_override = 0);

}  // namespace hsmc
