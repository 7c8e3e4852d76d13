#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hsmc/checker.hpp"
#include "hsmc/formula.hpp"
#include "hsmc/gen.hpp"
#include "hsmc/kripke.hpp"

namespace hsmc {

/// A chained-satisfiability instance: variables x1..xn, a block Z_i of
/// local variables per position, and propositional formulas F_i over
/// x1..x_{i-1} and Z_i. The x names are fixed to x1..xn; local names are
/// free identifiers but must stay disjoint from the x variables, from
/// each other, and from the reduction's reserved letters (s, t, r1..rn,
/// p_xbar1..n).
struct SnsatInstance {
  int n = 0;
  std::vector<std::vector<std::string>> z_blocks;  // size n, entries may be empty
  std::vector<Formula> formulas;                   // size n
};

/// Throws ValidationError when the variable discipline is broken.
void validate(const SnsatInstance& inst);

/// Parses the instance format:
///
///   snsat <n>
///   local <i>: <z-name> ...     (optional; omitted means no locals)
///   F<i>: <propositional formula>
///
/// '#' starts a comment.
SnsatInstance parse_snsat(std::string_view text);
std::string to_text(const SnsatInstance& inst);

/// The unique valuation: v(x_i) is true iff F_i is satisfiable over Z_i
/// once x1..x_{i-1} are fixed to their already-computed values. Local
/// satisfiability is decided by enumerating all 2^{|Z_i|} assignments.
std::vector<bool> eval_v(const SnsatInstance& inst);

/// The structure the hardness reduction builds: one gadget per variable,
/// chained from x_n down to x_1 and into a self-looping collector s0.
/// Per gadget i: entry states w_xi / wbar_xi, the detour wbar_xi -> sbar_i
/// -> w_xi, and a diamond chain of z-choice levels; entries feed the first
/// level, consecutive levels are fully connected, and the last level (or
/// the entries, when there are no locals) feeds the next gadget's entries.
/// Labels make each letter fail exactly where the reduction needs it to:
/// x_i is missing at wbar_xi, z at wbar_z, s at every sbar_i, t only at
/// s0, r_i everywhere inside gadget i, and p_xbar_i marks wbar_xi alone.
KripkeStructure build_kripke(const SnsatInstance& inst);

/// psi_0 = false and, for k >= 1,
///   psi_k = <A>( (s & ~t)
///              & /\_i ((x_i & ~r_i) -> F_i)
///              & [B]( (\/_i <A>p_xbar_i)
///                     -> <A>(~s & len2 & <A>(len2 & ~psi_{k-1})) ) )
/// with len2 = <B>true & [B][B]false, which only length-2 tracks satisfy.
Formula build_psi(const SnsatInstance& inst, int k);

/// [B]false -> psi_n : the formula whose model check answers the instance.
Formula build_phi(const SnsatInstance& inst);

struct ReductionReport {
  std::vector<bool> valuation;
  Verdict verdict;           // model check of build_phi over build_kripke
  bool main_agrees = false;  // valuation of x_n == verdict.answer

  struct ItemCheck {
    int k = 0;
    int r = 0;
    int item = 0;  // 1: at w_xr for k >= r; 2: at wbar_xr for k >= r+1
    bool expected = false;
    bool got = false;
  };
  std::vector<ItemCheck> items;
  bool items_agree = true;

  bool all_ok() const { return main_agrees && items_agree; }
};

/// Runs both sides of the reduction — the direct valuation and the model
/// check — and reports agreement. check_items additionally probes, for
/// every admissible (k, r), whether the point track at w_xr satisfies
/// psi_k exactly when v(x_r) is true (and dually at wbar_xr).
///
/// Instances with n >= 3 are refused unless allow_large is set: the
/// formula nesting makes the oracle's configuration space grow quickly.
ReductionReport reduction_check(const SnsatInstance& inst, const OracleConfig& cfg = {},
                                bool check_items = true, bool allow_large = false);

struct SnsatGenOptions {
  int n = 2;
  int max_locals = 2;
  int max_formula_size = 6;
};

SnsatInstance random_snsat(Rng& rng, const SnsatGenOptions& opt);

}  // namespace hsmc
