#include "hsmc/semantics.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace hsmc {

long track_bound(long num_states, long formula_size) {
  long side = 2 * formula_size + 1;
  return num_states * side * side;
}

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<StateId>& v) const {
    std::uint64_t h = 1469598103934665603ull;
    for (StateId s : v) {
      h ^= static_cast<std::uint64_t>(s) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// One evaluation session: a structure, a budget, and the memo tables.
// Tracks and subformulas are interned to dense ids so the memo keys stay
// cheap.
class BruteEvaluator {
 public:
  BruteEvaluator(const KripkeStructure& k, long budget, bool complete)
      : k_(k), budget_(budget), complete_(complete) {
    if (budget_ < 1) throw BudgetError("exploration budget must be at least 1");
    preds_.assign(k.num_states(), {});
    for (StateId a = 0; a < k.num_states(); ++a)
      for (StateId b : k.successors(a)) preds_[b].push_back(a);
    for (auto& row : preds_) std::sort(row.begin(), row.end());
  }

  EvalResult eval_states(const std::vector<StateId>& states, const Formula& f) {
    return eval(track_id(states), f);
  }

  // Exists a track of length <= budget anchored at v satisfying f
  // (anchor = first state for Forward, last state for Backward).
  EvalResult exists(StateId v, const Formula& f, Direction dir) {
    return search(v, f, dir, true);
  }

 private:
  int track_id(const std::vector<StateId>& states) {
    auto [it, fresh] = track_ids_.try_emplace(states, static_cast<int>(tracks_.size()));
    if (fresh) tracks_.push_back(states);
    return it->second;
  }

  int sub_id(const Formula& f) {
    auto [it, fresh] = sub_ids_.try_emplace(f, static_cast<int>(sub_ids_.size()));
    (void)fresh;
    return it->second;
  }

  static EvalResult exact(bool v) { return {v, false}; }

  EvalResult eval(int tid, const Formula& f) {
    std::uint64_t key = (static_cast<std::uint64_t>(tid) << 20) |
                        static_cast<std::uint64_t>(sub_id(f));
    if (auto it = memo_.find(key); it != memo_.end())
      return {(it->second & 1) != 0, (it->second & 2) != 0};
    EvalResult r = eval_uncached(tid, f);
    memo_[key] = static_cast<int>(r.value) | (static_cast<int>(r.budget_limited) << 1);
    return r;
  }

  EvalResult eval_uncached(int tid, const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::True: return exact(true);
      case K::False: return exact(false);
      case K::Letter: {
        auto p = k_.letter_id(f.name());
        if (!p) return exact(false);  // letters outside the alphabet hold nowhere
        for (StateId v : tracks_[tid])
          if (!k_.letter_holds(*p, v)) return exact(false);
        return exact(true);
      }
      case K::Not: {
        EvalResult r = eval(tid, f.child());
        return {!r.value, r.budget_limited};
      }
      case K::And: {
        EvalResult a = eval(tid, f.child(0));
        if (!a.value) return a;
        EvalResult b = eval(tid, f.child(1));
        return {b.value, a.budget_limited || b.budget_limited};
      }
      case K::Or: {
        EvalResult a = eval(tid, f.child(0));
        if (a.value) return a;
        EvalResult b = eval(tid, f.child(1));
        return {b.value, a.budget_limited || b.budget_limited};
      }
      case K::Implies: {
        EvalResult a = eval(tid, f.child(0));
        if (!a.value) return {true, a.budget_limited};
        EvalResult b = eval(tid, f.child(1));
        return {b.value, a.budget_limited || b.budget_limited};
      }
      case K::Iff: {
        EvalResult a = eval(tid, f.child(0));
        EvalResult b = eval(tid, f.child(1));
        return {a.value == b.value, a.budget_limited || b.budget_limited};
      }
      case K::Diamond: return quantified(tid, f.mod(), f.child(), /*universal=*/false);
      case K::Box: return quantified(tid, f.mod(), f.child(), /*universal=*/true);
    }
    throw Error("unreachable");
  }

  // <X>g (universal=false) or [X]g (universal=true) on tracks_[tid].
  EvalResult quantified(int tid, Mod m, const Formula& g, bool universal) {
    // by value: interning below may grow tracks_ and move it
    const std::vector<StateId> rho = tracks_[tid];
    const bool want = !universal;  // witness polarity of g
    switch (m) {
      case Mod::B:
      case Mod::E: {
        EvalResult found = exact(false);
        int n = static_cast<int>(rho.size());
        for (int len = 1; len <= n - 1; ++len) {
          std::vector<StateId> part =
              m == Mod::B ? std::vector<StateId>(rho.begin(), rho.begin() + len)
                          : std::vector<StateId>(rho.end() - len, rho.end());
          EvalResult r = eval(track_id(part), g);
          if (r.value == want && !r.budget_limited)
            return universal ? exact(false) : exact(true);
          if (r.value == want) found = {true, true};
          found.budget_limited = found.budget_limited || r.budget_limited;
        }
        bool witness = found.value;
        return {universal ? !witness : witness, found.budget_limited};
      }
      case Mod::A: {
        EvalResult r = search(rho.back(), g, Direction::Forward, want);
        return {universal ? !r.value : r.value, r.budget_limited};
      }
      case Mod::Abar: {
        EvalResult r = search(rho.front(), g, Direction::Backward, want);
        return {universal ? !r.value : r.value, r.budget_limited};
      }
      case Mod::Bbar:
      case Mod::Ebar:
        throw FragmentError("the ~B/~E modalities are outside the supported fragments");
    }
    throw Error("unreachable");
  }

  // Exists a track of length <= budget anchored at v on which g evaluates
  // to `want`. Iterative deepening, so short witnesses are found first
  // and full exhaustion happens only on negative answers.
  EvalResult search(StateId v, const Formula& g, Direction dir, bool want) {
    std::uint64_t key = (static_cast<std::uint64_t>(sub_id(g)) << 32) |
                        (static_cast<std::uint64_t>(v) << 2) |
                        (static_cast<std::uint64_t>(dir == Direction::Backward) << 1) |
                        static_cast<std::uint64_t>(want);
    if (auto it = search_memo_.find(key); it != search_memo_.end())
      return {(it->second & 1) != 0, (it->second & 2) != 0};

    bool flagged_hit = false, inner_flag = false;
    std::vector<StateId> walk{v};

    // Walk order: forward tracks grow at the back; backward candidates
    // are walked over predecessor edges and reversed before evaluation.
    std::function<bool(long)> dfs = [&](long remaining) -> bool {
      if (remaining == 0) {
        std::vector<StateId> candidate = walk;
        if (dir == Direction::Backward) std::reverse(candidate.begin(), candidate.end());
        EvalResult r = eval(track_id(candidate), g);
        if (r.value == want && !r.budget_limited) return true;
        if (r.value == want) flagged_hit = true;
        inner_flag = inner_flag || r.budget_limited;
        return false;
      }
      const auto& next =
          dir == Direction::Forward ? k_.successors(walk.back()) : preds_[walk.back()];
      for (StateId w : next) {
        walk.push_back(w);
        bool hit = dfs(remaining - 1);
        walk.pop_back();
        if (hit) return true;
      }
      return false;
    };

    bool found_exact = false;
    for (long len = 1; len <= budget_ && !found_exact; ++len) found_exact = dfs(len - 1);

    EvalResult out;
    if (found_exact)
      out = exact(true);
    else if (flagged_hit)
      out = {true, true};
    else
      out = {false, !complete_ || inner_flag};
    search_memo_[key] =
        static_cast<int>(out.value) | (static_cast<int>(out.budget_limited) << 1);
    return out;
  }

  const KripkeStructure& k_;
  long budget_;
  bool complete_;
  std::vector<std::vector<StateId>> preds_;

  std::unordered_map<std::vector<StateId>, int, VecHash> track_ids_;
  std::vector<std::vector<StateId>> tracks_;
  std::unordered_map<Formula, int, FormulaHash> sub_ids_;
  std::unordered_map<std::uint64_t, int> memo_;
  std::unordered_map<std::uint64_t, int> search_memo_;
};

bool budget_is_complete(const KripkeStructure& k, const Formula& f, long budget) {
  return budget >= track_bound(k.num_states(), size(normalize(f)));
}

}  // namespace

EvalResult holds(const KripkeStructure& k, const Track& rho, const Formula& f,
                 const ExplorationBudget& budget) {
  if (&rho.owner() != &k)
    throw ValidationError("foreign-track", "track does not belong to this structure");
  BruteEvaluator ev(k, budget.max_track_length,
                    budget_is_complete(k, f, budget.max_track_length));
  return ev.eval_states(rho.states(), f);
}

EvalResult exists_track(const KripkeStructure& k, StateId v, const Formula& f,
                        Direction dir, const ExplorationBudget& budget) {
  BruteEvaluator ev(k, budget.max_track_length,
                    budget_is_complete(k, f, budget.max_track_length));
  return ev.exists(v, f, dir);
}

long default_exploration_cap(const KripkeStructure& k, const Formula& f) {
  NormalFormula neg = normalize(Formula::negation(f));
  long complete = track_bound(k.num_states(), size(neg));
  if (complete <= 24) return complete;  // small enough to exhaust outright
  long branching_x2 = 2 * k.num_edges() / std::max(1, k.num_states());
  long hi = branching_x2 > 4 ? 16 : 24;
  long practical = k.num_states() * (prefix_modal_depth(neg.formula()) + 2) + 4;
  return std::min(complete, std::clamp(practical, std::min<long>(10, hi), hi));
}

BruteVerdict brute_model_check(const KripkeStructure& k, const Formula& f,
                               long cap_override) {
  if (!fragment_of(f).checkable())
    throw FragmentError("formula outside the checkable fragments: " +
                        fragment_of(f).reason);

  Formula neg = Formula::negation(f);
  BruteVerdict verdict;
  verdict.complete_bound = track_bound(k.num_states(), size(normalize(neg)));
  verdict.bound_used =
      cap_override > 0 ? cap_override : default_exploration_cap(k, f);

  BruteEvaluator ev(k, verdict.bound_used,
                    verdict.bound_used >= verdict.complete_bound);

  bool any_flag = false;
  std::optional<std::vector<StateId>> flagged_candidate;
  std::vector<StateId> walk{k.initial()};

  // Shortest counterexamples first; an exact hit stops the whole scan.
  std::function<bool(long)> scan = [&](long remaining) -> bool {
    if (remaining == 0) {
      EvalResult r = ev.eval_states(walk, neg);
      if (r.value && !r.budget_limited) return true;
      if (r.value && !flagged_candidate) flagged_candidate = walk;
      any_flag = any_flag || r.budget_limited;
      return false;
    }
    for (StateId w : k.successors(walk.back())) {
      walk.push_back(w);
      bool hit = scan(remaining - 1);
      walk.pop_back();
      if (hit) return true;
    }
    return false;
  };

  bool found = false;
  for (long len = 1; len <= verdict.bound_used && !found; ++len) found = scan(len - 1);
  if (found) {
    verdict.satisfied = false;
    verdict.counterexample = Track(k, walk);
    return verdict;
  }
  if (flagged_candidate) {
    verdict.satisfied = false;
    verdict.counterexample = Track(k, *flagged_candidate);
    verdict.budget_limited = true;
    return verdict;
  }
  verdict.satisfied = true;
  verdict.budget_limited = verdict.bound_used < verdict.complete_bound || any_flag;
  return verdict;
}

}  // namespace hsmc
