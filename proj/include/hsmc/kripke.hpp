#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hsmc/bitset.hpp"
#include "hsmc/errors.hpp"

namespace hsmc {

using StateId = int;
using LetterId = int;

/// Search direction of a track query: Forward anchors the first state of
/// the track, Backward anchors the last one.
enum class Direction { Forward, Backward };

/// A finite Kripke structure: proposition letters, states, a left-total
/// edge relation, a labelling of states with letter sets, and an initial
/// state. State and letter names are interned to dense integer ids at
/// construction time; label sets are bit vectors over the alphabet.
///
/// Instances are immutable after construction and can be shared freely
/// across threads.
class KripkeStructure {
 public:
  struct Spec {
    std::vector<std::string> letters;  // deduced from labels when empty
    std::vector<std::string> states;
    std::string initial;
    // one entry per labelled state; states without an entry get the empty set
    std::vector<std::pair<std::string, std::vector<std::string>>> labels;
    std::vector<std::pair<std::string, std::string>> edges;
  };

  /// Builds and validates a structure. Throws ValidationError with code
  /// "unknown-state", "label-outside-ap", "not-left-total", or
  /// "duplicate-name" when an invariant fails.
  static KripkeStructure make(const Spec& spec);

  int num_states() const { return static_cast<int>(states_.size()); }
  int num_letters() const { return static_cast<int>(letters_.size()); }
  long num_edges() const { return num_edges_; }
  StateId initial() const { return initial_; }

  /// Successor ids in ascending order.
  const std::vector<StateId>& successors(StateId v) const { return succ_[v]; }
  bool has_edge(StateId a, StateId b) const;

  const Bitset& label(StateId v) const { return labels_[v]; }
  bool letter_holds(LetterId p, StateId v) const { return labels_[v].test(p); }

  const std::string& state_name(StateId v) const { return states_[v]; }
  const std::string& letter_name(LetterId p) const { return letters_[p]; }
  std::optional<StateId> state_id(std::string_view name) const;
  std::optional<LetterId> letter_id(std::string_view name) const;

  /// Same states and labels, every edge reversed, initial state kept.
  /// The result may violate left-totality; it is meant only to drive
  /// backward track searches and is not re-validated.
  KripkeStructure transposed() const;

  /// Structural identity: same state sequence, same alphabet as a set,
  /// same labelling, edge set, and initial state (all compared by name).
  bool operator==(const KripkeStructure& o) const;

 private:
  KripkeStructure() = default;

  std::vector<std::string> letters_;
  std::vector<std::string> states_;
  std::vector<std::vector<StateId>> succ_;
  std::vector<Bitset> labels_;
  StateId initial_ = 0;
  long num_edges_ = 0;
};

/// Re-checks every structure invariant, including left-totality (which
/// transposed structures may break). Throws ValidationError.
void validate(const KripkeStructure& k);

/// Parses the line-oriented structure format:
///
///   kripke
///   states: <id> <id> ...
///   init: <id>
///   label <id>: <letter> ...     (empty letter list allowed)
///   edges: <id>-><id> ...        (repeatable)
///
/// '#' starts a comment. Identifiers match [A-Za-z_][A-Za-z0-9_]*.
KripkeStructure parse_kripke(std::string_view text);

/// Serializes in the same format; parse_kripke(to_text(k)) == k.
std::string to_text(const KripkeStructure& k);

}  // namespace hsmc
