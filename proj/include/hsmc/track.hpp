#pragma once

#include <string>
#include <vector>

#include "hsmc/kripke.hpp"

namespace hsmc {

/// A nonempty finite path of a Kripke structure. Indexing is 1-based
/// throughout, matching the usual interval-logic convention, so the
/// prefix/suffix bookkeeping of the oracle transcribes directly.
///
/// A Track keeps a pointer to its owning structure; the structure must
/// outlive the track. Tracks are immutable values.
class Track {
 public:
  /// Validates that the sequence is nonempty, every id is in range and
  /// consecutive pairs are edges of `k`. Throws ValidationError.
  Track(const KripkeStructure& k, std::vector<StateId> states);

  const KripkeStructure& owner() const { return *owner_; }
  int length() const { return static_cast<int>(states_.size()); }

  StateId fst() const { return states_.front(); }
  StateId lst() const { return states_.back(); }

  /// 1-based state access; throws IndexError outside 1..length().
  StateId at(int i) const;

  /// Subtrack bounded by 1-based positions i..j inclusive.
  Track subtrack(int i, int j) const;

  /// All proper prefixes (length 1 .. length()-1), shortest first.
  std::vector<Track> prefixes() const;
  /// All proper suffixes (length length()-1 .. 1), longest first.
  std::vector<Track> suffixes() const;

  const std::vector<StateId>& states() const { return states_; }

  /// Track over the same owner with the state sequence reversed. Only
  /// meaningful when the owner's edge relation makes the reverse a path
  /// (e.g. tracks of a transposed structure); validated like any track.
  Track reversed_onto(const KripkeStructure& k) const;

  bool operator==(const Track& o) const { return states_ == o.states_; }

  std::string to_string() const;

 private:
  const KripkeStructure* owner_;
  std::vector<StateId> states_;
};

/// Intersection of the labels of all states of the track: the letter set
/// the track carries under the homogeneity principle.
Bitset induced_label(const Track& rho);

}  // namespace hsmc
