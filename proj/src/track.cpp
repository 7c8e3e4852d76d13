#include "hsmc/track.hpp"

#include <sstream>

namespace hsmc {

Track::Track(const KripkeStructure& k, std::vector<StateId> states)
    : owner_(&k), states_(std::move(states)) {
  if (states_.empty())
    throw ValidationError("empty-track", "a track needs at least one state");
  for (StateId v : states_)
    if (v < 0 || v >= k.num_states())
      throw ValidationError("unknown-state", "track state id out of range");
  for (std::size_t i = 0; i + 1 < states_.size(); ++i)
    if (!k.has_edge(states_[i], states_[i + 1]))
      throw ValidationError("not-an-edge",
                            "track step " + k.state_name(states_[i]) + "->" +
                                k.state_name(states_[i + 1]) + " is not an edge");
}

StateId Track::at(int i) const {
  if (i < 1 || i > length())
    throw IndexError("track position " + std::to_string(i) + " outside 1.." +
                     std::to_string(length()));
  return states_[i - 1];
}

Track Track::subtrack(int i, int j) const {
  if (i < 1 || j < i || j > length())
    throw IndexError("subtrack bounds (" + std::to_string(i) + "," + std::to_string(j) +
                     ") outside 1.." + std::to_string(length()));
  return Track(*owner_, {states_.begin() + (i - 1), states_.begin() + j});
}

std::vector<Track> Track::prefixes() const {
  std::vector<Track> out;
  for (int i = 1; i <= length() - 1; ++i) out.push_back(subtrack(1, i));
  return out;
}

std::vector<Track> Track::suffixes() const {
  std::vector<Track> out;
  for (int i = 2; i <= length(); ++i) out.push_back(subtrack(i, length()));
  return out;
}

Track Track::reversed_onto(const KripkeStructure& k) const {
  std::vector<StateId> rev(states_.rbegin(), states_.rend());
  return Track(k, std::move(rev));
}

std::string Track::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (i) out << ' ';
    out << owner_->state_name(states_[i]);
  }
  return out.str();
}

Bitset induced_label(const Track& rho) {
  Bitset acc = rho.owner().label(rho.fst());
  for (StateId v : rho.states()) acc &= rho.owner().label(v);
  return acc;
}

}  // namespace hsmc
