#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hsmc {

/// Fixed-width bit vector. Backs both state label sets and the truth
/// columns of the track oracle, which get hashed heavily during the
/// configuration search.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

  int size() const { return nbits_; }

  bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

  void set(int i, bool v = true) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  void set_all() {
    for (int i = 0; i < nbits_; ++i) set(i);
  }

  int count() const {
    int n = 0;
    for (std::uint64_t w : words_) n += __builtin_popcountll(w);
    return n;
  }

  bool none() const {
    for (std::uint64_t w : words_)
      if (w) return false;
    return true;
  }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }

  bool subset_of(const Bitset& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }

  bool operator==(const Bitset& o) const = default;

  std::size_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t w : words_) {
      h ^= w;
      h *= 1099511628211ull;
    }
    h ^= static_cast<std::uint64_t>(nbits_);
    h *= 1099511628211ull;
    return static_cast<std::size_t>(h);
  }

 private:
  int nbits_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitsetHash {
  std::size_t operator()(const Bitset& b) const { return b.hash(); }
};

}  // namespace hsmc
