#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hsmc/errors.hpp"

namespace hsmc {

/// Interval modalities the grammar knows: Meets (A) and Met-by (Abar),
/// Started-by (B) and Finished-by (E), plus their inverses Bbar/Ebar,
/// which parse fine but are rejected by the fragment gate.
enum class Mod { A, Abar, B, Bbar, E, Ebar };

std::string_view mod_name(Mod m);  // "A", "~A", "B", "~B", "E", "~E"

/// Immutable formula AST with value semantics. Nodes are shared; each
/// node caches its structural hash and node count, so equality tests are
/// cheap enough to key tables with.
class Formula {
 public:
  enum class Kind { Letter, True, False, Not, And, Or, Implies, Iff, Diamond, Box };

  static Formula letter(std::string name);
  static Formula verum();
  static Formula falsum();
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  static Formula implication(Formula a, Formula b);
  static Formula equivalence(Formula a, Formula b);
  static Formula diamond(Mod m, Formula f);
  static Formula box(Mod m, Formula f);

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }  // Letter only
  Mod mod() const { return node_->mod; }                   // Diamond/Box only
  int arity() const { return static_cast<int>(node_->kids.size()); }
  const Formula& child(int i = 0) const { return node_->kids[i]; }

  /// Number of AST nodes.
  int node_count() const { return node_->count; }

  std::size_t hash() const { return node_->hash; }
  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

  /// Parseable text form; to_string and parse_formula invert each other
  /// up to whitespace.
  std::string to_string() const;

 private:
  struct Node {
    Kind kind = Kind::True;
    Mod mod = Mod::A;
    std::string name;
    std::vector<Formula> kids;
    std::size_t hash = 0;
    int count = 1;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula build(Node n);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

/// A formula in the restricted shape the oracle works on: letters, truth
/// constants, negation, disjunction and existential modalities only.
class NormalFormula {
 public:
  /// Wraps a formula that is already in normal shape; throws
  /// ValidationError otherwise. normalize() is the usual producer.
  explicit NormalFormula(Formula f);

  const Formula& formula() const { return f_; }
  bool operator==(const NormalFormula& o) const { return f_ == o.f_; }

 private:
  Formula f_;
};

/// Parses the ASCII formula grammar. Precedence, tightest first:
/// ~ and modalities, &, |, -> (right associative), <->. Modalities are
/// written <A> <~A> <B> <~B> <E> <~E> and [A] [~A] ... ; `<E>^k f`
/// abbreviates k nested <E> (same for the other modalities).
Formula parse_formula(std::string_view text);

/// Rewrites conjunctions, implications, equivalences and universal
/// modalities away:
///   a & b   ->  ~(~a | ~b)
///   a -> b  ->  ~a | b
///   a <-> b ->  normalize((a -> b) & (b -> a))
///   [X] a   ->  ~<X>~a
/// No double negations are simplified beyond what the rewrites produce,
/// so the node count of the result is a deterministic formula measure.
NormalFormula normalize(const Formula& f);

/// Node count of the normal form; the formula size every search bound
/// in the checker is computed from.
int size(const NormalFormula& f);

/// Fragment classification by the prefix modalities occurring in the
/// formula. A and Abar are always allowed; mixing B and E is not
/// checkable here.
struct Fragment {
  enum class Kind { AAbarB, AAbarE, AAbar, Unsupported };
  Kind kind;
  std::string reason;  // set for Unsupported

  bool checkable() const { return kind != Kind::Unsupported; }
};

Fragment fragment_of(const Formula& f);

/// The A/Abar-rooted subformulas not nested under any A/Abar modality:
/// the recursion frontier of the checker. Deduplicated structurally, in
/// deterministic left-to-right order.
std::vector<NormalFormula> mods(const NormalFormula& f);

/// Swaps B with E and A with Abar at every modality. Maps the fragment
/// AAbarB onto AAbarE and back; involutive.
Formula mirror(const Formula& f);

/// Maximum nesting depth of B/E modalities; a cheap yardstick for how
/// long a satisfying track must be.
int prefix_modal_depth(const Formula& f);

}  // namespace hsmc
