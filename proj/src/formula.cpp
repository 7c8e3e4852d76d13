#include "hsmc/formula.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace hsmc {

std::string_view mod_name(Mod m) {
  switch (m) {
    case Mod::A: return "A";
    case Mod::Abar: return "~A";
    case Mod::B: return "B";
    case Mod::Bbar: return "~B";
    case Mod::E: return "E";
    case Mod::Ebar: return "~E";
  }
  return "?";
}

Formula Formula::build(Node n) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](std::uint64_t x) {
    h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  mix(static_cast<std::uint64_t>(n.kind));
  mix(static_cast<std::uint64_t>(n.mod));
  mix(std::hash<std::string>{}(n.name));
  int count = 1;
  for (const Formula& k : n.kids) {
    mix(k.hash());
    count += k.node_count();
  }
  n.hash = static_cast<std::size_t>(h);
  n.count = count;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::letter(std::string name) {
  Node n;
  n.kind = Kind::Letter;
  n.name = std::move(name);
  return build(std::move(n));
}

Formula Formula::verum() {
  Node n;
  n.kind = Kind::True;
  return build(std::move(n));
}

Formula Formula::falsum() {
  Node n;
  n.kind = Kind::False;
  return build(std::move(n));
}

Formula Formula::negation(Formula f) {
  Node n;
  n.kind = Kind::Not;
  n.kids = {std::move(f)};
  return build(std::move(n));
}

Formula Formula::conjunction(Formula a, Formula b) {
  Node n;
  n.kind = Kind::And;
  n.kids = {std::move(a), std::move(b)};
  return build(std::move(n));
}

Formula Formula::disjunction(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Or;
  n.kids = {std::move(a), std::move(b)};
  return build(std::move(n));
}

Formula Formula::implication(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Implies;
  n.kids = {std::move(a), std::move(b)};
  return build(std::move(n));
}

Formula Formula::equivalence(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Iff;
  n.kids = {std::move(a), std::move(b)};
  return build(std::move(n));
}

Formula Formula::diamond(Mod m, Formula f) {
  Node n;
  n.kind = Kind::Diamond;
  n.mod = m;
  n.kids = {std::move(f)};
  return build(std::move(n));
}

Formula Formula::box(Mod m, Formula f) {
  Node n;
  n.kind = Kind::Box;
  n.mod = m;
  n.kids = {std::move(f)};
  return build(std::move(n));
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (node_->hash != o.node_->hash || node_->kind != o.node_->kind ||
      node_->count != o.node_->count || node_->mod != o.node_->mod ||
      node_->name != o.node_->name || node_->kids.size() != o.node_->kids.size())
    return false;
  for (std::size_t i = 0; i < node_->kids.size(); ++i)
    if (node_->kids[i] != o.node_->kids[i]) return false;
  return true;
}

namespace {

// Precedence levels for printing: <-> 0, -> 1, | 2, & 3, unary 4, atom 5.
int print_level(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Iff: return 0;
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    case Formula::Kind::Not:
    case Formula::Kind::Diamond:
    case Formula::Kind::Box: return 4;
    default: return 5;
  }
}

void print(std::ostream& out, const Formula& f, int min_level) {
  int level = print_level(f);
  if (level < min_level) {
    out << '(';
    print(out, f, 0);
    out << ')';
    return;
  }
  switch (f.kind()) {
    case Formula::Kind::Letter: out << f.name(); break;
    case Formula::Kind::True: out << "true"; break;
    case Formula::Kind::False: out << "false"; break;
    case Formula::Kind::Not:
      out << '~';
      print(out, f.child(), 4);
      break;
    case Formula::Kind::Diamond:
      out << '<' << mod_name(f.mod()) << '>';
      print(out, f.child(), 4);
      break;
    case Formula::Kind::Box:
      out << '[' << mod_name(f.mod()) << ']';
      print(out, f.child(), 4);
      break;
    case Formula::Kind::And:
      print(out, f.child(0), 3);
      out << " & ";
      print(out, f.child(1), 4);
      break;
    case Formula::Kind::Or:
      print(out, f.child(0), 2);
      out << " | ";
      print(out, f.child(1), 3);
      break;
    case Formula::Kind::Implies:
      print(out, f.child(0), 2);
      out << " -> ";
      print(out, f.child(1), 1);
      break;
    case Formula::Kind::Iff:
      print(out, f.child(0), 0);
      out << " <-> ";
      print(out, f.child(1), 1);
      break;
  }
}

}  // namespace

std::string Formula::to_string() const {
  std::ostringstream out;
  print(out, *this, 0);
  return out.str();
}

NormalFormula::NormalFormula(Formula f) : f_(std::move(f)) {
  std::function<void(const Formula&)> check = [&](const Formula& g) {
    switch (g.kind()) {
      case Formula::Kind::Letter:
      case Formula::Kind::True:
      case Formula::Kind::False: return;
      case Formula::Kind::Not:
      case Formula::Kind::Diamond:
        check(g.child());
        return;
      case Formula::Kind::Or:
        check(g.child(0));
        check(g.child(1));
        return;
      default:
        throw ValidationError("not-normal",
                              "formula is not in normal shape: " + g.to_string());
    }
  };
  check(f_);
}

namespace {

Formula norm(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Letter:
    case K::True:
    case K::False: return f;
    case K::Not: return Formula::negation(norm(f.child()));
    case K::Or: return Formula::disjunction(norm(f.child(0)), norm(f.child(1)));
    case K::And:
      return Formula::negation(Formula::disjunction(
          Formula::negation(norm(f.child(0))), Formula::negation(norm(f.child(1)))));
    case K::Implies:
      return Formula::disjunction(Formula::negation(norm(f.child(0))), norm(f.child(1)));
    case K::Iff:
      return norm(Formula::conjunction(
          Formula::implication(f.child(0), f.child(1)),
          Formula::implication(f.child(1), f.child(0))));
    case K::Diamond: return Formula::diamond(f.mod(), norm(f.child()));
    case K::Box:
      return Formula::negation(
          Formula::diamond(f.mod(), Formula::negation(norm(f.child()))));
  }
  throw Error("unreachable");
}

}  // namespace

NormalFormula normalize(const Formula& f) { return NormalFormula(norm(f)); }

int size(const NormalFormula& f) { return f.formula().node_count(); }

Fragment fragment_of(const Formula& f) {
  bool has_b = false, has_e = false, has_bbar = false, has_ebar = false;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Diamond || g.kind() == Formula::Kind::Box) {
      switch (g.mod()) {
        case Mod::B: has_b = true; break;
        case Mod::E: has_e = true; break;
        case Mod::Bbar: has_bbar = true; break;
        case Mod::Ebar: has_ebar = true; break;
        default: break;
      }
    }
    for (int i = 0; i < g.arity(); ++i) walk(g.child(i));
  };
  walk(f);
  if (has_bbar) return {Fragment::Kind::Unsupported, "uses the ~B modality"};
  if (has_ebar) return {Fragment::Kind::Unsupported, "uses the ~E modality"};
  if (has_b && has_e) return {Fragment::Kind::Unsupported, "mixes B and E"};
  if (has_b) return {Fragment::Kind::AAbarB, ""};
  if (has_e) return {Fragment::Kind::AAbarE, ""};
  return {Fragment::Kind::AAbar, ""};
}

std::vector<NormalFormula> mods(const NormalFormula& f) {
  std::vector<NormalFormula> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g.kind() == Formula::Kind::Diamond &&
        (g.mod() == Mod::A || g.mod() == Mod::Abar)) {
      for (const NormalFormula& seen : out)
        if (seen.formula() == g) return;
      out.push_back(NormalFormula(g));
      return;  // nothing below is outside the scope of A/Abar
    }
    for (int i = 0; i < g.arity(); ++i) walk(g.child(i));
  };
  walk(f.formula());
  return out;
}

Formula mirror(const Formula& f) {
  using K = Formula::Kind;
  auto flip = [](Mod m) {
    switch (m) {
      case Mod::A: return Mod::Abar;
      case Mod::Abar: return Mod::A;
      case Mod::B: return Mod::E;
      case Mod::E: return Mod::B;
      case Mod::Bbar: return Mod::Ebar;
      case Mod::Ebar: return Mod::Bbar;
    }
    return m;
  };
  switch (f.kind()) {
    case K::Letter:
    case K::True:
    case K::False: return f;
    case K::Not: return Formula::negation(mirror(f.child()));
    case K::And: return Formula::conjunction(mirror(f.child(0)), mirror(f.child(1)));
    case K::Or: return Formula::disjunction(mirror(f.child(0)), mirror(f.child(1)));
    case K::Implies:
      return Formula::implication(mirror(f.child(0)), mirror(f.child(1)));
    case K::Iff: return Formula::equivalence(mirror(f.child(0)), mirror(f.child(1)));
    case K::Diamond: return Formula::diamond(flip(f.mod()), mirror(f.child()));
    case K::Box: return Formula::box(flip(f.mod()), mirror(f.child()));
  }
  throw Error("unreachable");
}

int prefix_modal_depth(const Formula& f) {
  int here = 0;
  if ((f.kind() == Formula::Kind::Diamond || f.kind() == Formula::Kind::Box) &&
      (f.mod() == Mod::B || f.mod() == Mod::E || f.mod() == Mod::Bbar ||
       f.mod() == Mod::Ebar))
    here = 1;
  int deepest = 0;
  for (int i = 0; i < f.arity(); ++i)
    deepest = std::max(deepest, prefix_modal_depth(f.child(i)));
  return here + deepest;
}

}  // namespace hsmc
