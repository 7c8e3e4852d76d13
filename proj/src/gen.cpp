#include "hsmc/gen.hpp"

#include <set>

namespace hsmc {

namespace {

long pick(Rng& rng, long n) { return static_cast<long>(rng() % static_cast<unsigned long>(n)); }

}  // namespace

KripkeStructure random_kripke(Rng& rng, const KripkeGenOptions& opt) {
  int n = opt.min_states + static_cast<int>(pick(rng, opt.max_states - opt.min_states + 1));
  KripkeStructure::Spec spec;
  for (int i = 0; i < n; ++i) spec.states.push_back("s" + std::to_string(i));
  spec.initial = "s0";
  spec.letters = opt.letters;

  std::set<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.insert({i, static_cast<int>(pick(rng, n))});
  int budget = std::max(n, opt.max_edges);
  int extra = static_cast<int>(pick(rng, budget - static_cast<int>(edges.size()) + 1));
  for (int t = 0; t < extra; ++t)
    edges.insert({static_cast<int>(pick(rng, n)), static_cast<int>(pick(rng, n))});
  for (auto [a, b] : edges)
    spec.edges.push_back({spec.states[a], spec.states[b]});

  for (int i = 0; i < n; ++i) {
    std::vector<std::string> label;
    for (const auto& p : opt.letters)
      if (pick(rng, 2)) label.push_back(p);
    spec.labels.push_back({spec.states[i], label});
  }
  return KripkeStructure::make(spec);
}

namespace {

Formula gen_formula(Rng& rng, const FormulaGenOptions& opt, int budget, int depth) {
  auto leaf = [&]() -> Formula {
    long roll = pick(rng, 10);
    if (roll < 7 && !opt.letters.empty())
      return Formula::letter(opt.letters[pick(rng, opt.letters.size())]);
    return roll % 2 == 0 ? Formula::verum() : Formula::falsum();
  };
  if (budget <= 1) return leaf();

  std::vector<Mod> mods;
  if (depth < opt.max_modal_depth) {
    if (opt.use_a) mods.push_back(Mod::A);
    if (opt.use_abar) mods.push_back(Mod::Abar);
    if (opt.use_b) mods.push_back(Mod::B);
    if (opt.use_e) mods.push_back(Mod::E);
  }

  long roll = pick(rng, 100);
  if (roll < 20) return leaf();
  if (roll < 35) return Formula::negation(gen_formula(rng, opt, budget - 1, depth));
  if (roll < 65 && !mods.empty()) {
    Mod m = mods[pick(rng, mods.size())];
    Formula body = gen_formula(rng, opt, budget - 1, depth + 1);
    return pick(rng, 2) ? Formula::diamond(m, std::move(body))
                        : Formula::box(m, std::move(body));
  }
  int left = 1 + static_cast<int>(pick(rng, std::max(1, budget - 2)));
  Formula a = gen_formula(rng, opt, left, depth);
  Formula b = gen_formula(rng, opt, budget - 1 - left, depth);
  switch (pick(rng, 4)) {
    case 0: return Formula::conjunction(std::move(a), std::move(b));
    case 1: return Formula::disjunction(std::move(a), std::move(b));
    case 2: return Formula::implication(std::move(a), std::move(b));
    default: return Formula::equivalence(std::move(a), std::move(b));
  }
}

}  // namespace

Formula random_formula(Rng& rng, const FormulaGenOptions& opt) {
  return gen_formula(rng, opt, std::max(1, opt.max_size), 0);
}

}  // namespace hsmc
