#pragma once

#include <random>
#include <string>
#include <vector>

#include "hsmc/formula.hpp"
#include "hsmc/kripke.hpp"

namespace hsmc {

using Rng = std::mt19937_64;

struct KripkeGenOptions {
  int min_states = 1;
  int max_states = 3;
  int max_edges = 6;  // counting the edges added for left-totality
  std::vector<std::string> letters = {"p", "q"};
};

/// Random left-total structure; state 0 is initial. Deterministic for a
/// given seed (no std::*_distribution involved).
KripkeStructure random_kripke(Rng& rng, const KripkeGenOptions& opt);

struct FormulaGenOptions {
  int max_size = 8;         // raw node-count budget
  int max_modal_depth = 3;  // nesting cap over all modalities
  bool use_a = true;
  bool use_abar = true;
  bool use_b = true;
  bool use_e = false;
  std::vector<std::string> letters = {"p", "q"};
};

Formula random_formula(Rng& rng, const FormulaGenOptions& opt);

}  // namespace hsmc
