#include <random>

#include "doctest.h"
#include "hsmc/gen.hpp"
#include "hsmc/semantics.hpp"
#include "test_util.hpp"

using namespace hsmc;
using testutil::all_tracks;
using testutil::k2;
using testutil::track_of;

namespace {
const ExplorationBudget kBudget{14};
}

TEST_CASE("witness-length bound arithmetic") {
  CHECK(track_bound(2, 3) == 98);
  CHECK(track_bound(1, 1) == 9);
  CHECK(track_bound(7, 10) == 3087);
}

TEST_CASE("letters and prefix modalities on the two-state structure") {
  KripkeStructure k = k2();
  CHECK(holds(k, track_of(k, {"v0"}), parse_formula("p"), kBudget).value);
  CHECK_FALSE(holds(k, track_of(k, {"v0"}), parse_formula("q"), kBudget).value);
  CHECK(holds(k, track_of(k, {"v0", "v1"}), parse_formula("<B>p"), kBudget).value);
  CHECK_FALSE(holds(k, track_of(k, {"v0", "v1"}), parse_formula("<B>q"), kBudget).value);
}

TEST_CASE("the length-two formula holds exactly on length-two tracks") {
  Formula len2 = parse_formula("<B>true & [B][B]false");
  KripkeStructure k = k2();
  for (const Track& rho : all_tracks(k, 4)) {
    EvalResult r = holds(k, rho, len2, kBudget);
    CHECK(r.value == (rho.length() == 2));
    CHECK_FALSE(r.budget_limited);
  }
}

TEST_CASE("zero budgets are rejected") {
  KripkeStructure k = k2();
  CHECK_THROWS_AS(holds(k, track_of(k, {"v0"}), parse_formula("p"), ExplorationBudget{0}),
                  BudgetError);
}

TEST_CASE("reference model check on the two-state structure") {
  KripkeStructure k = k2();

  BruteVerdict yes = brute_model_check(k, parse_formula("[B] false -> p"));
  CHECK(yes.satisfied);

  BruteVerdict no = brute_model_check(k, parse_formula("[B] false -> q"));
  CHECK_FALSE(no.satisfied);
  REQUIRE(no.counterexample.has_value());
  CHECK(no.counterexample->states() == std::vector<StateId>{*k.state_id("v0")});

  CHECK(brute_model_check(k, parse_formula("true")).satisfied);
  CHECK_THROWS_AS(brute_model_check(k, parse_formula("<B><E>p")), FragmentError);
}

TEST_CASE("universal modalities are dual to existential ones") {
  std::mt19937_64 rng(23);
  KripkeGenOptions kopt;
  FormulaGenOptions fopt;
  fopt.max_size = 5;
  fopt.max_modal_depth = 2;
  Mod all_mods[4] = {Mod::A, Mod::Abar, Mod::B, Mod::E};

  for (int iter = 0; iter < 60; ++iter) {
    KripkeStructure k = random_kripke(rng, kopt);
    Formula body = random_formula(rng, fopt);
    Mod m = all_mods[rng() % 4];
    Formula boxed = Formula::box(m, body);
    Formula dual = Formula::negation(Formula::diamond(m, Formula::negation(body)));
    for (const Track& rho : all_tracks(k, 3)) {
      EvalResult a = holds(k, rho, boxed, kBudget);
      EvalResult b = holds(k, rho, dual, kBudget);
      CHECK(a.value == b.value);
    }
  }
}

TEST_CASE("a satisfied prefix forces the started-by diamond") {
  std::mt19937_64 rng(29);
  KripkeGenOptions kopt;
  FormulaGenOptions fopt;
  fopt.max_size = 4;
  for (int iter = 0; iter < 80; ++iter) {
    KripkeStructure k = random_kripke(rng, kopt);
    Formula f = random_formula(rng, fopt);
    for (const Track& rho : all_tracks(k, 4)) {
      if (rho.length() < 2) continue;
      bool prefix_hit = false;
      for (const Track& pre : rho.prefixes())
        if (holds(k, pre, f, kBudget).value) prefix_hit = true;
      if (prefix_hit) CHECK(holds(k, rho, Formula::diamond(Mod::B, f), kBudget).value);
      bool suffix_hit = false;
      for (const Track& suf : rho.suffixes())
        if (holds(k, suf, f, kBudget).value) suffix_hit = true;
      if (suffix_hit) CHECK(holds(k, rho, Formula::diamond(Mod::E, f), kBudget).value);
    }
  }
}

TEST_CASE("letter truth equals induced-label membership") {
  std::mt19937_64 rng(31);
  KripkeGenOptions kopt;
  for (int iter = 0; iter < 30; ++iter) {
    KripkeStructure k = random_kripke(rng, kopt);
    for (const Track& rho : all_tracks(k, 4)) {
      Bitset lab = induced_label(rho);
      for (int p = 0; p < k.num_letters(); ++p) {
        Formula letter = Formula::letter(k.letter_name(p));
        CHECK(holds(k, rho, letter, kBudget).value == lab.test(p));
      }
    }
  }
}

TEST_CASE("normalization preserves the semantics") {
  std::mt19937_64 rng(37);
  KripkeGenOptions kopt;
  FormulaGenOptions fopt;
  fopt.max_size = 8;
  fopt.use_e = true;  // any mix is fine for plain track evaluation
  for (int iter = 0; iter < 120; ++iter) {
    KripkeStructure k = random_kripke(rng, kopt);
    Formula f = random_formula(rng, fopt);
    Formula norm = normalize(f).formula();
    for (const Track& rho : all_tracks(k, 4)) {
      CHECK(holds(k, rho, f, kBudget).value == holds(k, rho, norm, kBudget).value);
    }
  }
}

TEST_CASE("anchored existential searches respect the anchor") {
  KripkeStructure k = k2();
  // every track through v0 loses q from its induced label
  CHECK_FALSE(
      exists_track(k, *k.state_id("v0"), parse_formula("q"), Direction::Forward, kBudget)
          .value);
  CHECK(exists_track(k, *k.state_id("v0"), parse_formula("p"), Direction::Forward, kBudget)
            .value);
  // but a track from v0 can reach one whose prefix carries q
  CHECK(exists_track(k, *k.state_id("v0"), parse_formula("<A><B>q"), Direction::Forward,
                     kBudget)
            .value);
  // backward: some track ending at v0 has a q prefix (v1 v0)
  CHECK(exists_track(k, *k.state_id("v0"), parse_formula("<B>q"), Direction::Backward, kBudget)
            .value);
}

TEST_CASE("budget-limited results are flagged") {
  KripkeStructure k = k2();
  // needs a 3-step witness from v0 but the budget stops at 2
  Formula f = parse_formula("<A>(<B><B>p)");
  EvalResult tight = holds(k, track_of(k, {"v0"}), f, ExplorationBudget{2});
  CHECK_FALSE(tight.value);
  CHECK(tight.budget_limited);
  EvalResult wide = holds(k, track_of(k, {"v0"}), f, ExplorationBudget{14});
  CHECK(wide.value);
  CHECK_FALSE(wide.budget_limited);
}
