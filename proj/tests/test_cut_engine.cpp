#include "dynstore/cut_engine.hpp"

#include <doctest.h>

#include <random>

using namespace dynstore;

namespace {

NetworkConfig two_class(int n1, int n2, int k, Rational beta1, Rational beta2 = 1) {
  NetworkConfig cfg;
  cfg.n1 = n1;
  cfg.n2 = n2;
  cfg.beta1 = std::move(beta1);
  cfg.beta2 = std::move(beta2);
  cfg.k_prime = k;
  return cfg;
}

std::vector<NodeId> id_selection(int k) {
  std::vector<NodeId> selection;
  for (NodeId v = 1; v <= k; ++v) selection.push_back(v);
  return selection;
}

// Independent oracle for the exact average min cut: the selected low
// positions are the a largest low positions, and the expected number of
// high nodes after the m-th most recent low node is m*n1/(n2+1) by the
// order statistics of a uniform n2-subset of [n]. Summing over m gives
// E[offset] = n1 * a(a+1) / (2(n2+1)).
Rational expected_average_offset(const NetworkConfig& cfg) {
  const int a = cfg.min_low_selected();
  return Rational(cfg.n1) * a * (a + 1) / (2 * (cfg.n2 + 1));
}

} // namespace

TEST_CASE("cut accumulation on reference configs") {
  const WeightRule star = WeightRule::star();

  const NetworkConfig a = preset_cfg_a();
  const Permutation id20 = Permutation::identity(20);
  CHECK(cut_value(a, star, id20, id_selection(13)) == 214);
  CHECK(cut_value(a, WeightRule::fixed_cost(Rational(1, 20)), id20, id_selection(13)) ==
        Rational(865, 4));

  const NetworkConfig b = preset_cfg_b();
  const Permutation pi({3, 4, 5, 1, 2});
  CHECK(cut_value(b, star, pi, {1, 2, 4, 5}) == 15);
}

TEST_CASE("cut accumulation validates its inputs") {
  const NetworkConfig b = preset_cfg_b();
  const WeightRule star = WeightRule::star();
  const Permutation id = Permutation::identity(5);
  CHECK_THROWS(cut_value(b, star, id, {1, 2, 3}));       // wrong size
  CHECK_THROWS(cut_value(b, star, id, {1, 1, 2, 3}));    // repeated
  CHECK_THROWS(cut_value(b, star, id, {1, 2, 3, 9}));    // out of range
  CHECK_THROWS(cut_value(b, star, Permutation::identity(4), {1, 2, 3, 4}));
  NetworkConfig capped = b;
  capped.alpha = 3;
  CHECK_THROWS(cut_value(capped, star, id, {1, 2, 3, 4}));
}

TEST_CASE("selected low nodes failing no later than a node") {
  const NetworkConfig a = preset_cfg_a();
  CHECK(selected_low_preceding(a, Permutation::identity(20), id_selection(13), 1) == 0);

  const NetworkConfig b = preset_cfg_b();
  const Permutation pi({3, 4, 5, 1, 2});
  CHECK(selected_low_preceding(b, pi, {1, 2, 4, 5}, 1) == 2);
  // A selected low node counts itself.
  CHECK(selected_low_preceding(b, Permutation::identity(5), {1, 2, 4, 5}, 4) == 1);
  CHECK_THROWS(selected_low_preceding(b, pi, {1, 2, 4, 5}, 3));
}

TEST_CASE("minimizing selections") {
  const NetworkConfig a = preset_cfg_a();
  const WeightRule star = WeightRule::star();
  const Permutation id20 = Permutation::identity(20);

  SUBCASE("exhaustive scan returns the lexicographically smallest optimum") {
    const CutReport report = min_cut(a, star, id20, SelectionMode::Exhaustive);
    CHECK(report.value == 214);
    CHECK(report.selection == id_selection(13));
  }

  SUBCASE("policy mode takes all high nodes plus the freshest low nodes") {
    const CutReport report = min_cut(a, star, id20, SelectionMode::Policy);
    CHECK(report.value == 214);
    CHECK(report.selection ==
          std::vector<NodeId>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 18, 19, 20});
  }

  SUBCASE("small config, identity and shifted permutations") {
    const NetworkConfig b = preset_cfg_b();
    CHECK(min_cut(b, star, Permutation::identity(5), SelectionMode::Exhaustive).value == 11);
    CHECK(min_cut(b, star, Permutation({3, 4, 5, 1, 2}), SelectionMode::Exhaustive).value == 15);
    CHECK(min_cut(b, star, Permutation({3, 4, 5, 1, 2}), SelectionMode::Policy).value == 15);
  }

  SUBCASE("policy mode rejects inadmissible rules") {
    CHECK_THROWS(min_cut(a, WeightRule::fixed_cost(Rational(1, 17)), id20,
                         SelectionMode::Policy));
  }
}

TEST_CASE("maximizing selections") {
  const WeightRule star = WeightRule::star();
  const NetworkConfig b = preset_cfg_b();
  const Permutation id5 = Permutation::identity(5);

  SUBCASE("policy takes all low nodes plus the freshest high nodes") {
    const CutReport report = max_cut(b, star, id5, SelectionMode::Policy);
    CHECK(report.value == 14);
    CHECK(report.selection == std::vector<NodeId>{2, 3, 4, 5});
  }

  SUBCASE("exhaustive agrees on the value") {
    const CutReport report = max_cut(b, star, id5, SelectionMode::Exhaustive);
    CHECK(report.value == 14);
    CHECK(report.selection == std::vector<NodeId>{1, 3, 4, 5}); // lex-smallest tie
  }

  SUBCASE("uniform bandwidths collapse max to min") {
    const NetworkConfig uniform = two_class(2, 2, 3, 1);
    for_each_permutation(4, [&](const Permutation& pi) {
      CHECK(max_cut(uniform, star, pi, SelectionMode::Exhaustive).value ==
            min_cut(uniform, star, pi, SelectionMode::Exhaustive).value);
    });
  }

  SUBCASE("identity value equals the state-aware constant") {
    const NetworkConfig a = preset_cfg_a();
    CHECK(max_cut(a, star, Permutation::identity(20), SelectionMode::Policy).value ==
          static_memory_cut(a));
  }

  SUBCASE("negative high quota rejects the policy") {
    const NetworkConfig c = preset_cfg_c(); // k' - n2 = -6
    CHECK_THROWS(max_cut(c, star, Permutation::identity(20), SelectionMode::Policy));
  }
}

TEST_CASE("worst-case constants") {
  CHECK(static_min_cut(preset_cfg_a()) == 214);
  CHECK(static_min_cut(preset_cfg_b()) == 11);
  CHECK(static_min_cut(preset_cfg_c()) == 169);

  // The alternative closed form is exactly n2*beta2 lower everywhere.
  for (const NetworkConfig& cfg : {preset_cfg_a(), preset_cfg_b(), preset_cfg_c()}) {
    CHECK(static_min_cut(cfg) - static_min_cut_alt(cfg) == Rational(cfg.n2) * cfg.beta2);
  }

  CHECK(static_memory_cut(preset_cfg_a()) == 263);
  CHECK(static_memory_cut(preset_cfg_b()) == 14);
  CHECK_THROWS(static_memory_cut(preset_cfg_c()));

  // Uniform bandwidths: both constants equal sum_{i<=k'} (n-i) beta.
  const NetworkConfig uniform = two_class(3, 3, 4, 1);
  Rational expected = 0;
  for (int i = 1; i <= 4; ++i) expected += Rational(6 - i);
  CHECK(static_min_cut(uniform) == expected);
  CHECK(static_memory_cut(uniform) == expected);
}

TEST_CASE("worst-case constants match exhaustive scans at desk scale") {
  const NetworkConfig b = preset_cfg_b();
  const WeightRule star = WeightRule::star();
  bool first = true;
  Rational min_min, min_max;
  for_each_permutation(5, [&](const Permutation& pi) {
    const Rational mn = min_cut(b, star, pi, SelectionMode::Exhaustive).value;
    const Rational mx = max_cut(b, star, pi, SelectionMode::Exhaustive).value;
    if (first || mn < min_min) min_min = mn;
    if (first || mx < min_max) min_max = mx;
    first = false;
  });
  CHECK(min_min == static_min_cut(b));
  CHECK(min_max == static_memory_cut(b));
}

TEST_CASE("identity cut with a protocol tilt") {
  const NetworkConfig a = preset_cfg_a();
  CHECK(identity_min_cut(a, Rational(0)) == static_min_cut(a));
  CHECK(identity_min_cut(a, Rational(1, 20)) == Rational(865, 4));
}

TEST_CASE("offset form of the min cut") {
  const NetworkConfig b = preset_cfg_b();
  CHECK(min_cut_offset_form(b, Rational(0), Permutation({3, 4, 5, 1, 2})) == 15);

  const NetworkConfig a = preset_cfg_a();
  CHECK(min_cut_offset_form(a, Rational(1, 20), Permutation::identity(20)) == Rational(865, 4));
  CHECK_THROWS(min_cut_offset_form(a, Rational(1, 17), Permutation::identity(20)));

  // Equals the policy min cut for every permutation and admissible tilt.
  for (const Rational& eps : {Rational(0), Rational(1, 10), Rational(3, 10)}) {
    const WeightRule rule = eps == 0 ? WeightRule::star() : WeightRule::fixed_cost(eps);
    REQUIRE(rule.policy_applies(b));
    for_each_permutation(5, [&](const Permutation& pi) {
      CHECK(min_cut_offset_form(b, eps, pi) == min_cut(b, rule, pi, SelectionMode::Policy).value);
    });
  }
}

TEST_CASE("min cut depends on a permutation only through its position class") {
  const NetworkConfig cfg = two_class(2, 3, 4, Rational(5, 2));
  const WeightRule star = WeightRule::star();
  std::map<std::vector<int>, Rational> class_values;
  for_each_permutation(5, [&](const Permutation& pi) {
    const Rational value = min_cut(cfg, star, pi, SelectionMode::Exhaustive).value;
    const auto positions = position_class_of(cfg, pi);
    const auto [it, inserted] = class_values.emplace(positions, value);
    if (!inserted) CHECK(it->second == value);
    CHECK(class_min_cut(cfg, star, positions) == value);
  });
  CHECK(class_values.size() == 10); // C(5,2)
}

TEST_CASE("policy equals exhaustive wherever both run") {
  for (int n1 = 1; n1 <= 2; ++n1) {
    for (int n2 = 2; n2 <= 3; ++n2) {
      for (int k = n1 + 1; k <= n1 + n2; ++k) {
        const NetworkConfig cfg = two_class(n1, n2, k, 2);
        std::vector<WeightRule> rules = {WeightRule::star()};
        if (n1 >= 2) {
          const Rational cap = Rational(n2) * (cfg.beta1 - cfg.beta2) /
                               (Rational(cfg.n()) * (n1 - 1));
          rules.push_back(WeightRule::fixed_cost(cap));
          rules.push_back(WeightRule::fixed_cost(cap / 2));
        }
        for_each_permutation(cfg.n(), [&](const Permutation& pi) {
          for (const WeightRule& rule : rules) {
            CHECK(min_cut(cfg, rule, pi, SelectionMode::Policy).value ==
                  min_cut(cfg, rule, pi, SelectionMode::Exhaustive).value);
          }
          if (cfg.min_high_selected() >= 0) {
            CHECK(max_cut(cfg, WeightRule::star(), pi, SelectionMode::Policy).value ==
                  max_cut(cfg, WeightRule::star(), pi, SelectionMode::Exhaustive).value);
            CHECK(policy_max_cut_value(cfg, pi) ==
                  max_cut(cfg, WeightRule::star(), pi, SelectionMode::Exhaustive).value);
          }
          CHECK(policy_min_cut_value(cfg, WeightRule::star(), pi) ==
                min_cut(cfg, WeightRule::star(), pi, SelectionMode::Exhaustive).value);
        });
      }
    }
  }
}

TEST_CASE("tail reversal pairing identity") {
  // For permutations with the non-suffix high nodes packed first, the cut
  // of pi plus the cut of its tail reversal is 2C + l(a+l)(beta1-beta2).
  const NetworkConfig cfg = two_class(2, 3, 4, 2);
  const WeightRule star = WeightRule::star();
  const int a = cfg.min_low_selected();
  const Rational c = static_min_cut(cfg);
  for_each_permutation(5, [&](const Permutation& pi) {
    int suffix_high = 0;
    for (int pos = 5 - a + 1; pos <= 5; ++pos) {
      if (cfg.node_class(pi.at(pos)) == NodeClass::High) ++suffix_high;
    }
    bool packed = true;
    for (int pos = 1; pos <= cfg.n1 - suffix_high; ++pos) {
      if (cfg.node_class(pi.at(pos)) != NodeClass::High) packed = false;
    }
    if (!packed) return;
    const Permutation reversed = reverse_tail(pi, a);
    const Rational sum = min_cut(cfg, star, pi, SelectionMode::Exhaustive).value +
                         min_cut(cfg, star, reversed, SelectionMode::Exhaustive).value;
    CHECK(sum == 2 * c + Rational(suffix_high) * (a + suffix_high) * (cfg.beta1 - cfg.beta2));
  });
}

TEST_CASE("adjacent high-low swap inside the selected suffix moves the cut by delta") {
  const NetworkConfig cfg = two_class(2, 3, 4, 2);
  const WeightRule star = WeightRule::star();
  const Rational delta = cfg.beta1 - cfg.beta2;
  for_each_permutation(5, [&](const Permutation& pi) {
    const auto selection = min_cut_policy_selection(cfg, pi);
    for (int pos = 1; pos < 5; ++pos) {
      const NodeId x = pi.at(pos), y = pi.at(pos + 1);
      const bool both_selected =
          std::find(selection.begin(), selection.end(), x) != selection.end() &&
          std::find(selection.begin(), selection.end(), y) != selection.end();
      if (!both_selected) continue;
      if (cfg.node_class(x) == cfg.node_class(y)) continue;
      std::vector<NodeId> order = pi.order();
      std::swap(order[static_cast<size_t>(pos - 1)], order[static_cast<size_t>(pos)]);
      const Permutation swapped(order);
      // The swap must not change the selected set for the offsets to align.
      if (min_cut_policy_selection(cfg, swapped) != selection) continue;
      const Rational before = policy_min_cut_value(cfg, star, pi);
      const Rational after = policy_min_cut_value(cfg, star, swapped);
      if (cfg.node_class(x) == NodeClass::High) {
        CHECK(after - before == delta); // high node moved later
      } else {
        CHECK(before - after == delta);
      }
    }
  });
}

TEST_CASE("exact average min cut") {
  const WeightRule star = WeightRule::star();

  SUBCASE("matches brute force over all permutations") {
    const NetworkConfig b = preset_cfg_b();
    Rational total = 0;
    long count = 0;
    for_each_permutation(5, [&](const Permutation& pi) {
      total += min_cut(b, star, pi, SelectionMode::Exhaustive).value;
      ++count;
    });
    CHECK(average_min_cut_exact(b, star) == total / count);
    CHECK(average_min_cut_exact(b, star) == Rational(25, 2));
  }

  SUBCASE("uniform bandwidths average to the constant") {
    const NetworkConfig uniform = two_class(2, 3, 4, 1);
    CHECK(average_min_cut_exact(uniform, star) == static_min_cut(uniform));
  }

  SUBCASE("matches the order-statistics closed form") {
    for (const NetworkConfig& cfg :
         {preset_cfg_a(), preset_cfg_b(), two_class(3, 4, 6, Rational(5, 2))}) {
      const Rational expected =
          static_min_cut(cfg) + expected_average_offset(cfg) * (cfg.beta1 - cfg.beta2);
      CHECK(average_min_cut_exact(cfg, star) == expected);
    }
    CHECK(average_min_cut_exact(preset_cfg_a(), star) == Rational(2414, 11));
  }

  SUBCASE("tilted rule shifts the average by the protocol gain") {
    const NetworkConfig b = preset_cfg_b();
    const Rational eps(1, 10);
    const Rational star_avg = average_min_cut_exact(b, star);
    const Rational tilted_avg = average_min_cut_exact(b, WeightRule::fixed_cost(eps));
    // identity gain n1(n1-1)/2*eps, offset coefficient shrinks by (n1-1)/n2*eps.
    Rational offset_mean = star_avg - static_min_cut(b); // since delta = 1
    CHECK(tilted_avg == static_min_cut(b) + Rational(1, 10) +
                            offset_mean * (1 - Rational(1, 3) * eps));
  }
}

TEST_CASE("extremes of the per-permutation min cut") {
  const NetworkConfig b = preset_cfg_b();
  const WeightRule star = WeightRule::star();
  CHECK(min_min_cut_over_permutations(b, star) == 11);
  CHECK(max_min_cut_over_permutations(b, star) == 15);

  const NetworkConfig a = preset_cfg_a();
  CHECK(min_min_cut_over_permutations(a, star) == 214);
  CHECK(max_min_cut_over_permutations(a, star) == 244); // all high nodes after the low suffix
  CHECK(min_min_cut_over_permutations(a, WeightRule::fixed_cost(Rational(1, 20))) ==
        Rational(865, 4));
}

TEST_CASE("cut deviation from the average") {
  const WeightRule star = WeightRule::star();

  const NetworkConfig uniform = two_class(2, 3, 4, 1);
  CHECK(max_cut_deviation(uniform, star) == 0);
  CHECK(smallest_beta_sum(uniform) == 1);

  // Desk scale: exhaustive over permutations and selections.
  const NetworkConfig b = preset_cfg_b();
  CHECK(max_cut_deviation(b, star) == Rational(9, 2)); // max accumulation 17 vs avg 12.5
  CHECK(smallest_beta_sum(b) == 1);

  // Beyond desk scale: position-class extremes of the optimal cut.
  const NetworkConfig a = preset_cfg_a();
  CHECK(max_cut_deviation(a, star) == Rational(244) - Rational(2414, 11));
  CHECK(smallest_beta_sum(a) == 7);
}

TEST_CASE("work limits guard the exhaustive paths") {
  const NetworkConfig big = two_class(10, 20, 15, 2);
  CHECK_THROWS_AS(min_cut(big, WeightRule::star(), Permutation::identity(30),
                          SelectionMode::Exhaustive),
                  WorkLimitError);
  const NetworkConfig wide = two_class(20, 20, 21, 2);
  CHECK_THROWS_AS(average_min_cut_exact(wide, WeightRule::star()), WorkLimitError);
  CHECK_THROWS_AS(for_each_permutation(9, [](const Permutation&) {}), WorkLimitError);
}

TEST_CASE("binomial counting saturates at the guard") {
  CHECK(binomial_count(5, 2) == 10);
  CHECK(binomial_count(20, 13) == 77520);
  CHECK(binomial_count(20, 10) == 184756);
  CHECK(binomial_count(5, 0) == 1);
  CHECK(binomial_count(5, 6) == 0);
  CHECK(binomial_count(200, 100, 1000000) == 1000001);
}
