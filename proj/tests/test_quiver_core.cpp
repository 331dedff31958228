#include <gtest/gtest.h>

#include <map>
#include <random>

#include "dsp/lattice.hpp"
#include "dsp/roots.hpp"
#include "oracles.hpp"

using namespace dsp;

namespace {

LatticeVector random_vector(std::size_t n, std::mt19937_64& rng, int lo = -4, int hi = 4) {
  std::uniform_int_distribution<int> d(lo, hi);
  LatticeVector a(n);
  for (std::size_t v = 0; v < n; ++v) a[v] = d(rng);
  return a;
}

std::size_t count_roots(const std::vector<int>& w) {
  StarQuiver Q{WeightSequence(w)};
  LatticeVector bound(Q.vertex_count());
  for (std::size_t v = 0; v < bound.size(); ++v) bound[v] = 6;
  return RootTable(Q, bound).roots().size();
}

}  // namespace

TEST(StarQuiver, TrivialArms) {
  StarQuiver Q{WeightSequence{1, 1}};
  EXPECT_EQ(Q.vertex_count(), 1u);
  EXPECT_TRUE(Q.arrows().empty());
}

TEST(StarQuiver, ShapeD4) {
  StarQuiver Q{WeightSequence{2, 2, 2}};
  EXPECT_EQ(Q.vertex_count(), 4u);
  ASSERT_EQ(Q.arrows().size(), 3u);
  for (const auto& a : Q.arrows()) EXPECT_EQ(a.head, StarQuiver::center);
  EXPECT_EQ(Q.name(0), "*");
  EXPECT_EQ(Q.name(Q.vertex(2, 1)), "[2,1]");
}

TEST(StarQuiver, ShapeAffineD4) {
  StarQuiver Q{WeightSequence{2, 2, 2, 2}};
  EXPECT_EQ(Q.vertex_count(), 5u);
  EXPECT_EQ(Q.arrows().size(), 4u);
}

TEST(StarQuiver, ArrowsPointInward) {
  StarQuiver Q{WeightSequence{4, 2}};
  // [1,1] -> *, [1,2] -> [1,1], [1,3] -> [1,2], [2,1] -> *
  std::map<std::string, std::string> head;
  for (const auto& a : Q.arrows()) head[Q.name(a.tail)] = Q.name(a.head);
  EXPECT_EQ(head.at("[1,1]"), "*");
  EXPECT_EQ(head.at("[1,2]"), "[1,1]");
  EXPECT_EQ(head.at("[1,3]"), "[1,2]");
  EXPECT_EQ(head.at("[2,1]"), "*");
}

TEST(StarQuiver, VertexCountFormula) {
  for (const auto& w : oracle::small_stars(7)) {
    StarQuiver Q{WeightSequence(w)};
    std::size_t expect = 1;
    for (int x : w) expect += static_cast<std::size_t>(x - 1);
    EXPECT_EQ(Q.vertex_count(), expect);
    EXPECT_EQ(Q.arrows().size(), expect - 1);
  }
}

TEST(WeightSequence, RejectsBadInput) {
  EXPECT_THROW(WeightSequence(std::vector<int>{}), InputError);
  EXPECT_THROW(WeightSequence({2, 0}), InputError);
}

TEST(Forms, EulerOnSingleArm) {
  StarQuiver Q{WeightSequence{2}};
  auto s = Q.simple(0), a11 = Q.simple(1);
  EXPECT_EQ(euler(Q, a11, s), -1);
  EXPECT_EQ(euler(Q, s, a11), 0);
  EXPECT_EQ(sym(Q, a11, s), -1);
  EXPECT_EQ(tits_form(Q, s), 1);
  EXPECT_EQ(p_value(Q, s), 0);
}

TEST(Forms, Bilinearity) {
  std::mt19937_64 rng(11);
  for (const auto& w : oracle::small_stars(6)) {
    StarQuiver Q{WeightSequence(w)};
    const auto n = Q.vertex_count();
    for (int t = 0; t < 20; ++t) {
      auto a = random_vector(n, rng), b = random_vector(n, rng), c = random_vector(n, rng);
      EXPECT_EQ(euler(Q, a + b, c), euler(Q, a, c) + euler(Q, b, c));
      EXPECT_EQ(euler(Q, c, a + b), euler(Q, c, a) + euler(Q, c, b));
      EXPECT_EQ(sym(Q, a, b), sym(Q, b, a));
      EXPECT_EQ(sym(Q, a, a), 2 * tits_form(Q, a));
    }
  }
}

TEST(Forms, SymMatchesCartan) {
  for (const auto& w : oracle::small_stars(6)) {
    StarQuiver Q{WeightSequence(w)};
    auto c = oracle::star_cartan(w);
    for (std::size_t u = 0; u < Q.vertex_count(); ++u)
      for (std::size_t v = 0; v < Q.vertex_count(); ++v) EXPECT_EQ(sym(Q, Q.simple(u), Q.simple(v)), c[u][v]);
  }
}

TEST(Reflect, InvolutionAndInvariance) {
  std::mt19937_64 rng(12);
  for (const auto& w : oracle::small_stars(6)) {
    StarQuiver Q{WeightSequence(w)};
    const auto n = Q.vertex_count();
    for (int t = 0; t < 20; ++t) {
      auto a = random_vector(n, rng), b = random_vector(n, rng);
      for (std::size_t v = 0; v < n; ++v) {
        auto r = reflect(Q, v, a);
        EXPECT_EQ(reflect(Q, v, r), a);
        EXPECT_EQ(tits_form(Q, r), tits_form(Q, a));
        EXPECT_EQ(sym(Q, r, reflect(Q, v, b)), sym(Q, a, b));
      }
    }
  }
}

TEST(Reflect, SimpleRootNegates) {
  StarQuiver Q{WeightSequence{3, 2}};
  for (std::size_t v = 0; v < Q.vertex_count(); ++v) EXPECT_EQ(reflect(Q, v, Q.simple(v)), -Q.simple(v));
}

TEST(Roots, Examples) {
  StarQuiver D4{WeightSequence{2, 2, 2}};
  EXPECT_EQ(is_positive_root(D4, D4.simple(0)), RootKind::Real);
  EXPECT_EQ(is_positive_root(D4, LatticeVector{2, 0, 0, 0}), RootKind::NotRoot);
  EXPECT_EQ(is_positive_root(D4, LatticeVector{2, 1, 1, 1}), RootKind::Real);

  StarQuiver Q{WeightSequence{2, 2, 2, 2}};
  auto delta = *classify(Q).delta;
  for (int h = 1; h <= 4; ++h) EXPECT_EQ(is_positive_root(Q, h * delta), RootKind::Imaginary);
  EXPECT_THROW(is_positive_root(Q, Q.zero()), InputError);
  EXPECT_EQ(is_positive_root(Q, -Q.simple(0)), RootKind::NotRoot);
}

TEST(Roots, AgreesWithClosureOracle) {
  for (const auto& w : oracle::small_stars(6)) {
    StarQuiver Q{WeightSequence(w)};
    const auto n = Q.vertex_count();
    oracle::Vec bound(n, 3);
    auto expected = oracle::weyl_closure_roots(w, bound);
    LatticeVector lb(n);
    for (std::size_t v = 0; v < n; ++v) lb[v] = 3;
    RootTable table(Q, lb);
    LatticeVector a(n);
    for (std::size_t idx = 1; idx < table.box().volume(); ++idx) {
      table.box().next(a);
      oracle::Vec key(a.begin(), a.end());
      auto it = expected.find(key);
      RootKind want = it == expected.end() ? RootKind::NotRoot
                                           : (it->second == oracle::Kind::Real ? RootKind::Real : RootKind::Imaginary);
      ASSERT_EQ(is_positive_root(Q, a), want) << "w size " << w.size() << " a " << a;
      ASSERT_EQ(table.kind(idx), want) << a;
    }
  }
}

TEST(Roots, DynkinCounts) {
  EXPECT_EQ(count_roots({2, 2}), 6u);
  EXPECT_EQ(count_roots({2, 2, 2}), 12u);
  EXPECT_EQ(count_roots({3, 2}), 10u);
  EXPECT_EQ(count_roots({4, 2}), 15u);  // A_5
  EXPECT_EQ(count_roots({3, 2, 2}), 20u);  // D_5
}

TEST(Roots, BelowExamples) {
  StarQuiver D4{WeightSequence{2, 2, 2}};
  auto only = positive_roots_below(D4, D4.simple(0));
  ASSERT_EQ(only.size(), 1u);
  EXPECT_EQ(only[0], D4.simple(0));
  EXPECT_EQ(positive_roots_below(D4, LatticeVector{2, 1, 1, 1}).size(), 12u);

  StarQuiver Q{WeightSequence{2, 2, 2, 2}};
  auto delta = *classify(Q).delta;
  auto below = positive_roots_below(Q, delta);
  oracle::Vec bound(delta.begin(), delta.end());
  auto expected = oracle::weyl_closure_roots({2, 2, 2, 2}, bound);
  EXPECT_EQ(below.size(), expected.size());
  // 5 simple, 4 + 6 + 4 + 1 with n_* = 1, 4 with n_* = 2 and three arms, and delta
  EXPECT_EQ(below.size(), 25u);
  std::size_t imaginary = 0;
  for (const auto& b : below) imaginary += is_positive_root(Q, b) == RootKind::Imaginary;
  EXPECT_EQ(imaginary, 1u);
}

TEST(Roots, BoxGuard) {
  StarQuiver Q{WeightSequence{2, 2, 2, 2}};
  EXPECT_THROW(positive_roots_below(Q, LatticeVector{9, 9, 9, 9, 9}, 1000), GuardExceeded);
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(StarQuiver{WeightSequence{2, 2}}).kind, QuiverKind::Dynkin);
  EXPECT_EQ(classify(StarQuiver{WeightSequence{7, 3, 2}}).kind, QuiverKind::Wild);
  auto c = classify(StarQuiver{WeightSequence{2, 2, 2, 2}});
  ASSERT_EQ(c.kind, QuiverKind::ExtendedDynkin);
  EXPECT_EQ((*c.delta)[StarQuiver::center], 2);
}

TEST(Classify, DeltaIsRadical) {
  for (std::vector<int> w : {std::vector<int>{2, 2, 2, 2}, {3, 3, 3}, {4, 4, 2}, {6, 3, 2}}) {
    StarQuiver Q{WeightSequence(w)};
    auto c = classify(Q);
    ASSERT_EQ(c.kind, QuiverKind::ExtendedDynkin);
    const auto& d = *c.delta;
    EXPECT_EQ(tits_form(Q, d), 0);
    for (std::size_t v = 0; v < Q.vertex_count(); ++v) {
      EXPECT_GE(d[v], 1);
      EXPECT_EQ(reflect(Q, v, d), d);
    }
    auto radical = affine_radical(Q);
    ASSERT_TRUE(radical.has_value());
    EXPECT_EQ(*radical, d);
  }
}

TEST(Classify, AffineRadicalAbsentOffTubular) {
  EXPECT_FALSE(affine_radical(StarQuiver{WeightSequence{3, 2, 2}}).has_value());
  EXPECT_FALSE(affine_radical(StarQuiver{WeightSequence{3, 3, 3, 2}}).has_value());
}

TEST(Strict, Examples) {
  StarQuiver Q{WeightSequence{2, 2, 2, 2}};
  EXPECT_TRUE(is_strict(Q, Q.simple(0)));
  EXPECT_TRUE(is_strict(Q, *classify(Q).delta));
  EXPECT_FALSE(is_strict(Q, Q.simple(Q.vertex(1, 1))));
}
