#include <gtest/gtest.h>

#include <complex>
#include <memory>
#include <random>

#include "dsp/matrices.hpp"
#include "dsp/mvalue.hpp"
#include "dsp/spectral.hpp"

using namespace dsp;

namespace {

MValue random_cyclo(std::mt19937_64& rng) {
  static const std::int64_t primes[] = {1, 2, 3, 5, 7, 11};
  std::uniform_int_distribution<int> p(0, 5), den(1, 12), sign(0, 1);
  auto num = primes[p(rng)] * primes[p(rng)];
  auto d = primes[p(rng)];
  std::int64_t b = den(rng);
  std::uniform_int_distribution<std::int64_t> a(0, b - 1);
  return MValue::rational(sign(rng) ? -num : num, d) * MValue::root_of_unity(a(rng), b);
}

std::shared_ptr<const SymDomain> domain(std::vector<std::string> gens, std::vector<std::vector<std::int64_t>> rel) {
  auto m = gens.size();
  return std::make_shared<const SymDomain>(SymDomain{std::move(gens), RelationLattice(m, rel)});
}

MValue random_sym(const std::shared_ptr<const SymDomain>& d, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> e(-3, 3);
  std::vector<std::int64_t> x(d->generators.size());
  for (auto& v : x) v = e(rng);
  return MValue(SymValue{d, x});
}

XiTable random_table(const StarQuiver& Q, const std::function<MValue()>& gen) {
  std::vector<std::vector<MValue>> rows;
  for (int w : Q.weights()) {
    rows.emplace_back();
    for (int j = 0; j < w; ++j) rows.back().push_back(gen());
  }
  return XiTable(rows);
}

LatticeVector random_alpha(const StarQuiver& Q, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-3, 5);
  LatticeVector a(Q.vertex_count());
  for (std::size_t v = 0; v < a.size(); ++v) a[v] = d(rng);
  return a;
}

}  // namespace

TEST(Cyclo, GroupLaws) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 500; ++t) {
    auto a = random_cyclo(rng), b = random_cyclo(rng), c = random_cyclo(rng);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * b, b * a);
    EXPECT_TRUE((a * a.inverse()).is_one());
    EXPECT_EQ(a.pow(3), a * a * a);
    auto z = (a * b).to_complex(), w = a.to_complex() * b.to_complex();
    EXPECT_LT(std::abs(z - w), 1e-12 * std::max(1.0, std::abs(w)));
  }
}

TEST(Cyclo, NegativeIsHalfTurn) {
  auto m = MValue::rational(-3);
  EXPECT_EQ(m, MValue::rational(3) * MValue::root_of_unity(1, 2));
  EXPECT_LT(std::abs(m.to_complex() - std::complex<double>(-3, 0)), 1e-12);
}

TEST(Cyclo, Order) {
  EXPECT_EQ(order_of(MValue::one()), 1u);
  EXPECT_EQ(order_of(MValue::root_of_unity(1, 3)), 3u);
  EXPECT_EQ(order_of(MValue::root_of_unity(4, 6)), 3u);
  EXPECT_EQ(order_of(MValue::rational(-1)), 2u);
  EXPECT_FALSE(order_of(MValue::rational(2)).has_value());
}

TEST(Cyclo, ParsePrintRoundTrip) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 500; ++t) {
    auto a = random_cyclo(rng);
    auto s = format(a);
    EXPECT_EQ(parse_cyclo(s), a) << s;
    EXPECT_EQ(format(parse_cyclo(s)), s);
  }
  EXPECT_EQ(format(parse_cyclo("6/4")), "3/2");
  EXPECT_EQ(format(parse_cyclo("-2")), "-2");
  EXPECT_EQ(parse_cyclo("zeta(1/3)"), MValue::root_of_unity(1, 3));
  EXPECT_EQ(parse_cyclo("2*zeta(-1/4)"), MValue::rational(2) * MValue::root_of_unity(3, 4));
}

TEST(Cyclo, ParseErrors) {
  EXPECT_THROW(parse_cyclo("0"), SemanticError);
  EXPECT_THROW(parse_cyclo("1/0"), SyntaxError);
  EXPECT_THROW(parse_cyclo("3*zeta(1/"), SyntaxError);
  EXPECT_THROW(parse_cyclo("abc"), SyntaxError);
  EXPECT_THROW(parse_cyclo("2 3"), SyntaxError);
}

TEST(Sym, EqualityIsLatticeMembership) {
  auto d = domain({"a", "b", "c"}, {{1, 1, 1}});
  auto a = MValue::generator(d, 0), b = MValue::generator(d, 1), c = MValue::generator(d, 2);
  EXPECT_TRUE((a * b * c).is_one());
  EXPECT_FALSE((a * b).is_one());
  EXPECT_EQ(a * b, c.inverse());
  EXPECT_FALSE(order_of(a).has_value());
}

TEST(Sym, TorsionOrder) {
  auto d = domain({"a"}, {{6}});
  auto a = MValue::generator(d, 0);
  EXPECT_EQ(order_of(a), 6u);
  EXPECT_EQ(order_of(a.pow(4)), 3u);
}

TEST(Sym, AddingRelationsOnlyMerges) {
  std::mt19937_64 rng(23);
  auto coarse_rel = std::vector<std::vector<std::int64_t>>{{1, -1, 0, 0}};
  auto fine = domain({"a", "b", "c", "d"}, coarse_rel);
  auto rel2 = coarse_rel;
  rel2.push_back({0, 0, 2, 1});
  auto coarse = domain({"a", "b", "c", "d"}, rel2);
  std::uniform_int_distribution<std::int64_t> k(-3, 3);
  for (int t = 0; t < 500; ++t) {
    auto x = random_sym(fine, rng), z = random_sym(fine, rng);
    auto m = k(rng), l = k(rng);
    auto y = x * MValue(SymValue{fine, {m, -m, 0, 0}});
    auto u = x * MValue(SymValue{fine, {0, 0, 2 * l, l}});
    auto lift = [&](const MValue& v) { return MValue(SymValue{coarse, v.as_sym().exponents}); };
    ASSERT_EQ(x, y);
    EXPECT_EQ(lift(x), lift(y));
    EXPECT_EQ(lift(x), lift(u));
    EXPECT_EQ(x == u, l == 0);
    if (x == z) {
      EXPECT_EQ(lift(x), lift(z));
    }
  }
}

TEST(Sym, ParsePrintRoundTrip) {
  std::mt19937_64 rng(24);
  auto d = domain({"a", "b", "g1"}, {});
  for (int t = 0; t < 200; ++t) {
    auto x = random_sym(d, rng);
    auto s = format(x);
    EXPECT_EQ(parse_sym(s, d), x) << s;
  }
  EXPECT_EQ(parse_sym("g1^2*a^-1", d), MValue::generator(d, 2).pow(2) / MValue::generator(d, 0));
  EXPECT_TRUE(parse_sym("1", d).is_one());
  EXPECT_THROW(parse_sym("z", d), SyntaxError);
}

TEST(Sym, MixedModeRejected) {
  auto d = domain({"a"}, {});
  EXPECT_THROW(XiTable({{MValue::generator(d, 0), MValue::rational(2)}}), ModeMismatch);
  EXPECT_THROW(MValue::generator(d, 0) * MValue::rational(2), ModeMismatch);
}

TEST(XiChar, Examples) {
  StarQuiver Q{WeightSequence{1, 1, 1}};
  XiTable xi({{MValue::rational(2)}, {MValue::rational(3)}, {MValue::rational(5)}});
  EXPECT_EQ(xi_char(Q, xi, Q.simple(0)), MValue::rational(30));
  EXPECT_TRUE(xi_char(Q, xi, Q.zero()).is_one());

  StarQuiver T{WeightSequence{2, 2, 2, 2}};
  std::mt19937_64 rng(25);
  auto table = random_table(T, [&] { return random_cyclo(rng); });
  MValue expect = MValue::one();
  for (std::size_t i = 1; i <= 4; ++i) expect *= table.at(i, 1) * table.at(i, 2);
  EXPECT_EQ(xi_char(T, table, LatticeVector{2, 1, 1, 1, 1}), expect);
}

TEST(QFromXi, Examples) {
  auto a = MValue::rational(2), b = MValue::rational(3), c = MValue::rational(5);
  StarQuiver Q{WeightSequence{2, 1}};
  auto q = q_from_xi(Q, XiTable({{a, b}, {c}}));
  EXPECT_EQ(q[0], (a * c).inverse());
  EXPECT_EQ(q[Q.vertex(1, 1)], a / b);

  StarQuiver D4{WeightSequence{2, 2, 2}};
  auto one = MValue::one();
  for (const auto& x : q_from_xi(D4, XiTable({{one, one}, {one, one}, {one, one}}))) EXPECT_TRUE(x.is_one());

  StarQuiver A2{WeightSequence{2}};
  auto z = MValue::root_of_unity(1, 3);
  auto q2 = q_from_xi(A2, XiTable({{z, z.inverse()}}));
  EXPECT_EQ(q2[0], z.inverse());
  EXPECT_EQ(q2[1], z.pow(2));
}

TEST(QPow, Examples) {
  StarQuiver Q{WeightSequence{3, 2}};
  std::mt19937_64 rng(26);
  std::vector<MValue> qs;
  for (std::size_t v = 0; v < Q.vertex_count(); ++v) qs.push_back(random_cyclo(rng));
  CharacterQ q(qs);
  EXPECT_TRUE(q_pow(q, Q.zero()).is_one());
  for (std::size_t v = 0; v < Q.vertex_count(); ++v) EXPECT_EQ(q_pow(q, Q.simple(v)), qs[v]);
}

TEST(Identity, XiCharTimesQPowIsOneCyclo) {
  std::mt19937_64 rng(27);
  for (std::vector<int> w : {std::vector<int>{2, 2, 2}, {3, 3, 3}, {4, 2, 1}, {2, 2, 2, 2}, {5}}) {
    StarQuiver Q{WeightSequence(w)};
    for (int t = 0; t < 100; ++t) {
      auto xi = random_table(Q, [&] { return random_cyclo(rng); });
      auto q = q_from_xi(Q, xi);
      auto a = random_alpha(Q, rng), b = random_alpha(Q, rng);
      EXPECT_TRUE((xi_char(Q, xi, a) * q_pow(q, a)).is_one());
      EXPECT_EQ(xi_char(Q, xi, a + b), xi_char(Q, xi, a) * xi_char(Q, xi, b));
    }
  }
}

TEST(Identity, XiCharTimesQPowIsOneSym) {
  std::mt19937_64 rng(28);
  StarQuiver Q{WeightSequence{3, 2, 2}};
  auto d = domain({"a", "b", "c", "d", "e", "f", "g"}, {{1, 1, 1, 1, 1, 1, 1}, {0, 2, 0, -1, 0, 0, 0}});
  for (int t = 0; t < 200; ++t) {
    auto xi = random_table(Q, [&] { return random_sym(d, rng); });
    auto q = q_from_xi(Q, xi);
    auto a = random_alpha(Q, rng), b = random_alpha(Q, rng);
    EXPECT_TRUE((xi_char(Q, xi, a) * q_pow(q, a)).is_one());
    EXPECT_EQ(xi_char(Q, xi, a + b), xi_char(Q, xi, a) * xi_char(Q, xi, b));
  }
}

TEST(XiChar, AgreesWithFloatingEvaluation) {
  std::mt19937_64 rng(29);
  StarQuiver Q{WeightSequence{3, 2, 2}};
  for (int t = 0; t < 100; ++t) {
    auto xi = random_table(Q, [&] { return random_cyclo(rng); });
    std::uniform_int_distribution<int> d(0, 2);
    LatticeVector a(Q.vertex_count());
    for (std::size_t v = 0; v < a.size(); ++v) a[v] = d(rng);
    std::complex<double> z = 1;
    for (std::size_t i = 1; i <= Q.arm_count(); ++i)
      for (std::size_t j = 1; j <= static_cast<std::size_t>(Q.weights()[i - 1]); ++j)
        z *= std::pow(xi.at(i, j).to_complex(), static_cast<double>(Q.arm_coord(a, i, j - 1) - Q.arm_coord(a, i, j)));
    auto exact = xi_char(Q, xi, a).to_complex();
    EXPECT_LT(std::abs(exact - z), 1e-9 * std::max(1.0, std::abs(z)));
  }
}

// Matrices ---------------------------------------------------------------------------------------

namespace {

ExactMatrix diag(std::vector<std::int64_t> d) {
  ExactMatrix m(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

}  // namespace

TEST(AlphaFromMatrices, Examples) {
  StarQuiver Q{WeightSequence{2}};
  XiTable xi({{MValue::rational(5), MValue::rational(7)}});
  auto a = alpha_from_matrices(Q, std::vector<ExactMatrix>{diag({5, 5, 7})}, xi);
  EXPECT_EQ(a, (LatticeVector{3, 1}));

  StarQuiver P{WeightSequence{1}};
  auto b = alpha_from_matrices(P, std::vector<ExactMatrix>{ExactMatrix::identity(4)}, XiTable({{MValue::one()}}));
  EXPECT_EQ(b, (LatticeVector{4}));

  ExactMatrix J(2);
  J(0, 0) = 3, J(1, 1) = 3, J(0, 1) = 1;
  auto c = alpha_from_matrices(Q, std::vector<ExactMatrix>{J}, XiTable({{MValue::rational(3), MValue::rational(3)}}));
  EXPECT_EQ(c, (LatticeVector{2, 1}));
}

TEST(AlphaFromMatrices, NotAnnihilated) {
  StarQuiver Q{WeightSequence{2}};
  XiTable xi({{MValue::rational(5), MValue::rational(2)}});
  EXPECT_THROW(alpha_from_matrices(Q, std::vector<ExactMatrix>{diag({5, 5, 7})}, xi), AnnihilationError);
}

TEST(AlphaFromMatrices, FloatingAgreesWithExact) {
  StarQuiver Q{WeightSequence{3}};
  XiTable xi({{MValue::rational(2), MValue::rational(2), MValue::rational(-1)}});
  ExactMatrix A(4);
  A(0, 0) = 2, A(0, 1) = 1, A(1, 1) = 2, A(2, 2) = 2, A(3, 3) = -1;
  auto exact = alpha_from_matrices(Q, std::vector<ExactMatrix>{A}, xi);
  ComplexMatrix F = ComplexMatrix::Zero(4, 4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      F(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = static_cast<double>(A(r, c));
  EXPECT_EQ(alpha_from_matrices(Q, std::vector<ComplexMatrix>{F}, xi), exact);
  EXPECT_EQ(exact, (LatticeVector{4, 2, 1}));
}

TEST(RealizeClass, Examples) {
  std::vector<MValue> arm{MValue::rational(5), MValue::rational(7)};
  std::vector<std::int64_t> r1{1};
  auto w = realize_class(arm, r1, 3);
  auto m = w.to_exact();
  EXPECT_EQ(exact_rank(m.minus_scalar(5)), 1u);
  EXPECT_EQ(exact_rank(m.minus_scalar(7)), 2u);

  std::vector<MValue> rep{MValue::rational(3), MValue::rational(3)};
  auto j = realize_class(rep, r1, 2).to_exact();
  EXPECT_EQ(exact_rank(j.minus_scalar(3)), 1u);
  EXPECT_TRUE((j.minus_scalar(3) * j.minus_scalar(3)).is_zero());

  std::vector<std::int64_t> r2{2};
  EXPECT_THROW(realize_class(rep, r2, 2), NotRealizable);
}

TEST(RealizeClass, InvertsAlphaFromMatrices) {
  std::mt19937_64 rng(30);
  std::vector<std::int64_t> pool{1, 2, 3, -1};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> dim(1, 5);
  std::size_t realized = 0;
  for (int t = 0; t < 400; ++t) {
    const int w = 3;
    std::vector<MValue> arm;
    std::vector<std::int64_t> vals;
    for (int j = 0; j < w; ++j) vals.push_back(pool[pick(rng)]), arm.push_back(MValue::rational(vals.back()));
    auto n = static_cast<std::size_t>(dim(rng));
    std::uniform_int_distribution<std::int64_t> rr(0, static_cast<std::int64_t>(n));
    std::vector<std::int64_t> ranks{rr(rng), rr(rng)};
    if (ranks[1] > ranks[0]) std::swap(ranks[0], ranks[1]);
    JordanWitness wit;
    try {
      wit = realize_class(arm, ranks, n);
    } catch (const NotRealizable&) {
      continue;
    }
    ++realized;
    StarQuiver Q{WeightSequence{w}};
    auto a = alpha_from_matrices(Q, std::vector<ExactMatrix>{wit.to_exact()}, XiTable({arm}));
    EXPECT_EQ(a, (LatticeVector{static_cast<std::int64_t>(n), ranks[0], ranks[1]}));
  }
  EXPECT_GT(realized, 50u);
}

TEST(ExactRank, Basics) {
  EXPECT_EQ(exact_rank(diag({1, 0, 3})), 2u);
  EXPECT_EQ(exact_rank(ExactMatrix(3)), 0u);
  ExactMatrix m(2);
  m(0, 0) = 1, m(0, 1) = 2, m(1, 0) = 2, m(1, 1) = 4;
  EXPECT_EQ(exact_rank(m), 1u);
}
