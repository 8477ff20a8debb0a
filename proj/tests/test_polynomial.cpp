#include <gtest/gtest.h>

#include <random>

#include "symsdp/polynomial.hpp"

using namespace symsdp;

namespace {
Letter L(int p, int x, int a) { return make_letter(p, x, a); }
}  // namespace

TEST(NormalForm, ProjectorRules) {
  EXPECT_EQ(*normal_form({L(1, 0, 0), L(0, 1, 0)}), (Monomial{L(0, 1, 0), L(1, 0, 0)}));
  EXPECT_EQ(*normal_form({L(0, 0, 0), L(0, 0, 0)}), (Monomial{L(0, 0, 0)}));
  EXPECT_FALSE(normal_form({L(0, 0, 0), L(0, 0, 1)}));
  // Different settings of one party do not commute.
  EXPECT_EQ(*normal_form({L(0, 1, 0), L(0, 0, 0)}), (Monomial{L(0, 1, 0), L(0, 0, 0)}));
  EXPECT_EQ(*normal_form({L(0, 0, 0), L(1, 0, 0), L(0, 0, 0)}), (Monomial{L(0, 0, 0), L(1, 0, 0)}));
}

// Confluence: random rewriting orders reach the same normal form.
TEST(NormalForm, ConfluenceProperty) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 1);
  for (int t = 0; t < 500; ++t) {
    Monomial w;
    int len = 1 + t % 7;
    for (int k = 0; k < len; ++k) w.push_back(L(pick(rng) + pick(rng), pick(rng), pick(rng)));
    auto n = normal_form(w);
    for (int rep = 0; rep < 5; ++rep) {
      auto r = rewrite_randomized(w, rng);
      EXPECT_EQ(r.has_value(), n.has_value());
      if (r && n) {
        EXPECT_EQ(*r, *n);
      }
    }
  }
}

TEST(MonomialOrder, DegreeThenParties) {
  Monomial one{}, a{L(0, 0, 0)}, a1{L(0, 1, 0)}, b{L(1, 0, 0)}, aa{L(0, 0, 0), L(0, 1, 0)}, ab{L(0, 0, 0), L(1, 0, 0)};
  EXPECT_TRUE(monomial_less(one, a));
  EXPECT_TRUE(monomial_less(a, a1));
  EXPECT_TRUE(monomial_less(a1, b));
  EXPECT_TRUE(monomial_less(aa, ab));
  EXPECT_FALSE(monomial_less(ab, aa));
}

TEST(Polynomial, ParseAndArithmetic) {
  Scenario sc = Scenario::uniform(2, 2, 2);
  Polynomial p = Polynomial::parse("A0|0 B0|0 - 2 A0|0 + sqrt(2)", sc);
  EXPECT_EQ(p.size(), 3u);
  EXPECT_EQ(p.coefficient({}), Scalar::sqrt(2));
  EXPECT_EQ(Polynomial::parse(p.str()), p);
  Polynomial a = Polynomial::parse("A0|0");
  EXPECT_EQ(a * a, a);
  EXPECT_EQ(a * (Polynomial(1) - a), Polynomial());
  EXPECT_THROW(Polynomial::parse("A0|2", sc), ScenarioError);
  EXPECT_THROW(Polynomial::parse("A1|0", sc), ScenarioError);
}

TEST(Polynomial, Adjoint) {
  Polynomial p = Polynomial::parse("i A0|0 A0|1 - i A0|1 A0|0 + B0|0");
  EXPECT_TRUE(p.is_hermitian());
  Polynomial q = Polynomial::parse("A0|0 A0|1");
  EXPECT_FALSE(q.is_hermitian());
  auto [h1, h2] = hermitian_split(q);
  EXPECT_TRUE(h1.is_hermitian());
  EXPECT_TRUE(h2.is_hermitian());
  EXPECT_EQ((h1 - h2 * Scalar::i()) * Scalar::rational(1, 2), q);
}

TEST(Scenario, Generators) {
  Scenario sc({{3, 2}, {2}});
  EXPECT_EQ(sc.num_generators(), 4u);
  EXPECT_EQ(sc.index_of(L(0, 0, 1)), 1);
  EXPECT_EQ(sc.index_of(L(1, 0, 0)), 3);
  EXPECT_EQ(sc.index_of(L(0, 0, 2)), -1);
  EXPECT_THROW(Scenario(std::vector<std::vector<int>>{{1}}), ScenarioError);
}
