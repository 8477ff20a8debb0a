#include <gtest/gtest.h>

#include <random>

#include "symsdp/scalar.hpp"

using namespace symsdp;

TEST(Scalar, SqrtArithmetic) {
  Scalar s2 = Scalar::sqrt(2), s3 = Scalar::sqrt(3);
  EXPECT_EQ(s2 * s2, Scalar(2));
  EXPECT_EQ(s2 * s3, Scalar::sqrt(6));
  EXPECT_EQ(Scalar::sqrt(8), Scalar(2) * s2);
  EXPECT_EQ(Scalar::sqrt(mpq_class(1, 2)), s2 * Scalar::rational(1, 2));
  EXPECT_EQ(Scalar::sqrt(-4), Scalar(2) * Scalar::i());
  EXPECT_EQ(Scalar::i() * Scalar::i(), Scalar(-1));
}

TEST(Scalar, InverseRandomized) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> c(-5, 5);
  for (int t = 0; t < 200; ++t) {
    Scalar x = Scalar(c(rng)) + Scalar(c(rng)) * Scalar::sqrt(2) + Scalar(c(rng)) * Scalar::sqrt(3) +
               Scalar(c(rng)) * Scalar::sqrt(6) + Scalar(c(rng)) * Scalar::i();
    if (x.is_zero()) continue;
    EXPECT_EQ(x * x.inverse(), Scalar(1)) << x;
  }
  EXPECT_THROW(Scalar().inverse(), FieldError);
}

TEST(Scalar, ExactSign) {
  // sqrt(2) + sqrt(3) - sqrt(10) is about -0.0164
  Scalar x = Scalar::sqrt(2) + Scalar::sqrt(3) - Scalar::sqrt(10);
  EXPECT_EQ(x.sign(), -1);
  EXPECT_EQ((Scalar(99) - Scalar(70) * Scalar::sqrt(2)).sign(), 1);
  EXPECT_EQ((Scalar(70) * Scalar::sqrt(2) - Scalar(99)).sign(), -1);
  EXPECT_EQ(Scalar().sign(), 0);
  EXPECT_TRUE(Scalar::sqrt(2) < Scalar::rational(3, 2));
}

TEST(Scalar, ParsePrintRoundTrip) {
  for (const char* t : {"0", "-3", "1/2", "(1/2)*sqrt(2)", "sqrt(2)*i", "1 - (3/4)*sqrt(6) + 2*i"}) {
    Scalar x = Scalar::parse(t);
    EXPECT_EQ(Scalar::parse(x.str()), x) << t;
  }
  EXPECT_EQ(Scalar::parse("1 - sqrt(2)/2").str(), "1 - (1/2)*sqrt(2)");
  EXPECT_THROW(Scalar::parse("1 + "), std::exception);
}

TEST(Scalar, RootsOfUnity) {
  for (long n : {1, 2, 3, 4, 6, 8, 12, 24})
    for (long k = 0; k < n; ++k) {
      Scalar z = root_of_unity(n, k);
      auto c = z.to_complex();
      EXPECT_NEAR(c.real(), std::cos(2 * M_PI * k / n), 1e-14);
      EXPECT_NEAR(c.imag(), std::sin(2 * M_PI * k / n), 1e-14);
      EXPECT_EQ(z * z.conj(), Scalar(1));
    }
  Scalar z = Scalar(1);
  for (int k = 0; k < 12; ++k) z *= root_of_unity(12, 1);
  EXPECT_EQ(z, Scalar(1));
  EXPECT_FALSE(root_of_unity_is_exact(5));
}

TEST(Scalar, Conjugates) {
  Scalar x = Scalar(1) + Scalar::sqrt(2) + Scalar(3) * Scalar::i();
  EXPECT_EQ(x.conj(), Scalar(1) + Scalar::sqrt(2) - Scalar(3) * Scalar::i());
  EXPECT_EQ(x.real_part(), Scalar(1) + Scalar::sqrt(2));
  EXPECT_EQ(x.imag_part(), Scalar(3));
  EXPECT_EQ(x.flip_prime(2), Scalar(1) - Scalar::sqrt(2) + Scalar(3) * Scalar::i());
}

TEST(FieldTower, JoinAndBasis) {
  FieldTower t = FieldTower::of(Scalar::sqrt(2)).join(FieldTower::of(Scalar::sqrt(6)));
  EXPECT_EQ(t.degree(), 4u);
  EXPECT_TRUE(t.contains(Scalar::sqrt(3)));
  EXPECT_FALSE(t.contains(Scalar::sqrt(5)));
  EXPECT_FALSE(t.contains(Scalar::i()));
}

TEST(Recognize, KnownValues) {
  FieldTower q2 = FieldTower::of(Scalar::sqrt(2));
  auto r = recognize({0.5 - 1 / std::sqrt(2.0), 0}, q2, 12);
  ASSERT_TRUE(r);
  EXPECT_EQ(*r, Scalar::rational(1, 2) - Scalar::sqrt(2) * Scalar::rational(1, 2));
  EXPECT_EQ(*recognize({1.0 / 3, 0}, FieldTower(), 12), Scalar::rational(1, 3));
  EXPECT_FALSE(recognize({M_PI, 0}, q2, 12));
  EXPECT_EQ(best_rational(0.333333333, 10), mpq_class(1, 3));
}
