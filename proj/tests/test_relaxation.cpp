#include <gtest/gtest.h>

#include "symsdp/relaxation.hpp"
#include "symsdp/scenarios.hpp"

using namespace symsdp;

namespace {

Polynomial rebuild(const MomentStructure& ms, std::size_t i, std::size_t j) {
  Polynomial p;
  for (std::size_t k = 0; k < ms.m(); ++k)
    for (const auto& e : ms.A[k])
      if (e.i == i && e.j == j) p += ms.basis[k] * e.v;
  return p;
}

MomentStructure chsh_level1() {
  auto e = chsh();
  return build_moment_structure(e.scenario, e.poly, generating_sequence(e.scenario, "1"));
}

}  // namespace

TEST(Sequence, Lengths) {
  Scenario s2 = Scenario::uniform(2, 2, 2);
  EXPECT_EQ(generating_sequence(s2, "1").size(), 5u);
  EXPECT_EQ(generating_sequence(s2, "1+AB").size(), 9u);
  EXPECT_EQ(generating_sequence(Scenario::uniform(2, 2, 3), "1+AB").size(), 25u);
  EXPECT_EQ(generating_sequence(Scenario::uniform(2, 2, 4), "1+AB").size(), 49u);
  // level 2: 1, 4 letters, A00A01, A01A00, B00B01, B01B00, 4 AB products
  EXPECT_EQ(generating_sequence(s2, "2").size(), 13u);
  auto q = generating_sequence(s2, "1+AB");
  EXPECT_EQ(q.entries[0], Polynomial(1));
  EXPECT_EQ(q.entries[5], Polynomial::parse("A0|0 B0|0"));
  EXPECT_THROW(generating_sequence(s2, "x"), RelaxationError);
}

TEST(Sequence, CustomDependenceIsReported) {
  Scenario sc = Scenario::uniform(2, 2, 2);
  auto ok = custom_sequence(sc, {Polynomial(1), Polynomial::parse("A0|0 + B0|0"), Polynomial::parse("A0|1")});
  EXPECT_EQ(ok.tag, "custom");
  try {
    custom_sequence(sc, {Polynomial(1), Polynomial::parse("A0|0"), Polynomial::parse("2 A0|0 - 1")});
    FAIL();
  } catch (const RelaxationError& e) {
    EXPECT_NE(std::string(e.what()).find("entry 2"), std::string::npos);
  }
  EXPECT_THROW(custom_sequence(sc, {Polynomial(1), Polynomial::parse("A0|0"), Polynomial::parse("i A0|0")}), RelaxationError);
  EXPECT_THROW(custom_sequence(sc, {Polynomial::parse("A0|0")}), RelaxationError);
}

TEST(Moments, ChshLevelOneBasis) {
  auto ms = chsh_level1();
  ASSERT_EQ(ms.m(), 13u);
  EXPECT_EQ(ms.basis[2], Polynomial::parse("A0|1"));
  EXPECT_EQ(ms.basis[5], Polynomial::parse("A0|0 A0|1 + A0|1 A0|0"));
  EXPECT_EQ(ms.basis[6], Polynomial::parse("i A0|0 A0|1 - i A0|1 A0|0"));
  EXPECT_EQ(ms.basis[9], Polynomial::parse("A0|0 B0|0"));
  std::vector<Scalar> want(13);
  want[0] = 2;
  want[2] = want[3] = want[10] = -4;
  want[9] = want[11] = want[12] = 4;
  EXPECT_EQ(ms.b, want);
}

TEST(Moments, ExactReconstruction) {
  for (const char* lv : {"1", "1+AB", "2"}) {
    auto e = cglmp(3);
    if (std::string(lv) == "2") e = chsh();
    auto ms = build_moment_structure(e.scenario, e.poly, generating_sequence(e.scenario, lv));
    for (std::size_t i = 0; i < ms.n(); ++i)
      for (std::size_t j = 0; j < ms.n(); ++j) {
        ASSERT_EQ(rebuild(ms, i, j), ms.xi[i][j]) << lv << " " << i << "," << j;
        EXPECT_EQ(ms.xi[j][i], ms.xi[i][j].adjoint());
      }
    for (std::size_t k = 0; k < ms.m(); ++k) {
      EXPECT_TRUE(ms.basis[k].is_hermitian());
      EXPECT_TRUE(ms.b[k].is_real());
      ExactMatrix a = to_dense(ms.A[k], ms.n());
      EXPECT_EQ(a.adjoint(), a);
    }
    Polynomial obj;
    for (std::size_t k = 0; k < ms.m(); ++k) obj += ms.basis[k] * ms.b[k];
    EXPECT_EQ(obj, e.poly);
  }
}

TEST(Moments, Cardinalities) {
  auto e3 = cglmp(3);
  EXPECT_EQ(build_moment_structure(e3.scenario, e3.poly, generating_sequence(e3.scenario, "1+AB")).m(), 169u);
  auto e4 = cglmp(4);
  EXPECT_EQ(build_moment_structure(e4.scenario, e4.poly, generating_sequence(e4.scenario, "1+AB")).m(), 625u);
  auto e2 = chsh();
  EXPECT_EQ(build_moment_structure(e2.scenario, e2.poly, generating_sequence(e2.scenario, "1+AB")).m(), 25u);
}

TEST(Moments, ObjectiveOutsideSpan) {
  Scenario sc = Scenario::uniform(2, 2, 2);
  try {
    build_moment_structure(sc, Polynomial::parse("A0|0 A0|1 A0|0"), generating_sequence(sc, "1"));
    FAIL();
  } catch (const RelaxationError& e) {
    EXPECT_NE(std::string(e.what()).find("A0|0 A0|1 A0|0"), std::string::npos);
  }
}

TEST(Moments, MomentMatrixOfRealization) {
  auto r = cglmp_optimal_realization(2);
  auto e = chsh();
  auto ms = build_moment_structure(e.scenario, e.poly, generating_sequence(e.scenario, "1+AB"));
  auto y = realization_moments(r, ms.basis);
  auto z = moment_matrix(ms, y);
  std::vector<Polynomial> flat;
  for (const auto& row : ms.xi) flat.insert(flat.end(), row.begin(), row.end());
  auto direct = realization_moments(r, flat);
  for (std::size_t i = 0; i < ms.n(); ++i)
    for (std::size_t j = 0; j < ms.n(); ++j) EXPECT_EQ(z(i, j), direct[i * ms.n() + j]);
}

TEST(Symmetrize, ChshLevelOne) {
  auto ms = chsh_level1();
  auto g = FiniteGroup::closure(cglmp_symmetry_generators(2));
  auto sm = symmetrize_moments(ms, g);
  ASSERT_EQ(sm.size(), 2u);
  EXPECT_EQ(sm.tilde_basis[1], Polynomial::parse("A0|1 + B0|0 - A0|0 B0|0 + A0|0 B0|1 - A0|1 B0|0 - A0|1 B0|1"));
  EXPECT_EQ(sm.tilde_b, (std::vector<Scalar>{2, -4}));
}

TEST(Symmetrize, Cardinalities) {
  auto e2 = chsh();
  auto g2 = FiniteGroup::closure(cglmp_symmetry_generators(2));
  auto ms2 = build_moment_structure(e2.scenario, e2.poly, generating_sequence(e2.scenario, "1+AB"));
  // Three elements, including [A0|0,A0|1][B0|0,B0|1].
  EXPECT_EQ(symmetrize_moments(ms2, g2).size(), 3u);
  auto e3 = cglmp(3);
  auto ms3 = build_moment_structure(e3.scenario, e3.poly, generating_sequence(e3.scenario, "1+AB"));
  EXPECT_EQ(symmetrize_moments(ms3, FiniteGroup::closure(cglmp_symmetry_generators(3))).size(), 11u);
  auto e4 = cglmp(4);
  auto ms4 = build_moment_structure(e4.scenario, e4.poly, generating_sequence(e4.scenario, "1+AB"));
  EXPECT_EQ(symmetrize_moments(ms4, FiniteGroup::closure(cglmp_symmetry_generators(4))).size(), 26u);
}

TEST(Symmetrize, Invariants) {
  auto e = cglmp(3);
  auto g = FiniteGroup::closure(cglmp_symmetry_generators(3));
  auto ms = build_moment_structure(e.scenario, e.poly, generating_sequence(e.scenario, "1+AB"));
  auto sm = symmetrize_moments(ms, g);
  // averaged basis = w + W tilde
  for (std::size_t k = 0; k < ms.m(); k += 7) {
    Polynomial r = sm.w[k];
    for (std::size_t l = 1; l < sm.size(); ++l) r += sm.tilde_basis[l] * sm.W[k][l];
    EXPECT_EQ(r, group_average(ms.basis[k], e.scenario, g)) << k;
  }
  for (const auto& p : sm.tilde_basis) EXPECT_TRUE(p.is_hermitian());
  // A'_l commutes with the representation
  auto rho = representation_on(ms.sequence.entries, e.scenario, g);
  for (std::size_t s = 0; s < g.generators().size(); ++s) {
    const auto& r = rho(g.generator_index(s));
    for (const auto& a : sm.Aprime) EXPECT_EQ(r * a * r.adjoint(), a);
  }
  // objective: b0 + b^T (w + W y) == b~0 + b~^T y, coefficientwise in y
  Scalar c0;
  for (std::size_t k = 0; k < ms.m(); ++k) c0 += ms.b[k] * sm.w[k];
  EXPECT_EQ(c0, sm.tilde_b[0]);
  for (std::size_t l = 1; l < sm.size(); ++l) {
    Scalar c;
    for (std::size_t k = 0; k < ms.m(); ++k) c += ms.b[k] * sm.W[k][l];
    EXPECT_EQ(c, sm.tilde_b[l]);
  }
}

TEST(Symmetrize, Idempotent) {
  auto e = chsh();
  auto g = FiniteGroup::closure(cglmp_symmetry_generators(2));
  auto ms = build_moment_structure(e.scenario, e.poly, generating_sequence(e.scenario, "1+AB"));
  auto sm = symmetrize_moments(ms, g);
  for (std::size_t l = 0; l < sm.size(); ++l) EXPECT_EQ(group_average(sm.tilde_basis[l], e.scenario, g), sm.tilde_basis[l]);
  // Structure whose basis is already averaged: W is the identity on the span.
  MomentStructure avg = ms;
  avg.basis = sm.tilde_basis;
  avg.A.assign(sm.size(), {});
  avg.b = sm.tilde_b;
  auto again = symmetrize_moments(avg, g);
  ASSERT_EQ(again.size(), sm.size());
  EXPECT_EQ(again.tilde_basis, sm.tilde_basis);
  for (std::size_t l = 1; l < sm.size(); ++l)
    for (std::size_t j = 1; j < sm.size(); ++j) EXPECT_EQ(again.W[l][j], Scalar(l == j ? 1 : 0));
}

TEST(Conjugation, ChshDropsImaginaryMoments) {
  auto ms = chsh_level1();
  auto cr = conjugation_reduction(ms);
  ASSERT_TRUE(cr.applied) << cr.reason;
  std::vector<int> want(13, 1);
  want[6] = want[8] = -1;
  EXPECT_EQ(cr.F, want);
  EXPECT_EQ(cr.reduced.m(), 11u);
  EXPECT_EQ(cr.kept[6], 7u);
}

TEST(Conjugation, RefusesWhenObjectiveIsNotInvariant) {
  Scenario sc = Scenario::uniform(2, 2, 2);
  auto ms = build_moment_structure(sc, Polynomial::parse("i A0|0 A0|1 - i A0|1 A0|0"), generating_sequence(sc, "1"));
  auto cr = conjugation_reduction(ms);
  EXPECT_FALSE(cr.applied);
  EXPECT_EQ(cr.reduced.m(), ms.m());
  EXPECT_FALSE(cr.reason.empty());
}

TEST(GeneratingSequence, OnePlusAbPlusAbc) {
  Scenario three = Scenario::uniform(3, 2, 2);
  EXPECT_EQ(generating_sequence(three, "1+AB").size(), 19u);
  auto q = generating_sequence(three, "1+AB+ABC");
  EXPECT_EQ(q.size(), 27u);
  EXPECT_EQ(q.tag, "1+AB+ABC");
  // Two parties: nothing beyond 1+AB.
  Scenario two = Scenario::uniform(2, 2, 3);
  EXPECT_EQ(generating_sequence(two, "1+AB+ABC").size(), generating_sequence(two, "1+AB").size());
  EXPECT_NO_THROW(custom_sequence(three, q.entries));
}
