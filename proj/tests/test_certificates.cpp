#include <gtest/gtest.h>

#include <random>

#include "symsdp/assemble.hpp"
#include "symsdp/certificates.hpp"
#include "symsdp/scenarios.hpp"

using namespace symsdp;

namespace {

const Scalar r2 = Scalar::sqrt(2);
const Scalar cm = r2 - Scalar(1);  // sqrt(2) - 1
const Scalar cp = r2 + Scalar(1);

std::string fixture(const std::string& name) { return std::string(SYMSDP_FIXTURE_DIR) + "/" + name; }

ExactMatrix from_rows(std::vector<std::vector<Scalar>> rows) {
  ExactMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

ExactMatrix reconstruct(const LdlResult& f) {
  ExactMatrix d(f.rank(), f.rank());
  for (std::size_t k = 0; k < f.rank(); ++k) d(k, k) = f.D[k];
  return f.L * d * f.L.adjoint();
}

struct Symmetrized {
  BellExpression e;
  GeneratingSequence q;
  SymmetrizedMoments sm;
  IsotypicDecomposition<Scalar> dec;
  BlockSdpProblem p;
};

Symmetrized symmetrized(int d, const char* level) {
  auto e = cglmp(d);
  auto q = generating_sequence(e.scenario, level);
  auto ms = build_moment_structure(e.scenario, e.poly, q);
  auto g = FiniteGroup::closure(cglmp_symmetry_generators(d));
  auto sm = symmetrize_moments(ms, g);
  auto rho = representation_on(ms.sequence.entries, e.scenario, g);
  auto dec = decompose(g, rho, dihedral_irreps(d));
  auto p = symmetrized_problem(sm, dec);
  return {e, q, sm, dec, p};
}

ExactMatrix random_exact(std::mt19937& rng, std::size_t r, std::size_t c, bool complex) {
  std::uniform_int_distribution<int> u(-2, 2);
  ExactMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      m(i, j) = Scalar(u(rng));
      if (complex) m(i, j) += Scalar(u(rng)) * Scalar::i();
    }
  return m;
}

}  // namespace

TEST(Ldl, ChshOptimum) {
  auto e = chsh();
  auto p = moment_problem(build_moment_structure(e.scenario, e.poly, generating_sequence(e.scenario, "1")));
  auto x = round_to_exact(p, solve(p), FieldTower({2}, false));
  ASSERT_EQ(x.mu, Scalar(2) * r2);
  auto f = ldl(x.X[0]);
  ASSERT_EQ(f.rank(), 2u);
  EXPECT_EQ(f.D[0], Scalar(2) * cm);
  EXPECT_EQ(f.D[1], cm);
  Scalar h = r2 / Scalar(2);
  EXPECT_EQ(f.L(0, 0), Scalar(1));
  EXPECT_EQ(f.L(1, 0), -Scalar(1) - h);
  EXPECT_EQ(f.L(2, 0), h);
  EXPECT_EQ(f.L(3, 0), h);
  EXPECT_EQ(f.L(4, 0), -Scalar(1) - h);
  EXPECT_TRUE(f.L(0, 1).is_zero());
  EXPECT_EQ(f.L(1, 1), Scalar(1));
  EXPECT_EQ(f.L(2, 1), cp);
  EXPECT_EQ(f.L(3, 1), -cp);
  EXPECT_EQ(f.L(4, 1), -Scalar(1));
  EXPECT_EQ(reconstruct(f), x.X[0]);
  EXPECT_TRUE(psd_check_minors(x.X[0]));
}

TEST(Ldl, Identity) {
  auto f = ldl(ExactMatrix::identity(4));
  EXPECT_EQ(f.rank(), 4u);
  EXPECT_EQ(f.L, ExactMatrix::identity(4));
  for (const auto& d : f.D) EXPECT_EQ(d, Scalar(1));
}

TEST(Ldl, IndefiniteFailsAtSecondPivot) {
  auto m = from_rows({{Scalar(1), Scalar(0)}, {Scalar(0), Scalar(-1)}});
  try {
    ldl(m);
    FAIL() << "expected NotPsdError";
  } catch (const NotPsdError& e) {
    EXPECT_EQ(e.minor(), 2u);
  }
  EXPECT_FALSE(is_psd(m));
  EXPECT_FALSE(psd_check_minors(m));
}

TEST(Ldl, ZeroPivotWithNonzeroRow) {
  auto m = from_rows({{Scalar(0), Scalar(1)}, {Scalar(1), Scalar(1)}});
  EXPECT_THROW(ldl(m), NotPsdError);
  EXPECT_FALSE(psd_check_minors(m));
}

TEST(Ldl, NonHermitianRejected) {
  auto m = from_rows({{Scalar(1), Scalar(1)}, {Scalar(0), Scalar(1)}});
  EXPECT_THROW(ldl(m), CertificateError);
}

TEST(Ldl, LargestDiagonalPivoting) {
  auto m = from_rows({{Scalar(1), Scalar(2)}, {Scalar(2), Scalar(5)}});
  auto f = ldl(m, LdlPivoting::largest_diagonal);
  ASSERT_EQ(f.rank(), 2u);
  EXPECT_EQ(f.order[0], 1u);
  EXPECT_EQ(f.D[0], Scalar(5));
  EXPECT_EQ(f.D[1], Scalar::rational(1, 5));
  EXPECT_EQ(reconstruct(f), m);
}

TEST(Ldl, ZeroMatrix) {
  ExactMatrix z(3, 3);
  EXPECT_EQ(ldl(z).rank(), 0u);
  EXPECT_TRUE(psd_check_minors(z));
  EXPECT_TRUE(is_psd(z));
  EXPECT_FALSE(psd_check_minors(from_rows({{Scalar(0), Scalar(0)}, {Scalar(0), Scalar(-1)}})));
}

TEST(Ldl, ReconstructsRandomGramMatrices) {
  std::mt19937 rng(7);
  for (int t = 0; t < 60; ++t) {
    std::size_t n = 1 + t % 6, k = 1 + (t / 6) % n;
    auto v = random_exact(rng, n, k, t % 2 == 1);
    if (t % 3 == 0)
      for (std::size_t i = 0; i < n; ++i) v(i, 0) *= r2;
    auto m = v * v.adjoint();
    for (auto piv : {LdlPivoting::none, LdlPivoting::largest_diagonal}) {
      auto f = ldl(m, piv);
      EXPECT_EQ(reconstruct(f), m) << "trial " << t;
      EXPECT_LE(f.rank(), k);
      for (const auto& d : f.D) EXPECT_GT(d, Scalar(0));
    }
  }
}

TEST(Ldl, AgreesWithPrincipalMinors) {
  std::mt19937 rng(11);
  int psd = 0;
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 1 + t % 6;
    ExactMatrix m;
    if (t % 2 == 0) {
      auto v = random_exact(rng, n, 1 + t % 3, t % 4 == 0);
      m = v * v.adjoint();
      // small indefinite perturbation on one diagonal entry half of the time
      if (t % 8 == 2) m(0, 0) -= Scalar(1);
    } else {
      auto a = random_exact(rng, n, n, t % 4 == 1);
      m = a + a.adjoint();
    }
    bool by_minors = psd_check_minors(m);
    EXPECT_EQ(is_psd(m), by_minors) << "trial " << t;
    psd += by_minors;
  }
  EXPECT_GT(psd, 50);
  EXPECT_LT(psd, 200);
}

TEST(Rounding, ChshSymmetrizedIsExactLp) {
  auto s = symmetrized(2, "1");
  auto sol = solve(s.p);
  ASSERT_TRUE(sol.exact);
  auto x = round_to_exact(s.p, sol, FieldTower({2}, false));
  EXPECT_EQ(x.mu, Scalar(2) * r2);
  EXPECT_EQ(check_block_solution(s.p, x), Scalar(2) * r2);
}

TEST(Rounding, WrongTowerFails) {
  auto e = chsh();
  auto p = moment_problem(build_moment_structure(e.scenario, e.poly, generating_sequence(e.scenario, "1")));
  auto s = solve(p);
  EXPECT_THROW(round_to_exact(p, s, FieldTower({3}, false)), CertificateError);
}

TEST(Sos, ChshFull) {
  auto e = chsh();
  auto q = generating_sequence(e.scenario, "1");
  auto p = moment_problem(build_moment_structure(e.scenario, e.poly, q));
  auto x = round_to_exact(p, solve(p), FieldTower({2}, false));
  auto sos = extract_sos(x.X[0], x.mu, q);
  EXPECT_EQ(sos.terms.size(), 2u);
  EXPECT_TRUE(verify_sos(sos, e.poly).valid);
  EXPECT_EQ(sos.expand(), Polynomial(sos.mu) - e.poly);
}

TEST(Sos, ChshBlock) {
  auto s = symmetrized(2, "1");
  auto x = round_to_exact(s.p, solve(s.p), FieldTower({2}, false));
  auto sos = extract_sos(x, s.dec, s.q);
  EXPECT_EQ(sos.mu, Scalar(2) * r2);
  EXPECT_TRUE(verify_sos(sos, s.e.poly).valid);
}

TEST(Sos, CglmpThreeByComplementarity) {
  auto s = symmetrized(3, "1+AB");
  std::set<std::size_t> zero;
  for (std::size_t i = 0; i < 7; ++i) zero.insert(i);
  auto pr = restrict_blocks(s.p, zero);
  auto num = solve(pr);
  ASSERT_EQ(num.status, SdpStatus::optimal);
  auto y = realization_moments(cglmp_optimal_realization(3), s.sm.tilde_basis);
  for (auto& v : y) v = v / y[0];
  auto x = complementary_solution(pr, y, &num);
  // 1 + sqrt(11/3)
  EXPECT_EQ(x.mu, Scalar(1) + Scalar::sqrt(33) / Scalar(3));
  EXPECT_EQ(check_block_solution(pr, x), x.mu);
  auto sos = extract_sos(x, s.dec, s.q);
  EXPECT_TRUE(verify_sos(sos, s.e.poly).valid);
}

TEST(Sos, PerturbationIsRejected) {
  auto c = read_certificate(fixture("chsh_level1.cert"));
  ASSERT_TRUE(verify_sos(c.sos, c.objective).valid);
  auto bad = c.sos;
  bad.terms[0].weight += Scalar::rational(1, 1000000);
  auto r = verify_sos(bad, c.objective);
  EXPECT_FALSE(r.valid);
  EXPECT_FALSE(r.difference.empty());
  bad = c.sos;
  bad.mu += Scalar::rational(1, 1000000);
  EXPECT_FALSE(verify_sos(bad, c.objective).valid);
  bad = c.sos;
  bad.terms[1].weight = -bad.terms[1].weight;
  EXPECT_FALSE(verify_sos(bad, c.objective).valid);
}

TEST(Sos, ZeroSolutionHasNoTerms) {
  auto q = generating_sequence(chsh().scenario, "1");
  auto sos = extract_sos(ExactMatrix(q.size(), q.size()), Scalar(0), q);
  EXPECT_TRUE(sos.terms.empty());
  EXPECT_TRUE(verify_sos(sos, Polynomial()).valid);
}

TEST(Sos, RealizationValueIsBelowBound) {
  for (int d : {2, 3}) {
    auto e = cglmp(d);
    auto r = cglmp_optimal_realization(d);
    auto v = realization_moments(r, {Polynomial(Scalar(1)), e.poly});
    Scalar value = v[1] / v[0];
    Scalar mu = d == 2 ? Scalar(2) * r2 : Scalar(1) + Scalar::sqrt(33) / Scalar(3);
    EXPECT_LE(value, mu) << d;
    EXPECT_EQ(value, mu) << d;
  }
}

TEST(Fixtures, AllVerify) {
  for (std::string f : {"chsh_level1.cert", "chsh_block.cert", "sliwa3.cert", "sliwa10.cert", "sliwa11.cert", "sliwa14.cert"}) {
    auto c = read_certificate(fixture(f));
    auto r = verify_sos(c.sos, c.objective);
    EXPECT_TRUE(r.valid) << f << ": " << r.difference;
    auto builtin = c.name == "chsh" ? chsh() : builtin_expression(c.name);
    EXPECT_EQ(builtin.poly, c.objective) << f;
    EXPECT_EQ(builtin.scenario, c.scenario) << f;
  }
}

TEST(Fixtures, SliwaBounds) {
  EXPECT_EQ(read_certificate(fixture("sliwa3.cert")).sos.mu, Scalar(2) * r2);
  EXPECT_EQ(read_certificate(fixture("sliwa10.cert")).sos.mu, Scalar(4));
  EXPECT_EQ(read_certificate(fixture("sliwa11.cert")).sos.mu, Scalar(4) * r2);
  EXPECT_EQ(read_certificate(fixture("sliwa14.cert")).sos.mu, Scalar(4) * r2);
}

TEST(Format, RoundTrip) {
  for (std::string f : {"chsh_level1.cert", "sliwa11.cert"}) {
    auto c = read_certificate(fixture(f));
    auto text = write_certificate(c);
    auto d = parse_certificate(text);
    EXPECT_EQ(d.name, c.name);
    EXPECT_EQ(d.scenario, c.scenario);
    EXPECT_EQ(d.objective, c.objective);
    EXPECT_EQ(d.sos.mu, c.sos.mu);
    ASSERT_EQ(d.sos.terms.size(), c.sos.terms.size());
    for (std::size_t k = 0; k < c.sos.terms.size(); ++k) {
      EXPECT_EQ(d.sos.terms[k].weight, c.sos.terms[k].weight);
      EXPECT_EQ(d.sos.terms[k].poly, c.sos.terms[k].poly);
    }
    EXPECT_EQ(d.sequence.size(), c.sequence.size());
    EXPECT_EQ(write_certificate(d), text);
  }
}

TEST(Format, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_certificate(text);
    } catch (const CertificateParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("certificate x\nscenario 2,2;2,2\nobjective A0|0 +\n"), 3u);
  EXPECT_EQ(line_of("# c\nscenario 2,2;2,x\n"), 2u);
  EXPECT_EQ(line_of("scenario 2,2;2,2\nobjective A0|0\nbound 1\nterm 1 A0|0\n"), 4u);
  EXPECT_EQ(line_of("scenario 2,2;2,2\nobjective A0|0\nbound 1\nfrobnicate\n"), 4u);
  EXPECT_EQ(line_of("objective A0|0\n"), 1u);
  EXPECT_EQ(line_of("scenario 2,2;2,2\nobjective A7|0\n"), 2u);
  EXPECT_NE(line_of("scenario 2,2;2,2\nobjective A0|0\n"), 0u);
  EXPECT_THROW(read_certificate(fixture("missing.cert")), CertificateError);
}
