#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "symsdp/assemble.hpp"
#include "symsdp/scenarios.hpp"

using namespace symsdp;

namespace {

const double kTsirelson = 2 * std::sqrt(2.0);

MomentStructure structure(int d, const char* level) {
  auto e = cglmp(d);
  return build_moment_structure(e.scenario, e.poly, generating_sequence(e.scenario, level));
}

BlockSdpProblem symmetrized(int d, const char* level) {
  auto e = cglmp(d);
  auto ms = build_moment_structure(e.scenario, e.poly, generating_sequence(e.scenario, level));
  auto g = FiniteGroup::closure(cglmp_symmetry_generators(d));
  auto sm = symmetrize_moments(ms, g);
  auto rho = representation_on(ms.sequence.entries, e.scenario, g);
  if (dihedral_irreps_exact(d)) return symmetrized_problem(sm, decompose(g, rho, dihedral_irreps(d)));
  Representation<Complex> rc;
  for (const auto& m : rho.images) rc.images.push_back(convert<Complex>(m));
  return symmetrized_problem(sm, decompose(g, rc, dihedral_irreps_numeric(d)));
}

BlockSdpProblem keep_only(const BlockSdpProblem& p, std::set<std::size_t> keep) {
  std::set<std::size_t> zero;
  for (std::size_t i = 0; i < p.num_blocks(); ++i)
    if (!keep.count(i)) zero.insert(i);
  return restrict_blocks(p, zero);
}

std::vector<int> z_ranks(const RankReport& r) {
  std::vector<int> v;
  for (const auto& b : r.blocks) v.push_back(b.z);
  return v;
}
std::vector<int> x_ranks(const RankReport& r) {
  std::vector<int> v;
  for (const auto& b : r.blocks) v.push_back(b.x);
  return v;
}

}  // namespace

TEST(Solve, ChshLevelOne) {
  auto t0 = std::chrono::steady_clock::now();
  auto p = moment_problem(structure(2, "1"));
  auto s = solve(p);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ASSERT_EQ(s.status, SdpStatus::optimal) << s.message;
  EXPECT_NEAR(s.dual_value, kTsirelson, 1e-6);
  EXPECT_NEAR(s.primal_value, kTsirelson, 1e-6);
  EXPECT_LE(s.gap, 1e-9 * (1 + std::abs(s.primal_value)));
  EXPECT_LE(s.primal_residual, 1e-8);
  EXPECT_LT(secs, 1.0);
  // Z has rank 3, X rank 2
  auto r = complementarity_ranks(p, s);
  EXPECT_EQ(r.blocks[0].z, 3);
  EXPECT_EQ(r.blocks[0].x, 2);
}

TEST(Solve, ChshSymmetrizedExactLp) {
  auto p = symmetrized(2, "1");
  ASSERT_TRUE(lp_applicable(p));
  auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  ASSERT_TRUE(s.exact);
  EXPECT_EQ(s.value_exact, Scalar::sqrt(2) * Scalar(2));
  EXPECT_EQ(s.y_exact[1], Scalar::rational(1, 2) - Scalar::sqrt(2) / Scalar(2));
  // Only the c+ block carries a nonzero X~.
  ASSERT_EQ(s.x_exact.size(), 7u);
  EXPECT_TRUE(s.x_exact[0].is_zero());
  EXPECT_TRUE(s.x_exact[4].is_zero());
  EXPECT_EQ(s.x_exact[6], Scalar(4) * (Scalar::sqrt(2) - Scalar(1)));
}

TEST(Solve, LpAgreesWithIpm) {
  for (const char* lv : {"1", "1+AB"}) {
    auto p = symmetrized(2, lv);
    if (std::string(lv) == "1+AB") p = keep_only(p, {6});
    ASSERT_TRUE(lp_applicable(p)) << lv;
    auto lp = solve(p);
    SdpOptions o;
    o.tol = 1e-12;
    auto ipm = solve_ipm(p, o);
    ASSERT_EQ(ipm.status, SdpStatus::optimal) << lv << " " << ipm.message;
    EXPECT_NEAR(ipm.dual_value, lp.value_exact.to_double(), 1e-10) << lv;
    EXPECT_NEAR(ipm.primal_value, lp.value_exact.to_double(), 1e-10) << lv;
  }
}

TEST(Solve, SymmetrizedMatchesUnsymmetrized) {
  for (auto [d, lv] : {std::pair{2, "1"}, {2, "1+AB"}, {3, "1+AB"}}) {
    auto full = solve(moment_problem(structure(d, lv)));
    auto sym = solve(symmetrized(d, lv));
    ASSERT_EQ(full.status, SdpStatus::optimal) << d << lv;
    ASSERT_EQ(sym.status, SdpStatus::optimal) << d << lv;
    EXPECT_NEAR(full.dual_value, sym.dual_value, 1e-6) << d << lv;
  }
}

TEST(Solve, CglmpThree) {
  auto s = solve(symmetrized(3, "1+AB"));
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.dual_value, 1 + std::sqrt(11.0 / 3.0), 1e-6);
}

TEST(Solve, CglmpFourNumeric) {
  auto p = symmetrized(4, "1+AB");
  EXPECT_FALSE(p.A_exact.has_value());
  auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.dual_value, 2.9727, 1e-3);
}

TEST(Solve, WeakDualityAndComplementarity) {
  const double tol = 1e-9;
  for (auto [d, lv] : {std::pair{2, "1"}, {2, "1+AB"}, {2, "2"}, {3, "1+AB"}}) {
    for (bool sym : {false, true}) {
      auto p = sym ? symmetrized(d, lv) : moment_problem(structure(d, lv));
      SdpOptions o;
      o.tol = tol;
      auto s = solve_ipm(p, o);
      ASSERT_EQ(s.status, SdpStatus::optimal) << d << lv << sym;
      EXPECT_LE(s.dual_value, s.primal_value + tol * (1 + std::abs(s.primal_value))) << d << lv << sym;
      auto r = complementarity_ranks(p, s);
      EXPECT_TRUE(r.consistent) << r.warning;
      // tr(XZ) is the gap; ||XZ||_F can only be bounded by its square root.
      for (double res : r.trace_residuals) EXPECT_LE(res, 10 * tol * (1 + std::abs(s.primal_value))) << d << lv << sym;
      for (double res : r.residuals) EXPECT_LE(res, 10 * std::sqrt(tol)) << d << lv << sym;
    }
  }
}

TEST(Ranks, ChshLevelOne) {
  auto p = symmetrized(2, "1");
  auto r = complementarity_ranks(p, solve(p));
  EXPECT_EQ(z_ranks(r), (std::vector<int>{1, -1, -1, -1, 1, -1, 0}));
  EXPECT_EQ(x_ranks(r), (std::vector<int>{0, -1, -1, -1, 0, -1, 1}));
}

TEST(Ranks, ChshOnePlusAb) {
  auto p = symmetrized(2, "1+AB");
  auto full = solve(p);
  EXPECT_EQ(z_ranks(complementarity_ranks(p, full)), (std::vector<int>{1, -1, 1, -1, 1, 0, 0}));
  auto q = keep_only(p, {6});
  auto s = solve(q);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_EQ(s.value_exact, Scalar::sqrt(2) * Scalar(2));
  EXPECT_EQ(x_ranks(complementarity_ranks(q, s)), (std::vector<int>{0, -1, 0, -1, 0, 0, 1}));
}

TEST(Ranks, CglmpThree) {
  auto p = symmetrized(3, "1+AB");
  auto full = solve(p);
  EXPECT_EQ(z_ranks(complementarity_ranks(p, full)), (std::vector<int>{2, -1, 1, -1, 1, 1, 0, 0, 1}));
  auto q = keep_only(p, {7, 8});
  auto s = solve(q);
  ASSERT_EQ(s.status, SdpStatus::optimal);
  EXPECT_NEAR(s.dual_value, full.dual_value, 1e-8);
  EXPECT_EQ(x_ranks(complementarity_ranks(q, s)), (std::vector<int>{0, -1, 0, -1, 0, 0, 0, 2, 1}));
}

TEST(Restrict, EmptySetIsIdentity) {
  auto p = symmetrized(2, "1");
  auto q = restrict_blocks(p, {});
  EXPECT_EQ(q.frozen, p.frozen);
  EXPECT_EQ(solve(q).value_exact, solve(p).value_exact);
  EXPECT_THROW(restrict_blocks(p, {7}), SdpError);
}

TEST(Restrict, ZeroingASupportBlockLosesTheBound) {
  // X~^(7) has rank 1 at the optimum; without it the moment side is unbounded.
  auto p = restrict_blocks(symmetrized(2, "1"), {6});
  auto s = solve(p);
  EXPECT_EQ(s.status, SdpStatus::primal_infeasible);
  ASSERT_EQ(s.ray.size(), 2u);
  EXPECT_LT(s.ray[1], 0);
  auto ipm = solve_ipm(p);
  EXPECT_EQ(ipm.status, SdpStatus::primal_infeasible);
}

TEST(Solve, ZeroProblem) {
  // No variables: Z = A0 = diag(1, 2), X = 0.
  ComplexMatrix a0(2, 2);
  a0(0, 0) = 1;
  a0(1, 1) = 2;
  auto p = make_problem(std::vector<std::vector<ComplexMatrix>>{{a0}}, {0.5});
  auto s = solve(p);
  ASSERT_EQ(s.status, SdpStatus::optimal) << s.message;
  EXPECT_NEAR(s.dual_value, 0.5, 1e-9);
  EXPECT_NEAR(s.primal_value, 0.5, 1e-9);
  auto r = complementarity_ranks(p, s);
  EXPECT_EQ(r.blocks[0].z, 2);
  EXPECT_EQ(r.blocks[0].x, 0);
}

TEST(Solve, InfeasibleMoment) {
  // Z = -1 + 0 y is never PSD.
  ComplexMatrix a0(1, 1), a1(1, 1);
  a0(0, 0) = -1;
  auto p = make_problem(std::vector<std::vector<ComplexMatrix>>{{a0}, {a1}}, {0, 0});
  auto s = solve_ipm(p);
  EXPECT_EQ(s.status, SdpStatus::dual_infeasible) << s.message;
}

TEST(Solve, RejectsBadData) {
  ComplexMatrix a0(2, 2);
  a0(0, 1) = 1;
  EXPECT_THROW(solve(make_problem(std::vector<std::vector<ComplexMatrix>>{{a0}}, {0})), SdpError);
}

TEST(Sdpa, ChshSymmetrized) {
  auto p = symmetrized(2, "1");
  auto d = read_sdpa(sdpa_string(p));
  EXPECT_EQ(d.block_struct, (std::vector<long>{1, 1, 1}));
  ASSERT_EQ(d.c.size(), 1u);
  EXPECT_EQ(d.c[0], 4.0);
  EXPECT_EQ(d.F[0][1][0][0], -0.5);
  EXPECT_NEAR(d.F[1][2][0][0], std::sqrt(2.0) + 1, 1e-15);
}

TEST(Sdpa, ChshUnsymmetrizedRealified) {
  // Two moments are imaginary, so the 5x5 block is written as a 10x10 real block.
  auto p = moment_problem(structure(2, "1"));
  auto d = read_sdpa(sdpa_string(p));
  EXPECT_EQ(d.block_struct, (std::vector<long>{10}));
  ASSERT_EQ(d.c.size(), 12u);
  for (std::size_t l = 0; l <= 12; ++l)
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        Complex a = p.A[l][0](i, j) * (l == 0 ? -1.0 : 1.0);
        EXPECT_LE(std::abs(d.F[l][0][i][j] - a.real()), 1e-15);
        EXPECT_LE(std::abs(d.F[l][0][i + 5][j] - a.imag()), 1e-15);
        EXPECT_LE(std::abs(d.F[l][0][i + 5][j + 5] - a.real()), 1e-15);
      }
}

TEST(Sdpa, ChshUnsymmetrizedRoundTrip) {
  auto cr = conjugation_reduction(structure(2, "1"));
  ASSERT_TRUE(cr.applied);
  auto p = moment_problem(cr.reduced);
  auto d = read_sdpa(sdpa_string(p));
  EXPECT_EQ(d.block_struct, (std::vector<long>{5}));
  ASSERT_EQ(d.c.size(), 10u);
  for (std::size_t l = 0; l <= 10; ++l)
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        double want = p.A[l][0](i, j).real() * (l == 0 ? -1 : 1);
        EXPECT_LE(std::abs(d.F[l][0][i][j] - want), 1e-15);
      }
  for (std::size_t l = 1; l <= 10; ++l) EXPECT_EQ(d.c[l - 1], -p.b[l]);
}

TEST(Sdpa, ComplexBlocksAreRealified) {
  auto p = symmetrized(4, "1+AB");
  auto d = read_sdpa(sdpa_string(p));
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    if (!p.block_sizes[i]) continue;
    long s = static_cast<long>(p.block_sizes[i]);
    ASSERT_LT(k, d.block_struct.size());
    EXPECT_TRUE(d.block_struct[k] == s || d.block_struct[k] == 2 * s);
    ++k;
  }
  EXPECT_EQ(k, d.block_struct.size());
  EXPECT_EQ(d.c.size(), p.num_vars());
}

TEST(Sdpa, EmptyProblem) {
  auto p = make_problem(std::vector<std::vector<ComplexMatrix>>{std::vector<ComplexMatrix>{}}, {0});
  auto text = sdpa_string(p);
  auto d = read_sdpa(text);
  EXPECT_TRUE(d.block_struct.empty());
  EXPECT_TRUE(d.c.empty());
  EXPECT_NE(text.find('"'), std::string::npos);
}

TEST(Sdpa, FrozenBlocksAreOmitted) {
  auto p = restrict_blocks(symmetrized(2, "1"), {0});
  EXPECT_EQ(read_sdpa(sdpa_string(p)).block_struct, (std::vector<long>{1, 1}));
}
