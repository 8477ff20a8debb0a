#include <gtest/gtest.h>

#include <random>

#include "symsdp/relaxation.hpp"
#include "symsdp/reptheory.hpp"
#include "symsdp/scenarios.hpp"

using namespace symsdp;

namespace {

struct Setup {
  FiniteGroup g;
  MomentStructure ms;
  Representation<Scalar> rho;
};

Setup setup(int d, const char* level) {
  Setup s;
  auto e = cglmp(d);
  s.g = FiniteGroup::closure(cglmp_symmetry_generators(d));
  s.ms = build_moment_structure(e.scenario, e.poly, generating_sequence(e.scenario, level));
  s.rho = representation_on(s.ms.sequence.entries, e.scenario, s.g);
  return s;
}

Representation<Complex> to_complex(const Representation<Scalar>& r) {
  Representation<Complex> c;
  for (const auto& m : r.images) c.images.push_back(convert<Complex>(m));
  return c;
}

std::vector<std::size_t> sizes(std::initializer_list<std::size_t> l) { return l; }

}  // namespace

TEST(Irreps, DihedralFamilies) {
  for (int d = 2; d <= 5; ++d) {
    auto irr = dihedral_irreps_numeric(d);
    ASSERT_EQ(irr.size(), static_cast<std::size_t>(2 * d + 3));
    std::size_t sum = 0;
    for (const auto& s : irr) sum += s.dim() * s.dim();
    EXPECT_EQ(sum, static_cast<std::size_t>(8 * d));
    auto g = FiniteGroup::closure(cglmp_symmetry_generators(d));
    for (const auto& s : irr) EXPECT_NO_THROW(extend_representation(g, s.gen_images));
  }
  EXPECT_TRUE(dihedral_irreps_exact(2));
  EXPECT_TRUE(dihedral_irreps_exact(3));
  EXPECT_FALSE(dihedral_irreps_exact(4));
  EXPECT_THROW(dihedral_irreps(4), ExactUnsupported);
  auto irr = dihedral_irreps(2);
  EXPECT_EQ(trace(irr[4].gen_images[0]), Scalar::sqrt(2));
  EXPECT_EQ(trace(irr[6].gen_images[0]), -Scalar::sqrt(2));
  EXPECT_EQ(trace(irr[5].gen_images[0]), Scalar(0));
  for (const auto& m : irr[0].gen_images) EXPECT_EQ(m, ExactMatrix::identity(1));
}

TEST(Irreps, Abelian) {
  auto irr = abelian_irreps({2, 2, 3});
  EXPECT_EQ(irr.size(), 12u);
  EXPECT_EQ(irr[1].label, "chi(0,0,1)");
  EXPECT_EQ(irr[1].gen_images[2](0, 0), root_of_unity(3, 1));
  EXPECT_FALSE(abelian_irreps_exact({5}));
  EXPECT_EQ(abelian_irreps_numeric({5}).size(), 5u);
}

TEST(Serre, ProjectorsAndRanks) {
  auto s = setup(2, "1");
  auto irr = dihedral_irreps(2);
  std::vector<std::size_t> want{1, 0, 0, 0, 1, 0, 1};
  for (std::size_t i = 0; i < irr.size(); ++i) {
    auto sigma = extend_representation(s.g, irr[i].gen_images);
    auto p = serre_projectors(s.g, s.rho, sigma);
    EXPECT_EQ(p[0] * p[0], p[0]) << i;
    EXPECT_EQ(rank(p[0]), want[i]) << i;
  }
  // trivial irrep: the group averager
  auto triv = extend_representation(s.g, irr[0].gen_images);
  ExactMatrix avg(5, 5);
  for (const auto& r : s.rho.images) avg += r;
  EXPECT_EQ(serre_projectors(s.g, s.rho, triv)[0], avg * Scalar(mpq_class(1, 16)));
}

TEST(Decompose, ExactMultiplicities) {
  auto s1 = setup(2, "1");
  EXPECT_EQ(decompose(s1.g, s1.rho, dihedral_irreps(2)).multiplicities(), sizes({1, 0, 0, 0, 1, 0, 1}));
  auto s2 = setup(2, "1+AB");
  EXPECT_EQ(decompose(s2.g, s2.rho, dihedral_irreps(2)).multiplicities(), sizes({2, 0, 1, 0, 1, 1, 1}));
  auto s3 = setup(3, "1+AB");
  EXPECT_EQ(decompose(s3.g, s3.rho, dihedral_irreps(3)).multiplicities(), sizes({3, 0, 2, 0, 2, 2, 2, 2, 2}));
}

TEST(Decompose, NumericMultiplicitiesD4) {
  auto s = setup(4, "1+AB");
  auto dec = decompose(s.g, to_complex(s.rho), dihedral_irreps_numeric(4));
  EXPECT_EQ(dec.multiplicities(), sizes({4, 0, 0, 3, 3, 3, 3, 3, 3, 3, 3}));
}

TEST(Decompose, MissingIrreps) {
  auto s = setup(2, "1");
  auto irr = dihedral_irreps(2);
  irr.pop_back();
  try {
    decompose(s.g, s.rho, irr);
    FAIL();
  } catch (const DecompositionError& e) {
    EXPECT_NE(std::string(e.what()).find("missing irreps"), std::string::npos);
  }
}

TEST(Decompose, InvariantsExact) {
  auto s = setup(3, "1+AB");
  auto dec = decompose(s.g, s.rho, dihedral_irreps(3));
  std::size_t n = 0;
  for (const auto& c : dec.components) n += c.dim * c.multiplicity;
  EXPECT_EQ(n, s.rho.dim());
  EXPECT_EQ(dec.I * dec.I_inv, ExactMatrix::identity(n));
  for (std::size_t i = 0; i < dec.size(); ++i) {
    const auto& c = dec.components[i];
    // C_i invariant and positive definite; identity for unitary irreps
    for (std::size_t k = 0; k < s.g.order(); ++k) EXPECT_EQ(c.sigma(k).adjoint() * c.C * c.sigma(k), c.C);
    EXPECT_EQ(c.C, ExactMatrix::identity(c.dim));
    for (std::size_t j = 0; j < dec.size(); ++j) {
      ExactMatrix pj = dec.projection(i) * dec.injection(j);
      if (i == j)
        EXPECT_EQ(pj, ExactMatrix::identity(c.dim * c.multiplicity));
      else
        EXPECT_TRUE(pj.is_zero());
    }
  }
  // Schur residual sigma_g (I^-1 rho_g I)^-1 = 1
  for (std::size_t k = 0; k < s.g.order(); k += 5) {
    ExactMatrix sig(n, n);
    for (const auto& c : dec.components)
      for (std::size_t j = 0; j < c.multiplicity; ++j) sig.set_block(c.offset + j * c.dim, c.offset + j * c.dim, c.sigma(k));
    EXPECT_EQ(sig * inverse(ExactMatrix(dec.I_inv * s.rho(k) * dec.I)), ExactMatrix::identity(n));
  }
}

TEST(Decompose, NonUnitaryIrrepHasNontrivialC) {
  // sigma5 conjugated by a non-unitary matrix
  auto s = setup(2, "1");
  auto irr = dihedral_irreps(2);
  ExactMatrix t(2, 2);
  t(0, 0) = 2;
  t(0, 1) = 1;
  t(1, 1) = 1;
  for (auto& m : irr[4].gen_images) m = t * m * inverse(t);
  auto dec = decompose(s.g, s.rho, irr);
  const auto& c = dec.components[4];
  EXPECT_NE(c.C, ExactMatrix::identity(2));
  EXPECT_TRUE(c.C.is_hermitian());
  EXPECT_GT(c.C(0, 0).sign(), 0);
  EXPECT_GT(determinant(c.C).sign(), 0);
  for (const auto& m : irr[4].gen_images) EXPECT_EQ(m.adjoint() * c.C * m, c.C);
}

TEST(BlockProjection, ChshLevelOne) {
  auto s = setup(2, "1");
  auto sm = symmetrize_moments(s.ms, s.g);
  auto dec = decompose(s.g, s.rho, dihedral_irreps(2));
  auto b0 = project_z(dec, sm.Aprime[0]);
  auto b1 = project_z(dec, sm.Aprime[1]);
  Scalar cm = Scalar::sqrt(2) - 1, cp = Scalar::sqrt(2) + 1;
  // Blocks 1, 5, 7 carry (1, 0), (1/2, -c-), (1/2, c+) with c+- = sqrt(2) +- 1.
  std::vector<std::pair<Scalar, Scalar>> want{{1, 0}, {Scalar::rational(1, 2), -cm}, {Scalar::rational(1, 2), cp}};
  std::size_t idx[3] = {0, 4, 6};
  for (int t = 0; t < 3; ++t) {
    ASSERT_EQ(b0[idx[t]].rows(), 1u);
    EXPECT_EQ(b0[idx[t]](0, 0), want[t].first) << t;
    EXPECT_EQ(b1[idx[t]](0, 0), want[t].second) << t;
  }
}

TEST(BlockProjection, RoundTrip) {
  auto s = setup(3, "1+AB");
  auto dec = decompose(s.g, s.rho, dihedral_irreps(3));
  auto sm = symmetrize_moments(s.ms, s.g);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> u(-5, 5);
  ExactMatrix z(s.rho.dim(), s.rho.dim());
  for (const auto& a : sm.Aprime) z += a * Scalar(u(rng));
  auto zb = project_z(dec, z);
  EXPECT_EQ(unproject_z(dec, zb), z);
  // invariant X: group average of rho_g^dagger Y rho_g for a random Hermitian Y
  std::size_t n = s.rho.dim();
  ExactMatrix y(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      if (u(rng) < 3) continue;
      y(i, j) = Scalar(u(rng));
      y(j, i) = y(i, j);
    }
  ExactMatrix x(n, n);
  for (const auto& r : s.rho.images) x += r.adjoint() * y * r;
  auto xb = project_x(dec, x);
  EXPECT_EQ(unproject_x(dec, xb), x);
  // tr(Z X) = sum tr(Z~ X~)
  Scalar lhs = trace(ExactMatrix(z * x)), rhs;
  for (std::size_t i = 0; i < dec.size(); ++i)
    if (dec.components[i].multiplicity) rhs += trace(ExactMatrix(zb[i] * xb[i]));
  EXPECT_EQ(lhs, rhs);
  // a non-invariant matrix is rejected
  EXPECT_THROW(project_z(dec, y), DecompositionError);
}

TEST(BlockProjection, NumericRoundTrip) {
  auto s = setup(4, "1+AB");
  auto dec = decompose(s.g, to_complex(s.rho), dihedral_irreps_numeric(4));
  auto sm = symmetrize_moments(s.ms, s.g);
  ComplexMatrix z(s.rho.dim(), s.rho.dim());
  for (std::size_t l = 0; l < sm.size(); ++l) z += convert<Complex>(sm.Aprime[l]) * Complex(0.1 * static_cast<double>(l) - 1.0, 0);
  auto zb = project_z(dec, z);
  EXPECT_LT((unproject_z(dec, zb) - z).max_abs(), 1e-9);
}

TEST(Decompose, NumericMultiplicitiesD5) {
  auto s = setup(5, "1+AB");
  auto dec = decompose(s.g, to_complex(s.rho), dihedral_irreps_numeric(5));
  EXPECT_EQ(dec.multiplicities(), sizes({5, 0, 0, 4, 4, 4, 4, 4, 4, 4, 4, 4, 4}));
}
