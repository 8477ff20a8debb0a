#pragma once

#include <string>
#include <vector>

#include "symsdp/automorphism.hpp"
#include "symsdp/matrix.hpp"

namespace symsdp {

class DecompositionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Irrep given by the images of the group generators, in the order of
// FiniteGroup::generators().
template <class T>
struct Irrep {
  std::string label;
  std::vector<Matrix<T>> gen_images;
  std::size_t dim() const { return gen_images.at(0).rows(); }
};

// <a, x | a^{4d} = x^2 = xaxa = 1>: four characters and 2d-1 rotations by 2 pi k / 4d.
bool dihedral_irreps_exact(int d);
std::vector<Irrep<Scalar>> dihedral_irreps(int d);  // throws ExactUnsupported when not exact
std::vector<Irrep<Complex>> dihedral_irreps_numeric(int d);

// Characters of C_{n_1} x ... x C_{n_k}, one generator per factor.
bool abelian_irreps_exact(const std::vector<int>& orders);
std::vector<Irrep<Scalar>> abelian_irreps(const std::vector<int>& orders);
std::vector<Irrep<Complex>> abelian_irreps_numeric(const std::vector<int>& orders);

template <class U, class T>
Irrep<U> convert_irrep(const Irrep<T>& s) {
  Irrep<U> r{s.label, {}};
  for (const auto& m : s.gen_images) r.gen_images.push_back(convert<U>(m));
  return r;
}

namespace detail {
template <class T>
bool near(const Matrix<T>& a, const Matrix<T>& b, double tol) {
  if constexpr (FieldTraits<T>::exact) {
    return a == b;
  } else {
    return (a - b).max_abs() <= tol * std::max(1.0, std::max(a.max_abs(), b.max_abs()));
  }
}
}  // namespace detail

// P_{alpha beta} = (d/|G|) sum_g sigma_{g^-1}[beta][alpha] rho_g, for beta = 0.
template <class T>
std::vector<Matrix<T>> serre_projectors(const FiniteGroup& g, const Representation<T>& rho, const Representation<T>& sigma) {
  std::size_t d = sigma.dim(), n = rho.dim();
  T scale = FieldTraits<T>::from_scalar(Scalar(mpq_class(static_cast<long>(d), static_cast<long>(g.order()))));
  std::vector<Matrix<T>> p(d, Matrix<T>(n, n));
  for (std::size_t e = 0; e < g.order(); ++e) {
    const auto& si = sigma(g.inverse(e));
    for (std::size_t a = 0; a < d; ++a)
      if (!FieldTraits<T>::is_zero(si(0, a), 0)) p[a] += rho(e) * si(0, a);
  }
  for (auto& m : p) m = m * scale;
  return p;
}

template <class T>
struct IsotypicComponent {
  std::string label;
  std::size_t dim = 0, multiplicity = 0;
  std::size_t offset = 0;        // first column of this component in I
  Representation<T> sigma;       // images of every group element
  Matrix<T> C, C_inv;            // unitarizer and its inverse
};

template <class T>
struct IsotypicDecomposition {
  Matrix<T> I, I_inv;
  std::vector<IsotypicComponent<T>> components;
  double tol = 1e-9;
  std::size_t size() const { return components.size(); }
  // Columns of component i (I^(i)) and the matching rows of I^{-1}.
  Matrix<T> injection(std::size_t i) const {
    const auto& c = components[i];
    return I.block(0, c.offset, I.rows(), c.dim * c.multiplicity);
  }
  Matrix<T> projection(std::size_t i) const {
    const auto& c = components[i];
    return I_inv.block(c.offset, 0, c.dim * c.multiplicity, I.rows());
  }
  std::vector<std::size_t> multiplicities() const {
    std::vector<std::size_t> m;
    for (const auto& c : components) m.push_back(c.multiplicity);
    return m;
  }
};

template <class T>
IsotypicDecomposition<T> decompose(const FiniteGroup& g, const Representation<T>& rho, const std::vector<Irrep<T>>& irreps,
                                   double tol = 1e-9) {
  std::size_t n = rho.dim();
  IsotypicDecomposition<T> dec;
  dec.tol = tol;
  std::vector<Matrix<T>> cols;
  Scalar inv_order(mpq_class(1, static_cast<long>(g.order())));
  for (const auto& irr : irreps) {
    IsotypicComponent<T> c;
    c.label = irr.label;
    c.dim = irr.dim();
    try {
      c.sigma = extend_representation(g, irr.gen_images, tol);
    } catch (const HomomorphismError&) {
      throw DecompositionError("irrep " + irr.label + " is not a representation of the group");
    }
    c.C = Matrix<T>(c.dim, c.dim);
    for (const auto& s : c.sigma.images) c.C += s.adjoint() * s;
    c.C = c.C * FieldTraits<T>::from_scalar(inv_order);
    c.C_inv = inverse(c.C);
    auto p = serre_projectors(g, rho, c.sigma);
    auto ech = rref(p[0], tol);
    c.multiplicity = ech.pivots.size();
    c.offset = cols.size();
    for (std::size_t piv : ech.pivots) {
      Matrix<T> h = p[0].column(piv);
      for (std::size_t a = 0; a < c.dim; ++a) cols.push_back(p[a] * h);
    }
    dec.components.push_back(std::move(c));
  }
  if (cols.size() != n)
    throw DecompositionError("missing irreps: the listed irreps span " + std::to_string(cols.size()) + " of " + std::to_string(n) +
                             " dimensions (residual " + std::to_string(static_cast<long>(n) - static_cast<long>(cols.size())) + ")");
  dec.I = Matrix<T>(n, n);
  for (std::size_t j = 0; j < n; ++j) dec.I.set_block(0, j, cols[j]);
  try {
    dec.I_inv = inverse(dec.I);
  } catch (const SingularMatrix&) {
    throw DecompositionError("change of basis is singular; irreps are not inequivalent");
  }
  // rho_g I = I sigma_g on generators
  for (std::size_t s = 0; s < g.generators().size(); ++s) {
    std::size_t e = g.generator_index(s);
    Matrix<T> sig(n, n);
    for (const auto& c : dec.components)
      for (std::size_t j = 0; j < c.multiplicity; ++j) sig.set_block(c.offset + j * c.dim, c.offset + j * c.dim, c.sigma(e));
    if (!detail::near(Matrix<T>(rho(e) * dec.I), Matrix<T>(dec.I * sig), tol))
      throw DecompositionError("intertwining check failed for generator " + std::to_string(s));
  }
  return dec;
}

// Blocks X~^(i) or Z~^(i), each m_i x m_i.
template <class T>
using BlockList = std::vector<Matrix<T>>;

namespace detail {
// M' = sum_i B_i (x) K_i; reads B_i from the (j,0),(k,0) entries and checks the rest.
template <class T>
BlockList<T> read_blocks(const IsotypicDecomposition<T>& dec, const Matrix<T>& full, bool use_inverse, const T& scale) {
  BlockList<T> out;
  Matrix<T> rebuilt(full.rows(), full.cols());
  for (const auto& c : dec.components) {
    const Matrix<T>& k = use_inverse ? c.C_inv : c.C;
    Matrix<T> b(c.multiplicity, c.multiplicity);
    for (std::size_t j = 0; j < c.multiplicity; ++j)
      for (std::size_t l = 0; l < c.multiplicity; ++l) b(j, l) = full(c.offset + j * c.dim, c.offset + l * c.dim) / k(0, 0) * scale;
    if (c.multiplicity > 0) rebuilt.set_block(c.offset, c.offset, kron(Matrix<T>(b * (T(1) / scale)), k));
    out.push_back(std::move(b));
  }
  if (!near(rebuilt, full, dec.tol)) throw DecompositionError("matrix is not block diagonal in the isotypic basis; is it invariant?");
  return out;
}
}  // namespace detail

// Z~ blocks of an invariant Z (Z = rho_g Z rho_g^dagger): I^{-1} Z I^{-dagger} = sum Z~^(i) (x) C_i^{-1}.
template <class T>
BlockList<T> project_z(const IsotypicDecomposition<T>& dec, const Matrix<T>& z) {
  return detail::read_blocks(dec, Matrix<T>(dec.I_inv * z * dec.I_inv.adjoint()), true, FieldTraits<T>::one());
}

// X~ blocks of an invariant X (X = rho_g^dagger X rho_g): I^dagger X I = sum (1/d_i) X~^(i) (x) C_i,
// so that tr(Z X) = sum_i tr(Z~^(i) X~^(i)).
template <class T>
BlockList<T> project_x(const IsotypicDecomposition<T>& dec, const Matrix<T>& x) {
  Matrix<T> full = dec.I.adjoint() * x * dec.I;
  BlockList<T> out;
  Matrix<T> rebuilt(full.rows(), full.cols());
  for (const auto& c : dec.components) {
    T di = FieldTraits<T>::from_scalar(Scalar(static_cast<long>(c.dim)));
    Matrix<T> b(c.multiplicity, c.multiplicity);
    for (std::size_t j = 0; j < c.multiplicity; ++j)
      for (std::size_t l = 0; l < c.multiplicity; ++l) b(j, l) = full(c.offset + j * c.dim, c.offset + l * c.dim) / c.C(0, 0) * di;
    if (c.multiplicity > 0) rebuilt.set_block(c.offset, c.offset, kron(Matrix<T>(b * (T(1) / di)), c.C));
    out.push_back(std::move(b));
  }
  if (!detail::near(rebuilt, full, dec.tol)) throw DecompositionError("matrix is not block diagonal in the isotypic basis; is it invariant?");
  return out;
}

template <class T>
Matrix<T> unproject_z(const IsotypicDecomposition<T>& dec, const BlockList<T>& blocks) {
  std::size_t n = dec.I.rows();
  Matrix<T> full(n, n);
  for (std::size_t i = 0; i < dec.size(); ++i) {
    const auto& c = dec.components[i];
    if (c.multiplicity) full.set_block(c.offset, c.offset, kron(blocks[i], c.C_inv));
  }
  return dec.I * full * dec.I.adjoint();
}

template <class T>
Matrix<T> unproject_x(const IsotypicDecomposition<T>& dec, const BlockList<T>& blocks) {
  std::size_t n = dec.I.rows();
  Matrix<T> full(n, n);
  for (std::size_t i = 0; i < dec.size(); ++i) {
    const auto& c = dec.components[i];
    T inv_d = FieldTraits<T>::from_scalar(Scalar(mpq_class(1, static_cast<long>(c.dim))));
    if (c.multiplicity) full.set_block(c.offset, c.offset, kron(Matrix<T>(blocks[i] * inv_d), c.C));
  }
  return dec.I_inv.adjoint() * full * dec.I_inv;
}

}  // namespace symsdp
