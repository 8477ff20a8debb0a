#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "symsdp/matrix.hpp"
#include "symsdp/polynomial.hpp"

namespace symsdp {

class SymmetryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Ring automorphism sending X = (1, generators) to omega^{-1} X, extended
// multiplicatively.  apply(w1 w2, p) = apply(w1, apply(w2, p)).
class AffineAutomorphism {
 public:
  AffineAutomorphism(Scenario sc, ExactMatrix omega);

  const Scenario& scenario() const { return sc_; }
  const ExactMatrix& omega() const { return omega_; }
  const ExactMatrix& omega_inverse() const { return inv_; }
  // Image of the i-th generator (0-based, excluding the unit).
  const Polynomial& image(std::size_t i) const { return images_[i]; }

  Polynomial apply(const Polynomial& p) const;
  Polynomial apply(const Monomial& w) const;

 private:
  Scenario sc_;
  ExactMatrix omega_, inv_;
  std::vector<Polynomial> images_;
};

// Finite matrix group enumerated by closure.  Every element except the
// identity is recorded as parent * generator, so homomorphisms can be
// extended along this tree.
class FiniteGroup {
 public:
  FiniteGroup() = default;
  static FiniteGroup closure(const std::vector<ExactMatrix>& generators, std::size_t max_order = 100000);

  std::size_t order() const { return elements_.size(); }
  const std::vector<ExactMatrix>& generators() const { return gens_; }
  const std::vector<ExactMatrix>& elements() const { return elements_; }
  const ExactMatrix& element(std::size_t k) const { return elements_[k]; }
  std::size_t identity() const { return 0; }
  std::size_t parent(std::size_t k) const { return parent_[k]; }
  std::size_t parent_generator(std::size_t k) const { return via_[k]; }
  std::size_t inverse(std::size_t k) const { return inverse_[k]; }
  std::size_t generator_index(std::size_t g) const { return gen_index_[g]; }
  // Index of the product elements[i] * elements[j].
  std::size_t multiply(std::size_t i, std::size_t j) const;
  std::size_t index_of(const ExactMatrix& m) const;  // throws when absent

 private:
  std::vector<ExactMatrix> gens_, elements_;
  std::vector<std::size_t> parent_, via_, inverse_, gen_index_;
  std::unordered_map<std::string, std::size_t> index_;
};

std::string matrix_key(const ExactMatrix& m);

// Images of every group element under a homomorphism.
template <class T>
struct Representation {
  std::vector<Matrix<T>> images;
  std::size_t dim() const { return images.empty() ? 0 : images[0].rows(); }
  const Matrix<T>& operator()(std::size_t k) const { return images[k]; }
};

class HomomorphismError : public SymmetryError {
 public:
  using SymmetryError::SymmetryError;
};

// Extends generator images along the closure tree and checks
// rho(g) rho(s) = rho(g s) for every element g and generator s.
template <class T>
Representation<T> extend_representation(const FiniteGroup& g, const std::vector<Matrix<T>>& gen_images, double tol = 1e-9) {
  if (gen_images.size() != g.generators().size()) throw SymmetryError("wrong number of generator images");
  std::size_t n = gen_images.at(0).rows();
  Representation<T> r;
  r.images.resize(g.order());
  r.images[0] = Matrix<T>::identity(n);
  for (std::size_t k = 1; k < g.order(); ++k) r.images[k] = r.images[g.parent(k)] * gen_images[g.parent_generator(k)];
  for (std::size_t k = 0; k < g.order(); ++k)
    for (std::size_t s = 0; s < gen_images.size(); ++s) {
      const auto& lhs = r.images[k] * gen_images[s];
      const auto& rhs = r.images[g.multiply(k, g.generator_index(s))];
      bool ok = FieldTraits<T>::exact ? lhs == rhs : (lhs - rhs).max_abs() <= tol * std::max(1.0, lhs.max_abs());
      if (!ok) throw HomomorphismError("generator images do not define a homomorphism");
    }
  return r;
}

// True iff every generator maps p to itself.
bool check_invariance(const Polynomial& p, const Scenario& sc, const std::vector<ExactMatrix>& generators);
bool check_invariance(const Polynomial& p, const Scenario& sc, const FiniteGroup& g);

// rho on the span of a generating sequence: g(Q) = rho_g^{-1} Q.
Representation<Scalar> representation_on(const std::vector<Polynomial>& seq, const Scenario& sc, const FiniteGroup& g);

}  // namespace symsdp
