#include "symsdp/automorphism.hpp"

#include <algorithm>

#include "symsdp/linear.hpp"

namespace symsdp {

AffineAutomorphism::AffineAutomorphism(Scenario sc, ExactMatrix omega) : sc_(std::move(sc)), omega_(std::move(omega)) {
  std::size_t n = sc_.num_generators() + 1;
  if (omega_.rows() != n || omega_.cols() != n)
    throw SymmetryError("automorphism matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  try {
    inv_ = inverse(omega_);
  } catch (const SingularMatrix&) {
    throw SymmetryError("automorphism matrix is singular");
  }
  for (std::size_t j = 0; j < n; ++j) {
    Scalar want = j == 0 ? Scalar(1) : Scalar();
    if (omega_(0, j) != want || inv_(0, j) != want) throw SymmetryError("first row of an affine automorphism must be (1, 0, ..., 0)");
  }
  const auto& gens = sc_.generators();
  for (std::size_t i = 1; i < n; ++i) {
    Polynomial img(inv_(i, 0));
    for (std::size_t j = 1; j < n; ++j)
      if (!inv_(i, j).is_zero()) img.add_normal({gens[j - 1]}, inv_(i, j));
    images_.push_back(std::move(img));
  }
}

Polynomial AffineAutomorphism::apply(const Monomial& w) const {
  Polynomial r(1);
  for (Letter l : w) {
    int idx = sc_.index_of(l);
    if (idx < 0) throw SymmetryError("letter " + letter_str(l) + " is outside the automorphism's scenario");
    r = r * images_[idx];
    if (r.is_zero()) break;
  }
  return r;
}

Polynomial AffineAutomorphism::apply(const Polynomial& p) const {
  Polynomial r;
  for (const auto& [w, c] : p.terms()) r += apply(w) * c;
  return r;
}

// ---------------------------------------------------------------------------

std::string matrix_key(const ExactMatrix& m) {
  std::string s;
  for (const auto& x : m.data()) {
    s += x.str();
    s += ';';
  }
  return s;
}

FiniteGroup FiniteGroup::closure(const std::vector<ExactMatrix>& generators, std::size_t max_order) {
  if (generators.empty()) throw SymmetryError("closure needs at least one generator");
  FiniteGroup g;
  g.gens_ = generators;
  std::size_t n = generators[0].rows();
  for (const auto& m : generators)
    if (m.rows() != n || m.cols() != n) throw SymmetryError("generators have different sizes");
  auto add = [&](ExactMatrix m, std::size_t parent, std::size_t via) {
    auto key = matrix_key(m);
    auto [it, inserted] = g.index_.emplace(key, g.elements_.size());
    if (!inserted) return it->second;
    if (g.elements_.size() >= max_order)
      throw SymmetryError("group order exceeds the bound " + std::to_string(max_order));
    g.elements_.push_back(std::move(m));
    g.parent_.push_back(parent);
    g.via_.push_back(via);
    return it->second;
  };
  add(ExactMatrix::identity(n), 0, 0);
  // Breadth first, so parent chains are short.
  for (std::size_t k = 0; k < g.elements_.size(); ++k)
    for (std::size_t s = 0; s < generators.size(); ++s) add(g.elements_[k] * generators[s], k, s);
  for (const auto& m : generators) g.gen_index_.push_back(g.index_of(m));
  g.inverse_.resize(g.order());
  for (std::size_t k = 0; k < g.order(); ++k) g.inverse_[k] = g.index_of(symsdp::inverse(g.elements_[k]));
  return g;
}

std::size_t FiniteGroup::index_of(const ExactMatrix& m) const {
  auto it = index_.find(matrix_key(m));
  if (it == index_.end()) throw SymmetryError("matrix is not a group element");
  return it->second;
}

std::size_t FiniteGroup::multiply(std::size_t i, std::size_t j) const { return index_of(elements_[i] * elements_[j]); }

// ---------------------------------------------------------------------------

bool check_invariance(const Polynomial& p, const Scenario& sc, const std::vector<ExactMatrix>& generators) {
  for (const auto& m : generators)
    if (AffineAutomorphism(sc, m).apply(p) != p) return false;
  return true;
}

bool check_invariance(const Polynomial& p, const Scenario& sc, const FiniteGroup& g) {
  return check_invariance(p, sc, g.generators());
}

Representation<Scalar> representation_on(const std::vector<Polynomial>& seq, const Scenario& sc, const FiniteGroup& g) {
  std::unordered_map<Monomial, std::size_t, MonomialHash> ids;
  auto coords = [&](const Polynomial& p) {
    SparseVec v;
    for (const auto& [w, c] : p.terms()) v[ids.emplace(w, ids.size()).first->second] = c;
    return v;
  };
  SparseEchelon ech;
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (!ech.insert(coords(seq[i]), i)) throw SymmetryError("generating sequence is linearly dependent at entry " + std::to_string(i));
  std::size_t n = seq.size();
  std::vector<ExactMatrix> gens;
  for (const auto& om : g.generators()) {
    AffineAutomorphism phi(sc, om);
    // rows: g(Q_i) = sum_j R_ij Q_j with R = rho_g^{-1}
    ExactMatrix r(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      Polynomial img = phi.apply(seq[i]);
      auto c = ech.express(coords(img));
      if (!c) throw SymmetryError("span of the generating sequence is not closed: image " + img.str() + " of " + seq[i].str());
      for (const auto& [j, x] : *c) r(i, j) = x;
    }
    gens.push_back(inverse(r));
  }
  try {
    return extend_representation(g, gens);
  } catch (const HomomorphismError&) {
    throw SymmetryError("action on the generating sequence is not a homomorphism");
  }
}

}  // namespace symsdp
