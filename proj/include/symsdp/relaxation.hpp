#pragma once

#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "symsdp/automorphism.hpp"
#include "symsdp/matrix.hpp"
#include "symsdp/polynomial.hpp"

namespace symsdp {

class RelaxationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GeneratingSequence {
  std::vector<Polynomial> entries;  // entries[0] == 1
  std::string tag;                  // "1", "2", "1+AB", "1+AB+ABC", "custom"
  std::size_t size() const { return entries.size(); }
};

// All normal words of length <= level.
GeneratingSequence level_sequence(const Scenario& sc, int level);
// 1, single generators, and products of two generators of distinct parties.
GeneratingSequence one_plus_ab_sequence(const Scenario& sc);
// 1+AB plus products of three generators of distinct parties.
GeneratingSequence one_plus_ab_abc_sequence(const Scenario& sc);
// Checks independence; throws RelaxationError naming the dependent entry.
GeneratingSequence custom_sequence(const Scenario& sc, std::vector<Polynomial> entries);
// "1", "2", ..., "1+AB" or "1+AB+ABC".
GeneratingSequence generating_sequence(const Scenario& sc, std::string_view level);

struct SparseEntry {
  std::size_t i, j;
  Scalar v;
};
using SparseMatrixEntries = std::vector<SparseEntry>;
ExactMatrix to_dense(const SparseMatrixEntries& e, std::size_t n);

// Xi = sum_k A_k M_k, E = sum_k b_k M_k (b[0] is the constant b_0).
struct MomentStructure {
  Scenario scenario;
  GeneratingSequence sequence;
  std::vector<std::vector<Polynomial>> xi;
  std::vector<Polynomial> basis;  // basis[0] == 1, all self-adjoint
  std::vector<SparseMatrixEntries> A;
  std::vector<Scalar> b;
  std::size_t n() const { return sequence.size(); }
  std::size_t m() const { return basis.size(); }  // counts M_0
};

MomentStructure build_moment_structure(const Scenario& sc, const Polynomial& objective, const GeneratingSequence& q);

// Z(y) = sum_k y_k A_k with y_0 = 1.
template <class T>
Matrix<T> moment_matrix(const MomentStructure& ms, const std::vector<T>& y) {
  Matrix<T> z(ms.n(), ms.n());
  for (std::size_t k = 0; k < ms.m(); ++k)
    for (const auto& e : ms.A[k]) z(e.i, e.j) += FieldTraits<T>::from_scalar(e.v) * y[k];
  return z;
}

// (M̄_k) = w + W (M̃_l) with M̄_k the group average of M_k.
struct SymmetrizedMoments {
  std::vector<Polynomial> tilde_basis;  // tilde_basis[0] == 1
  std::vector<Scalar> w;                // indexed by k (w[0] == 1)
  std::vector<std::vector<Scalar>> W;   // W[k][l], l >= 1 (column 0 unused, zero)
  std::vector<ExactMatrix> Aprime;      // invariant matrices A'_l
  std::vector<Scalar> tilde_b;          // tilde_b[0] == b̃_0
  std::size_t size() const { return tilde_basis.size(); }
};

SymmetrizedMoments symmetrize_moments(const MomentStructure& ms, const FiniteGroup& g);

// Group average of a polynomial.
Polynomial group_average(const Polynomial& p, const Scenario& sc, const FiniteGroup& g);

struct ConjugationReduction {
  MomentStructure reduced;
  std::vector<int> F;              // diagonal of F (+1 / -1) when applicable
  std::vector<std::size_t> kept;   // indices of the original moments kept
  bool applied = false;
  std::string reason;              // why it was not applied
};

// Complex-conjugation symmetry: drops moments with A_k^* = -A_k when
// A_0 is real, every A_k is real or imaginary and b^T F = b^T.
ConjugationReduction conjugation_reduction(const MomentStructure& ms);

}  // namespace symsdp
