#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "symsdp/matrix.hpp"
#include "symsdp/polynomial.hpp"

namespace symsdp {

class ExactUnsupported : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BellExpression {
  std::string name;
  Scenario scenario;
  Polynomial poly;
  std::optional<Scalar> quantum_bound;  // known optimum, when exact
};

BellExpression chsh();
BellExpression cglmp(int d);
BellExpression sliwa(int n);  // n in {3, 10, 11, 14}
// "chsh", "cglmp:d", "sliwa:n"
BellExpression builtin_expression(std::string_view name);

// Coefficient of the joint probability P(outcomes | settings).
struct ProbabilityTerm {
  std::vector<int> outcomes;
  std::vector<int> settings;
  Scalar coeff;
};
// Rewrites a functional on full probabilities in Collins-Gisin form.
Polynomial from_probability_coefficients(const Scenario& sc, const std::vector<ProbabilityTerm>& terms);
// The projector A_{a|x} of a party as a polynomial (last outcome completes to 1).
Polynomial projector(const Scenario& sc, int party, int setting, int outcome);

// Affine automorphism matrix omega of a relabelling.  The substitution is
// phi(X) = omega^{-1} X on X = (1, generators...).  Images are given per
// party and setting: party -> new party, setting -> new setting,
// outcome -> new outcome.
ExactMatrix relabeling_matrix(const Scenario& sc, const std::vector<int>& party_map,
                              const std::vector<std::vector<int>>& setting_map,
                              const std::vector<std::vector<std::vector<int>>>& outcome_map);

// omega_1 ... omega_4 generating the relabelling group of the 2-party,
// 2-setting, d-outcome scenario.
std::vector<ExactMatrix> cglmp_ambient_generators(int d);
// Generators (a, x) of the dihedral symmetry group of order 8d of cglmp(d).
std::vector<ExactMatrix> cglmp_symmetry_generators(int d);
// Product of ambient generators given as "3 1 2^-1 ..." (1-based indices).
ExactMatrix ambient_word(int d, std::string_view word);

// Tensor-product realization: one local space per party, projectors per
// generator and a (not necessarily normalized) joint state.
template <class T>
struct Realization {
  Scenario scenario;
  std::vector<int> local_dims;
  std::vector<Matrix<T>> projectors;  // indexed like scenario.generators()
  std::vector<T> state;
  T norm2;
};
using ExactRealization = Realization<Scalar>;
using NumericRealization = Realization<Complex>;

// Conjectured optimal CGLMP state and measurements.  Exact for d = 2, 3;
// throws ExactUnsupported otherwise.
ExactRealization cglmp_optimal_realization(int d);
// Same measurements, state taken as the top eigenvector of the Bell operator.
NumericRealization cglmp_numeric_realization(int d);

std::vector<Scalar> realization_moments(const ExactRealization& r, const std::vector<Polynomial>& polys);
std::vector<Complex> realization_moments(const NumericRealization& r, const std::vector<Polynomial>& polys);
NumericRealization to_numeric(const ExactRealization& r);

}  // namespace symsdp
