#include "symsdp/assemble.hpp"

namespace symsdp {

BlockSdpProblem moment_problem(const MomentStructure& ms) {
  std::vector<std::vector<ExactMatrix>> A;
  for (std::size_t k = 0; k < ms.m(); ++k) A.push_back({to_dense(ms.A[k], ms.n())});
  return make_problem(std::move(A), ms.b, {"full"});
}

namespace {

template <class T>
std::vector<std::string> labels(const IsotypicDecomposition<T>& dec) {
  std::vector<std::string> out;
  for (const auto& c : dec.components) out.push_back(c.label);
  return out;
}

}  // namespace

BlockSdpProblem symmetrized_problem(const SymmetrizedMoments& sm, const IsotypicDecomposition<Scalar>& dec) {
  std::vector<std::vector<ExactMatrix>> A;
  for (const auto& a : sm.Aprime) A.push_back(project_z(dec, a));
  return make_problem(std::move(A), sm.tilde_b, labels(dec));
}

BlockSdpProblem symmetrized_problem(const SymmetrizedMoments& sm, const IsotypicDecomposition<Complex>& dec) {
  std::vector<std::vector<ComplexMatrix>> A;
  for (const auto& a : sm.Aprime) A.push_back(project_z(dec, convert<Complex>(a)));
  std::vector<double> b;
  for (const auto& x : sm.tilde_b) b.push_back(x.to_double());
  return make_problem(std::move(A), std::move(b), labels(dec));
}

}  // namespace symsdp
