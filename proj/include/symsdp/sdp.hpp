#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "symsdp/matrix.hpp"

namespace symsdp {

class SdpError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Moment form:  max  b0 + sum_l b_l y_l   s.t.  Z^(i) = A0^(i) + sum_l y_l A_l^(i) >= 0
// SOS form:     min  b0 + sum_i tr(A0^(i) X^(i))  s.t.  sum_i tr(A_l^(i) X^(i)) = -b_l,  X >= 0
// A[l][i] is block i of the l-th data matrix (l = 0 is the constant term).
struct BlockSdpProblem {
  std::vector<std::size_t> block_sizes;
  std::vector<std::string> block_labels;
  std::vector<std::vector<ComplexMatrix>> A;
  std::vector<double> b;
  // Exact copy of the data, when available.
  std::optional<std::vector<std::vector<ExactMatrix>>> A_exact;
  std::optional<std::vector<Scalar>> b_exact;
  // Blocks whose X^(i) is forced to zero (their Z constraint is dropped).
  std::vector<bool> frozen;

  std::size_t num_blocks() const { return block_sizes.size(); }
  std::size_t num_vars() const { return A.empty() ? 0 : A.size() - 1; }
  bool active(std::size_t i) const { return block_sizes[i] > 0 && !frozen[i]; }
  void validate() const;
};

BlockSdpProblem make_problem(std::vector<std::vector<ExactMatrix>> A, std::vector<Scalar> b, std::vector<std::string> labels = {});
BlockSdpProblem make_problem(std::vector<std::vector<ComplexMatrix>> A, std::vector<double> b, std::vector<std::string> labels = {});

// Freezes the listed blocks (X^(i) = 0).
BlockSdpProblem restrict_blocks(const BlockSdpProblem& p, const std::set<std::size_t>& zero_blocks);

// near_optimal: stalled, but the best iterate is within near_factor * tol.
enum class SdpStatus { optimal, near_optimal, primal_infeasible, dual_infeasible, max_iterations, numerical_error };
inline bool converged(SdpStatus s) { return s == SdpStatus::optimal || s == SdpStatus::near_optimal; }
std::string to_string(SdpStatus s);

struct SdpOptions {
  double tol = 1e-9;
  int max_iterations = 200;
  double near_factor = 1000;
  bool verbose = false;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::numerical_error;
  std::string message;
  std::vector<double> y;              // y[0] = 1
  std::vector<ComplexMatrix> X, Z;    // per block (empty for size-0 blocks)
  double dual_value = 0;              // moment value d* = b0 + b^T y
  double primal_value = 0;            // SOS value p* = b0 + tr(A0 X)
  double gap = 0;
  double primal_residual = 0, dual_residual = 0;
  std::vector<std::vector<double>> x_eigenvalues, z_eigenvalues;
  int iterations = 0;
  // Direction proving infeasibility/unboundedness when status says so.
  std::vector<double> ray;
  // Exact solution from the LP path.
  bool exact = false;
  std::vector<Scalar> y_exact;
  std::vector<Scalar> x_exact;        // 1x1 blocks
  Scalar value_exact;
};

// Interior point method (HKM direction, Mehrotra predictor-corrector).
SdpSolution solve_ipm(const BlockSdpProblem& p, const SdpOptions& opt = {});
// Exact vertex enumeration; applicable when every active block is 1x1 and data is exact.
bool lp_applicable(const BlockSdpProblem& p);
std::optional<SdpSolution> solve_lp_exact(const BlockSdpProblem& p);
// LP path when applicable, IPM otherwise.
SdpSolution solve(const BlockSdpProblem& p, const SdpOptions& opt = {});

struct BlockRanks {
  int z = -1, x = -1;  // -1: block absent (m_i = 0)
};
struct RankReport {
  std::vector<BlockRanks> blocks;
  std::vector<double> residuals;        // ||X^(i) Z^(i)||_F
  std::vector<double> trace_residuals;  // |tr X^(i) Z^(i)|
  bool consistent = true;         // rank X + rank Z <= m_i everywhere
  std::string warning;
};
RankReport complementarity_ranks(const BlockSdpProblem& p, const SdpSolution& s, double tol_rank = 1e-7);

// Sparse SDPA export of the moment form as  min c^T y  s.t.  sum_l F_l y_l - F_0 >= 0
// with c_l = -b_l, F_0 = -A_0, F_l = A_l.
// Complex blocks are written realified.  Frozen blocks are omitted.
void export_sdpa(const BlockSdpProblem& p, const std::string& path);
std::string sdpa_string(const BlockSdpProblem& p);
struct SdpaData {
  std::vector<long> block_struct;
  std::vector<double> c;
  // F[l][block] dense symmetric, l = 0..m
  std::vector<std::vector<std::vector<std::vector<double>>>> F;
};
SdpaData read_sdpa(const std::string& text);

}  // namespace symsdp
