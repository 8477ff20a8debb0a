#pragma once

#include <string>
#include <vector>

#include "symsdp/relaxation.hpp"
#include "symsdp/reptheory.hpp"
#include "symsdp/sdp.hpp"

namespace symsdp {

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotPsdError : public CertificateError {
 public:
  NotPsdError(const std::string& msg, std::size_t minor) : CertificateError(msg), minor_(minor) {}
  // Size of the (pivot-ordered) leading minor where positivity failed.
  std::size_t minor() const { return minor_; }

 private:
  std::size_t minor_;
};

enum class LdlPivoting { none, largest_diagonal };

// M = L diag(D) L^dagger with L n x r; column k has a 1 in row order[k] and zeros
// in rows order[0..k-1].  Zero pivots are dropped, so r = rank(M).
struct LdlResult {
  ExactMatrix L;
  std::vector<Scalar> D;
  std::vector<std::size_t> order;  // pivot rows, one per column of L
  std::size_t rank() const { return D.size(); }
};

LdlResult ldl(const ExactMatrix& m, LdlPivoting pivoting = LdlPivoting::none);
// Every principal minor (all index subsets) is >= 0.
bool psd_check_minors(const ExactMatrix& m);
bool is_psd(const ExactMatrix& m);

struct ExactBlockSolution {
  std::vector<ExactMatrix> X;  // per block; empty for absent or frozen blocks
  Scalar mu;                   // b0 + sum_i tr(A0^(i) X^(i))
};

// Checks X^(i) Hermitian PSD and tr(A_l X) = -b_l exactly; returns mu.
Scalar check_block_solution(const BlockSdpProblem& p, const ExactBlockSolution& s);

// Entrywise recognition of a numeric solution in the given tower.
struct RoundingOptions {
  long denom_bound = 16;
  double tolerance = 1e-6;
  long height = 16;
};
ExactBlockSolution round_to_exact(const BlockSdpProblem& p, const SdpSolution& s, const FieldTower& tower,
                                  const RoundingOptions& opts = {});

// Uses complementarity with exact moments y (y[0] = 1): X^(i) = K_i S_i K_i^dagger with
// K_i spanning ker Z^(i)(y), then solves the equality constraints exactly.  Remaining free
// parameters are taken from the numeric solution, rounded to denominators <= denom_bound.
ExactBlockSolution complementary_solution(const BlockSdpProblem& p, const std::vector<Scalar>& y, const SdpSolution* numeric,
                                          long denom_bound = 64);

// mu - E = sum_l weight_l poly_l^dagger poly_l
struct SosTerm {
  Scalar weight;
  Polynomial poly;
};
struct SosDecomposition {
  Scalar mu;
  std::vector<SosTerm> terms;
  Polynomial expand() const;
};

// From a full (unsymmetrized) X with tr(Xi X) = mu - E.
SosDecomposition extract_sos(const ExactMatrix& x, const Scalar& mu, const GeneratingSequence& q);
// From X~ blocks: X = I^{-dagger} [sum (1/d_i) X~^(i) (x) C_i] I^{-1}.
SosDecomposition extract_sos(const ExactBlockSolution& sol, const IsotypicDecomposition<Scalar>& dec, const GeneratingSequence& q);

struct SosCheck {
  bool valid = false;
  std::string difference;  // first differing monomial with both coefficients
};
SosCheck verify_sos(const SosDecomposition& c, const Polynomial& objective);

// Text format:
//   # comment
//   certificate <name>
//   scenario <outcomes per setting, parties separated by ';'>   e.g. 2,2;2,2
//   objective <polynomial>
//   bound <scalar>
//   sequence <polynomial>          (any number, informational)
//   term <weight> : <polynomial>   (any number)
struct Certificate {
  std::string name;
  Scenario scenario;
  Polynomial objective;
  std::vector<Polynomial> sequence;
  SosDecomposition sos;
};
class CertificateParseError : public CertificateError {
 public:
  CertificateParseError(const std::string& msg, std::size_t line)
      : CertificateError("line " + std::to_string(line) + ": " + msg), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};
Certificate parse_certificate(const std::string& text);
Certificate read_certificate(const std::string& path);
std::string write_certificate(const Certificate& c);

}  // namespace symsdp
