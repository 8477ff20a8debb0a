#include "symsdp/sdp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>
#include <numeric>

namespace symsdp {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void BlockSdpProblem::validate() const {
  std::size_t nb = block_sizes.size();
  if (A.empty()) throw SdpError("problem has no constant term");
  if (b.size() != A.size()) throw SdpError("objective length does not match the number of data matrices");
  if (frozen.size() != nb) throw SdpError("frozen mask has the wrong length");
  for (const auto& al : A) {
    if (al.size() != nb) throw SdpError("data matrix has the wrong number of blocks");
    for (std::size_t i = 0; i < nb; ++i) {
      if (al[i].rows() != block_sizes[i] || al[i].cols() != block_sizes[i]) throw SdpError("block " + std::to_string(i) + " has the wrong size");
      if (!al[i].is_hermitian(1e-12 * std::max(1.0, al[i].max_abs()))) throw SdpError("block " + std::to_string(i) + " is not Hermitian");
      for (const auto& x : al[i].data())
        if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) throw SdpError("non-finite data");
    }
  }
}

BlockSdpProblem make_problem(std::vector<std::vector<ComplexMatrix>> A, std::vector<double> b, std::vector<std::string> labels) {
  BlockSdpProblem p;
  if (A.empty()) throw SdpError("problem has no constant term");
  for (const auto& m : A[0]) p.block_sizes.push_back(m.rows());
  p.A = std::move(A);
  p.b = std::move(b);
  p.frozen.assign(p.block_sizes.size(), false);
  if (labels.empty())
    for (std::size_t i = 0; i < p.block_sizes.size(); ++i) labels.push_back(std::to_string(i + 1));
  p.block_labels = std::move(labels);
  p.validate();
  return p;
}

BlockSdpProblem make_problem(std::vector<std::vector<ExactMatrix>> A, std::vector<Scalar> b, std::vector<std::string> labels) {
  std::vector<std::vector<ComplexMatrix>> an;
  for (const auto& al : A) {
    std::vector<ComplexMatrix> blocks;
    for (const auto& m : al) blocks.push_back(convert<Complex>(m));
    an.push_back(std::move(blocks));
  }
  std::vector<double> bn;
  for (const auto& x : b) bn.push_back(x.to_double());
  BlockSdpProblem p = make_problem(std::move(an), std::move(bn), std::move(labels));
  p.A_exact = std::move(A);
  p.b_exact = std::move(b);
  return p;
}

BlockSdpProblem restrict_blocks(const BlockSdpProblem& p, const std::set<std::size_t>& zero_blocks) {
  BlockSdpProblem r = p;
  for (auto i : zero_blocks) {
    if (i >= p.num_blocks()) throw SdpError("block index " + std::to_string(i) + " out of range");
    r.frozen[i] = true;
  }
  return r;
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::primal_infeasible: return "sos infeasible (moment unbounded)";
    case SdpStatus::dual_infeasible: return "moment infeasible";
    case SdpStatus::near_optimal: return "near optimal";
    case SdpStatus::max_iterations: return "iteration limit";
    case SdpStatus::numerical_error: return "numerical error";
  }
  return "?";
}

namespace {

MatrixXcd to_eigen(const ComplexMatrix& m) {
  MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

ComplexMatrix from_eigen(const MatrixXcd& e) {
  ComplexMatrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

// [[Re, -Im], [Im, Re]] for complex blocks, Re otherwise.
MatrixXd realify(const MatrixXcd& h, bool cplx) {
  if (!cplx) return h.real();
  Eigen::Index m = h.rows();
  MatrixXd r(2 * m, 2 * m);
  r << h.real(), -h.imag(), h.imag(), h.real();
  return r;
}

// Inverse of realify for X: tr(H Xc) = tr(realify(H) Xr).
MatrixXcd complexify_x(const MatrixXd& x, bool cplx) {
  if (!cplx) return x.cast<Complex>();
  Eigen::Index m = x.rows() / 2;
  MatrixXd p = x.topLeftCorner(m, m), t = x.bottomRightCorner(m, m), q = x.topRightCorner(m, m);
  MatrixXcd c(m, m);
  c.real() = p + t;
  c.imag() = q.transpose() - q;
  return c;
}

struct Sparse {
  std::vector<Eigen::Index> r, c;
  std::vector<double> v;
};

Sparse sparsify(const MatrixXd& m) {
  Sparse s;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) {
        s.r.push_back(i);
        s.c.push_back(j);
        s.v.push_back(m(i, j));
      }
  return s;
}

double dot(const Sparse& f, const MatrixXd& g) {
  double s = 0;
  for (std::size_t k = 0; k < f.v.size(); ++k) s += f.v[k] * g(f.r[k], f.c[k]);
  return s;
}

double dot(const MatrixXd& a, const MatrixXd& b) { return (a.array() * b.array()).sum(); }

// Real standard form: min <C,X> s.t. <F_k,X> = c_k;  max c^T y s.t. S = C - sum y_k F_k >= 0.
struct RealForm {
  std::vector<std::size_t> block_of;  // original block index
  std::vector<bool> cplx;
  std::vector<MatrixXd> C;
  std::vector<std::vector<MatrixXd>> F;  // F[k][blk]
  std::vector<std::vector<Sparse>> Fs;
  VectorXd c;
  std::vector<std::size_t> var_of;  // original variable l (1-based)
  std::size_t dim = 0;
};

struct Reduction {
  RealForm form;
  bool unbounded = false;  // moment objective unbounded along a direction in the null space
  std::vector<double> ray;
};

Reduction reduce(const BlockSdpProblem& p) {
  Reduction red;
  RealForm& f = red.form;
  std::size_t nv = p.num_vars();
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    if (!p.active(i)) continue;
    bool cplx = false;
    for (const auto& al : p.A)
      for (const auto& x : al[i].data())
        if (std::abs(x.imag()) > 0) cplx = true;
    f.block_of.push_back(i);
    f.cplx.push_back(cplx);
    f.C.push_back(realify(to_eigen(p.A[0][i]), cplx));
    f.dim += f.C.back().rows();
  }
  // Greedy independence of the constraint matrices, in variable order.
  std::vector<VectorXd> basis;     // orthonormalized
  std::vector<VectorXd> raw;       // kept vec(F)
  for (std::size_t l = 1; l <= nv; ++l) {
    VectorXd v(0);
    std::vector<MatrixXd> blocks;
    for (std::size_t k = 0; k < f.block_of.size(); ++k) {
      MatrixXd m = -realify(to_eigen(p.A[l][f.block_of[k]]), f.cplx[k]);
      VectorXd w = Eigen::Map<VectorXd>(m.data(), m.size());
      VectorXd nvv(v.size() + w.size());
      nvv << v, w;
      v = nvv;
      blocks.push_back(std::move(m));
    }
    double norm = v.norm();
    VectorXd r = v;
    for (const auto& q : basis) r -= q.dot(r) * q;
    if (norm > 0 && r.norm() > 1e-10 * norm) {
      basis.push_back(r / r.norm());
      raw.push_back(v);
      f.var_of.push_back(l);
      f.F.push_back(std::move(blocks));
      continue;
    }
    // Dependent: the objective must be constant along the null direction.
    double bl = p.b[l];
    double proj = 0;
    VectorXd coef;
    if (!raw.empty()) {
      MatrixXd R(v.size(), raw.size());
      for (std::size_t j = 0; j < raw.size(); ++j) R.col(j) = raw[j];
      coef = R.colPivHouseholderQr().solve(v);
      for (std::size_t j = 0; j < raw.size(); ++j) proj += coef[j] * p.b[f.var_of[j]];
    }
    if (std::abs(bl - proj) > 1e-9 * (1 + std::abs(bl))) {
      red.unbounded = true;
      red.ray.assign(nv + 1, 0.0);
      double s = bl - proj > 0 ? 1 : -1;
      red.ray[l] = s;
      for (std::size_t j = 0; j < raw.size(); ++j) red.ray[f.var_of[j]] = -s * coef[j];
    }
  }
  f.c.resize(f.var_of.size());
  for (std::size_t k = 0; k < f.var_of.size(); ++k) f.c[k] = p.b[f.var_of[k]];
  f.Fs.resize(f.F.size());
  for (std::size_t k = 0; k < f.F.size(); ++k)
    for (const auto& m : f.F[k]) f.Fs[k].push_back(sparsify(m));
  return red;
}

// Largest a with X + a dX positive semidefinite (infinity when unbounded).
double max_step(const std::vector<MatrixXd>& x, const std::vector<MatrixXd>& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < x.size(); ++k) {
    Eigen::LLT<MatrixXd> llt(x[k]);
    MatrixXd l = llt.matrixL();
    MatrixXd li = l.triangularView<Eigen::Lower>().solve(MatrixXd::Identity(l.rows(), l.cols()));
    MatrixXd m = li * dx[k] * li.transpose();
    double lmin = Eigen::SelfAdjointEigenSolver<MatrixXd>(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (lmin < 0) a = std::min(a, -1.0 / lmin);
  }
  return a;
}

}  // namespace

SdpSolution solve_ipm(const BlockSdpProblem& p, const SdpOptions& opt) {
  p.validate();
  SdpSolution sol;
  std::size_t nv = p.num_vars();
  Reduction red = reduce(p);
  if (red.unbounded) {
    sol.status = SdpStatus::primal_infeasible;
    sol.message = "moment objective unbounded along a direction that leaves every block unchanged";
    sol.ray = red.ray;
    return sol;
  }
  const RealForm& f = red.form;
  std::size_t nb = f.C.size(), m = f.c.size();
  double n = std::max<double>(1.0, static_cast<double>(f.dim));

  // Initial point
  double normC = 0, maxF = 0, maxRatio = 0;
  for (const auto& c : f.C) normC = std::max(normC, c.norm());
  for (std::size_t k = 0; k < m; ++k) {
    double nf = 0;
    for (const auto& b : f.F[k]) nf += b.squaredNorm();
    nf = std::sqrt(nf);
    maxF = std::max(maxF, nf);
    maxRatio = std::max(maxRatio, (1 + std::abs(f.c[k])) / (1 + nf));
  }
  double xi = std::max({10.0, std::sqrt(n), n * maxRatio});
  double eta = std::max({10.0, std::sqrt(n), normC, maxF});
  std::vector<MatrixXd> X(nb), S(nb);
  for (std::size_t k = 0; k < nb; ++k) {
    X[k] = xi * MatrixXd::Identity(f.C[k].rows(), f.C[k].cols());
    S[k] = eta * MatrixXd::Identity(f.C[k].rows(), f.C[k].cols());
  }
  VectorXd y = VectorXd::Zero(m);
  double normb = f.c.norm();

  auto residuals = [&](VectorXd& rp, std::vector<MatrixXd>& rd) {
    rp = f.c;
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < nb; ++j) rp[k] -= dot(f.Fs[k][j], X[j]);
    rd.resize(nb);
    for (std::size_t j = 0; j < nb; ++j) {
      rd[j] = f.C[j] - S[j];
      for (std::size_t k = 0; k < m; ++k) rd[j] -= y[k] * f.F[k][j];
    }
  };

  int it = 0;
  sol.status = SdpStatus::max_iterations;
  double pobj = 0, dobj = 0, pinf = 0, dinf = 0, relgap = 0;
  // Best iterate so far, kept for the non-converged exits.
  double best = std::numeric_limits<double>::infinity();
  int best_it = 0;
  std::vector<MatrixXd> bestX, bestS;
  VectorXd besty;
  for (; it < opt.max_iterations; ++it) {
    VectorXd rp;
    std::vector<MatrixXd> rd;
    residuals(rp, rd);
    pobj = 0;
    double mu = 0, rdn = 0;
    for (std::size_t j = 0; j < nb; ++j) {
      pobj += dot(f.C[j], X[j]);
      mu += dot(X[j], S[j]);
      rdn += rd[j].squaredNorm();
    }
    mu /= n;
    dobj = f.c.dot(y);
    pinf = rp.norm() / (1 + normb);
    dinf = std::sqrt(rdn) / (1 + normC);
    relgap = std::abs(pobj - dobj) / (1 + std::abs(pobj) + std::abs(dobj));
    if (opt.verbose)
      std::cerr << "it " << it << " p " << pobj << " d " << dobj << " gap " << relgap << " pinf " << pinf << " dinf " << dinf << "\n";
    if (relgap < opt.tol && pinf < opt.tol && dinf < opt.tol) {
      sol.status = SdpStatus::optimal;
      break;
    }
    double measure = std::max({relgap, pinf, dinf});
    if (measure < best) {
      best = measure;
      best_it = it;
      bestX = X;
      bestS = S;
      besty = y;
    } else if (it - best_it >= 20) {
      sol.message = "stalled";
      break;
    }
    double xnorm = 0;
    for (const auto& x : X) xnorm = std::max(xnorm, x.norm());
    if (y.size() && y.norm() > 1e9 * (1 + xi) && dinf < 1e-6) {
      sol.status = SdpStatus::primal_infeasible;
      sol.message = "moment iterates diverge with bounded residual";
      sol.ray.assign(nv + 1, 0.0);
      VectorXd d = y / y.norm();
      for (std::size_t k = 0; k < m; ++k) sol.ray[f.var_of[k]] = d[k];
      break;
    }
    if (xnorm > 1e9 * (1 + xi) && pinf < 1e-6) {
      sol.status = SdpStatus::dual_infeasible;
      sol.message = "SOS iterates diverge with bounded residual";
      break;
    }

    std::vector<MatrixXd> Sinv(nb);
    bool ok = true;
    for (std::size_t j = 0; j < nb; ++j) {
      Eigen::LLT<MatrixXd> llt(S[j]);
      if (llt.info() != Eigen::Success) ok = false;
      Sinv[j] = llt.solve(MatrixXd::Identity(S[j].rows(), S[j].cols()));
      Sinv[j] = 0.5 * (Sinv[j] + Sinv[j].transpose());
    }
    if (!ok) {
      sol.status = SdpStatus::numerical_error;
      sol.message = "slack lost definiteness";
      break;
    }
    // Schur complement M_kl = sum_j tr(F_k X F_l S^-1)
    MatrixXd M = MatrixXd::Zero(m, m);
    for (std::size_t l = 0; l < m; ++l)
      for (std::size_t j = 0; j < nb; ++j) {
        if (f.Fs[l][j].v.empty()) continue;
        MatrixXd g = X[j] * f.F[l][j] * Sinv[j];
        for (std::size_t k = l; k < m; ++k) M(k, l) += dot(f.Fs[k][j], g);
      }
    M = M.selfadjointView<Eigen::Lower>();
    Eigen::LLT<MatrixXd> schur(M);
    Eigen::LDLT<MatrixXd> schur_ldlt;
    bool use_ldlt = schur.info() != Eigen::Success;
    if (use_ldlt) schur_ldlt.compute(M);
    auto schur_solve = [&](const VectorXd& r) -> VectorXd {
      auto once = [&](const VectorXd& v) { return use_ldlt ? VectorXd(schur_ldlt.solve(v)) : VectorXd(schur.solve(v)); };
      VectorXd x = once(r);
      for (int k = 0; k < 3; ++k) x += once(VectorXd(r - M * x));
      return x;
    };

    // G = X Rd S^-1 is shared by both steps.
    std::vector<MatrixXd> XRdSi(nb);
    for (std::size_t j = 0; j < nb; ++j) XRdSi[j] = X[j] * rd[j] * Sinv[j];

    auto direction = [&](double sigma_mu, const std::vector<MatrixXd>* dxp, const std::vector<MatrixXd>* dsp, VectorXd& dy,
                         std::vector<MatrixXd>& dX, std::vector<MatrixXd>& dS) {
      std::vector<MatrixXd> T(nb);
      for (std::size_t j = 0; j < nb; ++j) {
        T[j] = sigma_mu * Sinv[j] - X[j] - XRdSi[j];
        if (dxp) T[j] -= (*dxp)[j] * (*dsp)[j] * Sinv[j];
      }
      VectorXd r = rp;
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t j = 0; j < nb; ++j) r[k] -= dot(f.Fs[k][j], T[j]);
      dy = m ? schur_solve(r) : VectorXd();
      dS.resize(nb);
      dX.resize(nb);
      for (std::size_t j = 0; j < nb; ++j) {
        dS[j] = rd[j];
        for (std::size_t k = 0; k < m; ++k)
          if (!f.Fs[k][j].v.empty()) dS[j] -= dy[k] * f.F[k][j];
        // sigma_mu S^-1 - X - X dS S^-1 (- dXp dSp S^-1)
        MatrixXd d = sigma_mu * Sinv[j] - X[j] - X[j] * dS[j] * Sinv[j];
        if (dxp) d -= (*dxp)[j] * (*dsp)[j] * Sinv[j];
        dX[j] = 0.5 * (d + d.transpose());
      }
    };

    VectorXd dy;
    std::vector<MatrixXd> dX, dS;
    direction(0.0, nullptr, nullptr, dy, dX, dS);
    double ap = std::min(1.0, max_step(X, dX)), ad = std::min(1.0, max_step(S, dS));
    double mu_aff = 0;
    for (std::size_t j = 0; j < nb; ++j) mu_aff += dot(MatrixXd(X[j] + ap * dX[j]), MatrixXd(S[j] + ad * dS[j]));
    mu_aff /= n;
    double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);
    VectorXd dy2;
    std::vector<MatrixXd> dX2, dS2;
    direction(sigma * mu, &dX, &dS, dy2, dX2, dS2);
    const double gamma = 0.9;
    ap = std::min(1.0, gamma * max_step(X, dX2));
    ad = std::min(1.0, gamma * max_step(S, dS2));
    // Rounding can leave the eigenvalue test optimistic; back off until
    // the new iterates factor.
    auto advance = [&](std::vector<MatrixXd>& v, const std::vector<MatrixXd>& dv, double a) {
      for (int tries = 0; tries < 30; ++tries, a *= 0.8) {
        std::vector<MatrixXd> w(nb);
        bool ok = true;
        for (std::size_t j = 0; j < nb && ok; ++j) {
          w[j] = v[j] + a * dv[j];
          w[j] = 0.5 * (w[j] + w[j].transpose());
          ok = Eigen::LLT<MatrixXd>(w[j]).info() == Eigen::Success;
        }
        if (ok) {
          v = std::move(w);
          return a;
        }
      }
      return 0.0;
    };
    ap = advance(X, dX2, ap);
    ad = advance(S, dS2, ad);
    if (m) y += ad * dy2;
    if (!std::isfinite(y.sum()) || !std::isfinite(pobj)) {
      sol.status = SdpStatus::numerical_error;
      sol.message = "non-finite iterate";
      break;
    }
  }
  sol.iterations = it;
  if (sol.status == SdpStatus::max_iterations) {
    if (!bestX.empty()) {
      X = bestX;
      S = bestS;
      y = besty;
    }
    std::ostringstream os;
    os << (sol.message.empty() ? "no convergence within " + std::to_string(opt.max_iterations) + " iterations" : sol.message)
       << "; best accuracy " << best << " at iteration " << best_it;
    sol.message = os.str();
    if (best <= opt.near_factor * opt.tol) sol.status = SdpStatus::near_optimal;
  }

  // Back to the original (complex, block) variables.
  sol.y.assign(nv + 1, 0.0);
  sol.y[0] = 1;
  for (std::size_t k = 0; k < m; ++k) sol.y[f.var_of[k]] = y[k];
  sol.X.assign(p.num_blocks(), ComplexMatrix());
  sol.Z.assign(p.num_blocks(), ComplexMatrix());
  sol.x_eigenvalues.assign(p.num_blocks(), {});
  sol.z_eigenvalues.assign(p.num_blocks(), {});
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    std::size_t s = p.block_sizes[i];
    if (s == 0) continue;
    sol.X[i] = ComplexMatrix(s, s);
    ComplexMatrix z = p.A[0][i];
    for (std::size_t l = 1; l <= nv; ++l)
      if (sol.y[l] != 0) z += p.A[l][i] * Complex(sol.y[l], 0);
    sol.Z[i] = z;
  }
  for (std::size_t k = 0; k < nb; ++k) sol.X[f.block_of[k]] = from_eigen(complexify_x(X[k], f.cplx[k]));
  sol.dual_value = p.b[0];
  for (std::size_t l = 1; l <= nv; ++l) sol.dual_value += p.b[l] * sol.y[l];
  sol.primal_value = p.b[0];
  for (std::size_t i = 0; i < p.num_blocks(); ++i)
    if (p.block_sizes[i]) sol.primal_value += trace(ComplexMatrix(p.A[0][i] * sol.X[i])).real();
  sol.gap = std::abs(sol.primal_value - sol.dual_value);
  sol.primal_residual = 0;
  for (std::size_t l = 1; l <= nv; ++l) {
    double r = p.b[l];
    for (std::size_t i = 0; i < p.num_blocks(); ++i)
      if (p.block_sizes[i]) r += trace(ComplexMatrix(p.A[l][i] * sol.X[i])).real();
    sol.primal_residual = std::max(sol.primal_residual, std::abs(r));
  }
  sol.dual_residual = 0;
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    if (!p.block_sizes[i]) continue;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> ez(to_eigen(sol.Z[i]), Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> ex(to_eigen(sol.X[i]), Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < ez.eigenvalues().size(); ++k) sol.z_eigenvalues[i].push_back(ez.eigenvalues()(k));
    for (Eigen::Index k = 0; k < ex.eigenvalues().size(); ++k) sol.x_eigenvalues[i].push_back(ex.eigenvalues()(k));
    if (p.active(i)) sol.dual_residual = std::max(sol.dual_residual, -ez.eigenvalues()(0));
  }
  return sol;
}

// ---------------------------------------------------------------------------
// Exact LP path

bool lp_applicable(const BlockSdpProblem& p) {
  if (!p.A_exact || !p.b_exact) return false;
  for (std::size_t i = 0; i < p.num_blocks(); ++i)
    if (p.active(i) && p.block_sizes[i] != 1) return false;
  return true;
}

namespace {

// Solves a x = r (a possibly non-square, full row rank or consistent); free variables set to zero.
std::optional<std::vector<Scalar>> particular_solution(const ExactMatrix& a, const std::vector<Scalar>& r) {
  std::size_t rows = a.rows(), cols = a.cols();
  ExactMatrix aug(rows, cols + 1);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) aug(i, j) = a(i, j);
    aug(i, cols) = r[i];
  }
  auto e = rref(aug);
  std::vector<Scalar> x(cols);
  for (std::size_t k = 0; k < e.pivots.size(); ++k) {
    if (e.pivots[k] == cols) return std::nullopt;
    x[e.pivots[k]] = e.reduced(k, cols);
  }
  return x;
}

}  // namespace

std::optional<SdpSolution> solve_lp_exact(const BlockSdpProblem& p) {
  if (!lp_applicable(p)) return std::nullopt;
  const auto& A = *p.A_exact;
  const auto& b = *p.b_exact;
  std::size_t nv = p.num_vars();
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < p.num_blocks(); ++i)
    if (p.active(i)) rows.push_back(i);
  for (const auto& al : A)
    for (auto i : rows)
      if (!al[i](0, 0).is_real()) return std::nullopt;

  SdpSolution sol;
  sol.exact = true;
  sol.y_exact.assign(nv + 1, Scalar());
  sol.y_exact[0] = 1;
  // Variables that appear in some active row.
  std::vector<std::size_t> vars;
  for (std::size_t l = 1; l <= nv; ++l) {
    bool used = false;
    for (auto i : rows)
      if (!A[l][i](0, 0).is_zero()) used = true;
    if (used) {
      vars.push_back(l);
    } else if (!b[l].is_zero()) {
      sol.status = SdpStatus::primal_infeasible;
      sol.message = "moment variable " + std::to_string(l) + " is unconstrained with nonzero objective";
      sol.ray.assign(nv + 1, 0.0);
      sol.ray[l] = b[l].sign();
      return sol;
    }
  }
  std::size_t N = rows.size(), k = vars.size();
  ExactMatrix a(N, k);
  std::vector<Scalar> a0(N);
  for (std::size_t r = 0; r < N; ++r) {
    a0[r] = A[0][rows[r]](0, 0);
    for (std::size_t c = 0; c < k; ++c) a(r, c) = A[vars[c]][rows[r]](0, 0);
  }
  // The objective must be orthogonal to the null space of a.
  ExactMatrix ker = kernel(a);
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    Scalar s;
    for (std::size_t j = 0; j < k; ++j) s += b[vars[j]] * ker(j, c);
    if (!s.is_zero()) {
      sol.status = SdpStatus::primal_infeasible;
      sol.message = "moment objective unbounded along the null space of the constraints";
      sol.ray.assign(nv + 1, 0.0);
      for (std::size_t j = 0; j < k; ++j) sol.ray[vars[j]] = (ker(j, c) * Scalar(s.sign())).to_double();
      return sol;
    }
  }
  std::size_t r = rank(a);
  bool any_feasible = false;
  std::vector<std::size_t> pick(r);
  std::iota(pick.begin(), pick.end(), 0);
  auto next = [&]() {
    if (r == 0) return false;
    std::size_t i = r;
    while (i > 0 && pick[i - 1] == N - r + i - 1) --i;
    if (i == 0) return false;
    ++pick[i - 1];
    for (std::size_t j = i; j < r; ++j) pick[j] = pick[j - 1] + 1;
    return true;
  };
  do {
    ExactMatrix at(r, k);
    std::vector<Scalar> rhs(r);
    for (std::size_t t = 0; t < r; ++t) {
      for (std::size_t c = 0; c < k; ++c) at(t, c) = a(pick[t], c);
      rhs[t] = -a0[pick[t]];
    }
    if (rank(at) != r) continue;
    auto yv = particular_solution(at, rhs);
    if (!yv) continue;
    bool feasible = true;
    for (std::size_t t = 0; t < N && feasible; ++t) {
      Scalar z = a0[t];
      for (std::size_t c = 0; c < k; ++c) z += a(t, c) * (*yv)[c];
      if (z.sign() < 0) feasible = false;
    }
    if (!feasible) continue;
    any_feasible = true;
    // a_T^T x = -b
    std::vector<Scalar> nb(k);
    for (std::size_t c = 0; c < k; ++c) nb[c] = -b[vars[c]];
    auto xv = particular_solution(at.transpose(), nb);
    if (!xv) continue;
    bool dual_ok = true;
    for (const auto& x : *xv)
      if (x.sign() < 0) dual_ok = false;
    if (!dual_ok) continue;
    for (std::size_t c = 0; c < k; ++c) sol.y_exact[vars[c]] = (*yv)[c];
    sol.x_exact.assign(p.num_blocks(), Scalar());
    for (std::size_t t = 0; t < r; ++t) sol.x_exact[rows[pick[t]]] = (*xv)[t];
    sol.value_exact = b[0];
    for (std::size_t l = 1; l <= nv; ++l) sol.value_exact += b[l] * sol.y_exact[l];
    sol.status = SdpStatus::optimal;
    // Numeric mirror of the exact data.
    sol.y.clear();
    for (const auto& v : sol.y_exact) sol.y.push_back(v.to_double());
    sol.X.assign(p.num_blocks(), ComplexMatrix());
    sol.Z.assign(p.num_blocks(), ComplexMatrix());
    sol.x_eigenvalues.assign(p.num_blocks(), {});
    sol.z_eigenvalues.assign(p.num_blocks(), {});
    for (std::size_t i = 0; i < p.num_blocks(); ++i) {
      if (p.block_sizes[i] != 1) continue;
      Scalar z = A[0][i](0, 0);
      for (std::size_t l = 1; l <= nv; ++l) z += A[l][i](0, 0) * sol.y_exact[l];
      sol.Z[i] = ComplexMatrix(1, 1);
      sol.Z[i](0, 0) = z.to_complex();
      sol.X[i] = ComplexMatrix(1, 1);
      sol.X[i](0, 0) = sol.x_exact[i].to_complex();
      sol.z_eigenvalues[i] = {z.to_double()};
      sol.x_eigenvalues[i] = {sol.x_exact[i].to_double()};
    }
    Scalar pv = b[0];
    for (auto i : rows) pv += A[0][i](0, 0) * sol.x_exact[i];
    if (pv != sol.value_exact) throw SdpError("internal: exact LP primal and dual values differ");
    sol.dual_value = sol.primal_value = sol.value_exact.to_double();
    sol.gap = 0;
    sol.message = "exact LP";
    return sol;
  } while (next());
  if (!any_feasible) {
    sol.status = SdpStatus::dual_infeasible;
    sol.message = "no feasible moment vector";
  } else {
    sol.status = SdpStatus::primal_infeasible;
    sol.message = "moment objective unbounded";
    // Extreme rays of {d : a d >= 0} modulo ker(a): r - 1 active rows.
    std::vector<std::size_t> sub(r - 1);
    std::iota(sub.begin(), sub.end(), 0);
    auto next_sub = [&]() {
      std::size_t q = r - 1, i = q;
      while (i > 0 && sub[i - 1] == N - q + i - 1) --i;
      if (i == 0) return false;
      ++sub[i - 1];
      for (std::size_t j = i; j < q; ++j) sub[j] = sub[j - 1] + 1;
      return true;
    };
    do {
      ExactMatrix m(r - 1 + ker.cols(), k);
      for (std::size_t t = 0; t + 1 < r; ++t)
        for (std::size_t c = 0; c < k; ++c) m(t, c) = a(sub[t], c);
      for (std::size_t t = 0; t < ker.cols(); ++t)
        for (std::size_t c = 0; c < k; ++c) m(r - 1 + t, c) = ker(c, t);
      ExactMatrix dir = kernel(m);
      if (dir.cols() != 1) continue;
      Scalar gain;
      for (std::size_t c = 0; c < k; ++c) gain += b[vars[c]] * dir(c, 0);
      if (gain.is_zero()) continue;
      Scalar sgn(gain.sign());
      bool ok = true;
      for (std::size_t t = 0; t < N && ok; ++t) {
        Scalar v;
        for (std::size_t c = 0; c < k; ++c) v += a(t, c) * dir(c, 0);
        if ((v * sgn).sign() < 0) ok = false;
      }
      if (!ok) continue;
      sol.ray.assign(nv + 1, 0.0);
      for (std::size_t c = 0; c < k; ++c) sol.ray[vars[c]] = (dir(c, 0) * sgn).to_double();
      break;
    } while (r > 1 && next_sub());
  }
  return sol;
}

SdpSolution solve(const BlockSdpProblem& p, const SdpOptions& opt) {
  if (auto s = solve_lp_exact(p)) return *s;
  return solve_ipm(p, opt);
}

// ---------------------------------------------------------------------------

RankReport complementarity_ranks(const BlockSdpProblem& p, const SdpSolution& s, double tol_rank) {
  RankReport rep;
  // Thresholds are relative to the largest eigenvalue over all blocks, floored at 1
  // so that an all-zero X is not promoted to full rank by its rounding noise.
  double zmax = 1, xmax = 1;
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    for (double v : s.z_eigenvalues.at(i)) zmax = std::max(zmax, std::abs(v));
    for (double v : s.x_eigenvalues.at(i)) xmax = std::max(xmax, std::abs(v));
  }
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    BlockRanks br;
    double res = 0, tres = 0;
    if (p.block_sizes[i]) {
      br.z = br.x = 0;
      for (double v : s.z_eigenvalues[i])
        if (v > tol_rank * zmax) ++br.z;
      for (double v : s.x_eigenvalues[i])
        if (v > tol_rank * xmax) ++br.x;
      MatrixXcd xz = to_eigen(s.X[i]) * to_eigen(s.Z[i]);
      res = xz.norm();
      tres = std::abs(xz.trace());
      if (static_cast<std::size_t>(br.z + br.x) > p.block_sizes[i]) rep.consistent = false;
    }
    rep.blocks.push_back(br);
    rep.residuals.push_back(res);
    rep.trace_residuals.push_back(tres);
  }
  if (s.status != SdpStatus::optimal) rep.warning = "solver status is " + to_string(s.status) + "; ranks are not reliable";
  else if (s.gap > 1e-6 * (1 + std::abs(s.dual_value))) rep.warning = "duality gap too large to trust ranks";
  return rep;
}

}  // namespace symsdp
