#include "symsdp/certificates.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

namespace symsdp {

// ---------------------------------------------------------------------------
// LDL and PSD tests

LdlResult ldl(const ExactMatrix& m, LdlPivoting pivoting) {
  if (!m.is_hermitian()) throw CertificateError("ldl: matrix is not Hermitian");
  std::size_t n = m.rows();
  ExactMatrix a = m;
  std::vector<std::size_t> rest(n);
  for (std::size_t k = 0; k < n; ++k) rest[k] = k;
  LdlResult out;
  std::vector<std::vector<Scalar>> cols;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pick = k;
    if (pivoting == LdlPivoting::largest_diagonal)
      for (std::size_t j = k + 1; j < n; ++j)
        if (a(rest[j], rest[j]) > a(rest[pick], rest[pick])) pick = j;
    std::swap(rest[k], rest[pick]);
    std::size_t i = rest[k];
    const Scalar d = a(i, i);
    if (!d.is_real()) throw CertificateError("ldl: non-real diagonal entry");
    if (d.sign() < 0)
      throw NotPsdError("not positive semidefinite: pivot " + std::to_string(k + 1) + " (row " + std::to_string(i) + ") is " + d.str(),
                        k + 1);
    if (d.is_zero()) {
      for (std::size_t j = k + 1; j < n; ++j)
        if (!a(rest[j], i).is_zero())
          throw NotPsdError("not positive semidefinite: zero pivot " + std::to_string(k + 1) + " (row " + std::to_string(i) +
                                ") with nonzero entry in row " + std::to_string(rest[j]),
                            k + 2);
      continue;
    }
    std::vector<Scalar> l(n);
    l[i] = 1;
    Scalar dinv = d.inverse();
    for (std::size_t j = k + 1; j < n; ++j) l[rest[j]] = a(rest[j], i) * dinv;
    for (std::size_t r = k + 1; r < n; ++r) {
      std::size_t u = rest[r];
      if (l[u].is_zero()) continue;
      for (std::size_t c = k + 1; c < n; ++c) {
        std::size_t v = rest[c];
        if (!l[v].is_zero()) a(u, v) -= l[u] * d * l[v].conj();
      }
    }
    cols.push_back(std::move(l));
    out.D.push_back(d);
    out.order.push_back(i);
  }
  out.L = ExactMatrix(n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < n; ++r) out.L(r, c) = cols[c][r];
  return out;
}

bool psd_check_minors(const ExactMatrix& m) {
  if (!m.is_hermitian()) return false;
  std::size_t n = m.rows();
  if (n > 20) throw CertificateError("principal minor test limited to 20 x 20 matrices");
  for (unsigned long mask = 1; mask < (1UL << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < n; ++k)
      if (mask >> k & 1) idx.push_back(k);
    ExactMatrix sub(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
      for (std::size_t c = 0; c < idx.size(); ++c) sub(r, c) = m(idx[r], idx[c]);
    Scalar det = determinant(sub);
    if (det.real_part().sign() < 0) return false;
  }
  return true;
}

bool is_psd(const ExactMatrix& m) {
  try {
    ldl(m);
    return true;
  } catch (const NotPsdError&) {
    return false;
  }
}

// ---------------------------------------------------------------------------
// Exact block solutions

Scalar check_block_solution(const BlockSdpProblem& p, const ExactBlockSolution& s) {
  if (!p.A_exact || !p.b_exact) throw CertificateError("problem has no exact data");
  const auto& A = *p.A_exact;
  const auto& b = *p.b_exact;
  if (s.X.size() != p.num_blocks()) throw CertificateError("solution has the wrong number of blocks");
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    if (s.X[i].rows() == 0) continue;
    if (!p.active(i) && !s.X[i].is_zero()) throw CertificateError("frozen block " + p.block_labels[i] + " is nonzero");
    if (s.X[i].rows() != p.block_sizes[i]) throw CertificateError("block " + p.block_labels[i] + " has the wrong size");
    try {
      ldl(s.X[i]);
    } catch (const NotPsdError& e) {
      throw CertificateError("block " + p.block_labels[i] + ": " + e.what());
    }
  }
  auto value = [&](std::size_t l) {
    Scalar v;
    for (std::size_t i = 0; i < p.num_blocks(); ++i)
      if (s.X[i].rows()) v += trace_product(A[l][i], s.X[i]);
    return v;
  };
  for (std::size_t l = 1; l < A.size(); ++l) {
    Scalar v = value(l);
    if (v != -b[l]) throw CertificateError("constraint " + std::to_string(l) + " violated: tr(A X) = " + v.str() + ", want " + (-b[l]).str());
  }
  return b[0] + value(0);
}

ExactBlockSolution round_to_exact(const BlockSdpProblem& p, const SdpSolution& s, const FieldTower& tower, const RoundingOptions& opts) {
  ExactBlockSolution out;
  out.X.assign(p.num_blocks(), ExactMatrix());
  if (s.exact && !s.x_exact.empty()) {
    for (std::size_t i = 0; i < p.num_blocks(); ++i)
      if (p.active(i) && p.block_sizes[i] == 1) {
        out.X[i] = ExactMatrix(1, 1);
        out.X[i](0, 0) = s.x_exact[i];
      }
    out.mu = check_block_solution(p, out);
    return out;
  }
  RecognizeOptions ro;
  ro.denom_bound = opts.denom_bound;
  ro.tolerance = opts.tolerance;
  ro.height = opts.height;
  for (std::size_t i = 0; i < p.num_blocks(); ++i) {
    if (!p.active(i)) continue;
    std::size_t n = p.block_sizes[i];
    out.X[i] = ExactMatrix(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = r; c < n; ++c) {
        Complex x = s.X[i](r, c);
        if (r == c) x = {x.real(), 0};
        auto v = recognize(x, tower, ro);
        if (!v) {
          std::ostringstream os;
          os.precision(17);
          os << "cannot recognize X" << p.block_labels[i] << "(" << r << "," << c << ") = " << x.real();
          if (x.imag() != 0) os << (x.imag() < 0 ? " - " : " + ") << std::abs(x.imag()) << " i";
          os << " in " << tower.str() << " with denominators <= " << opts.denom_bound << " (tolerance " << opts.tolerance << ")";
          throw CertificateError(os.str());
        }
        out.X[i](r, c) = *v;
        out.X[i](c, r) = v->conj();
      }
  }
  out.mu = check_block_solution(p, out);
  return out;
}

ExactBlockSolution complementary_solution(const BlockSdpProblem& p, const std::vector<Scalar>& y, const SdpSolution* numeric,
                                          long denom_bound) {
  if (!p.A_exact || !p.b_exact) throw CertificateError("problem has no exact data");
  const auto& A = *p.A_exact;
  const auto& b = *p.b_exact;
  if (y.size() != A.size()) throw CertificateError("moment vector has the wrong length");
  std::size_t nb = p.num_blocks();

  // Parameters of S_i: diagonal (real), off-diagonal real and imaginary parts.
  struct Param {
    std::size_t block, r, c;
    bool imag;
  };
  std::vector<Param> params;
  std::vector<ExactMatrix> K(nb);
  bool complex_data = false;
  for (const auto& al : A)
    for (std::size_t i = 0; i < nb; ++i)
      if (p.active(i))
        for (const auto& x : al[i].data())
          if (!x.is_real()) complex_data = true;
  for (std::size_t i = 0; i < nb; ++i) {
    if (!p.active(i)) continue;
    std::size_t n = p.block_sizes[i];
    ExactMatrix z(n, n);
    for (std::size_t l = 0; l < A.size(); ++l)
      if (!y[l].is_zero()) z += A[l][i] * y[l];
    if (!is_psd(z)) throw CertificateError("moment block " + p.block_labels[i] + " is not positive semidefinite at the given moments");
    K[i] = kernel(z);
    std::size_t k = K[i].cols();
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = r; c < k; ++c) {
        params.push_back({i, r, c, false});
        if (c != r && complex_data) params.push_back({i, r, c, true});
      }
  }
  // X^(i) as a linear function of the parameters.
  auto basis_matrix = [&](const Param& q) {
    std::size_t k = K[q.block].cols();
    ExactMatrix e(k, k);
    if (q.r == q.c) {
      e(q.r, q.r) = 1;
    } else if (!q.imag) {
      e(q.r, q.c) = 1;
      e(q.c, q.r) = 1;
    } else {
      e(q.r, q.c) = Scalar::i();
      e(q.c, q.r) = -Scalar::i();
    }
    return ExactMatrix(K[q.block] * e * K[q.block].adjoint());
  };
  std::vector<ExactMatrix> pb;
  for (const auto& q : params) pb.push_back(basis_matrix(q));
  std::size_t np = params.size(), m = A.size() - 1;
  ExactMatrix sys(m, np + 1);
  for (std::size_t l = 1; l <= m; ++l) {
    for (std::size_t t = 0; t < np; ++t) sys(l - 1, t) = trace_product(A[l][params[t].block], pb[t]).real_part();
    sys(l - 1, np) = -b[l];
  }
  auto ech = rref(sys);
  std::vector<bool> is_pivot(np, false);
  for (std::size_t k = 0; k < ech.pivots.size(); ++k) {
    if (ech.pivots[k] == np) throw CertificateError("complementarity system is inconsistent: no certificate with this support");
    is_pivot[ech.pivots[k]] = true;
  }
  // Free parameters from the numeric solution: S_num = K^+ X_num K^+dagger.
  std::vector<Scalar> val(np);
  std::vector<std::size_t> free_params;
  for (std::size_t t = 0; t < np; ++t)
    if (!is_pivot[t]) free_params.push_back(t);
  if (!free_params.empty()) {
    if (!numeric) throw CertificateError(std::to_string(free_params.size()) + " free parameters left and no numeric solution to fix them");
    std::map<std::size_t, Eigen::MatrixXcd> snum;
    for (auto t : free_params) {
      const auto& q = params[t];
      if (!snum.count(q.block)) {
        const auto& k = K[q.block];
        Eigen::MatrixXcd ke(k.rows(), k.cols()), xe(k.rows(), k.rows());
        for (std::size_t r = 0; r < k.rows(); ++r)
          for (std::size_t c = 0; c < k.cols(); ++c) ke(r, c) = k(r, c).to_complex();
        for (std::size_t r = 0; r < k.rows(); ++r)
          for (std::size_t c = 0; c < k.rows(); ++c) xe(r, c) = numeric->X.at(q.block)(r, c);
        Eigen::MatrixXcd kp = ke.completeOrthogonalDecomposition().pseudoInverse();
        snum[q.block] = kp * xe * kp.adjoint();
      }
      Complex s = snum[q.block](q.r, q.c);
      val[t] = Scalar(best_rational(q.imag ? s.imag() : s.real(), denom_bound));
    }
  }
  for (std::size_t k = 0; k < ech.pivots.size(); ++k) {
    Scalar v = ech.reduced(k, np);
    for (auto t : free_params) v -= ech.reduced(k, t) * val[t];
    val[ech.pivots[k]] = v;
  }
  ExactBlockSolution out;
  out.X.assign(nb, ExactMatrix());
  for (std::size_t i = 0; i < nb; ++i)
    if (p.active(i)) out.X[i] = ExactMatrix(p.block_sizes[i], p.block_sizes[i]);
  for (std::size_t t = 0; t < np; ++t)
    if (!val[t].is_zero()) out.X[params[t].block] += pb[t] * val[t];
  out.mu = check_block_solution(p, out);
  return out;
}

// ---------------------------------------------------------------------------
// SOS extraction and verification

Polynomial SosDecomposition::expand() const {
  std::vector<std::future<Polynomial>> parts;
  for (const auto& t : terms)
    parts.push_back(std::async(std::launch::async, [&t] { return t.poly.adjoint() * t.poly * t.weight; }));
  Polynomial sum;
  for (auto& f : parts) sum += f.get();
  return sum;
}

namespace {

// Term for column v of the factor: tr(Xi X) contains v v^dagger as sum_i v_i Q_i^*.
Polynomial column_poly(const ExactMatrix& v, std::size_t col, const GeneratingSequence& q) {
  Polynomial t;
  for (std::size_t i = 0; i < v.rows(); ++i)
    if (!v(i, col).is_zero()) t += q.entries[i].adjoint() * v(i, col);
  return t;
}

}  // namespace

SosDecomposition extract_sos(const ExactMatrix& x, const Scalar& mu, const GeneratingSequence& q) {
  if (x.rows() != q.size()) throw CertificateError("X does not match the generating sequence");
  auto f = ldl(x);
  SosDecomposition s;
  s.mu = mu;
  for (std::size_t c = 0; c < f.rank(); ++c) s.terms.push_back({f.D[c], column_poly(f.L, c, q)});
  return s;
}

SosDecomposition extract_sos(const ExactBlockSolution& sol, const IsotypicDecomposition<Scalar>& dec, const GeneratingSequence& q) {
  std::size_t n = dec.I.rows();
  if (n != q.size()) throw CertificateError("decomposition does not match the generating sequence");
  ExactMatrix iinv_dag = dec.I_inv.adjoint();
  SosDecomposition s;
  s.mu = sol.mu;
  for (std::size_t i = 0; i < dec.size(); ++i) {
    const auto& comp = dec.components[i];
    if (comp.multiplicity == 0 || i >= sol.X.size() || sol.X[i].rows() == 0 || sol.X[i].is_zero()) continue;
    auto xf = ldl(sol.X[i]);
    auto cf = ldl(comp.C);
    Scalar inv_d(mpq_class(1, static_cast<long>(comp.dim)));
    ExactMatrix lm = kron(xf.L, cf.L);
    for (std::size_t a = 0; a < xf.rank(); ++a)
      for (std::size_t e = 0; e < cf.rank(); ++e) {
        std::size_t col = a * cf.rank() + e;
        ExactMatrix u(n, 1);
        for (std::size_t r = 0; r < lm.rows(); ++r) u(comp.offset + r, 0) = lm(r, col);
        ExactMatrix v = iinv_dag * u;
        s.terms.push_back({xf.D[a] * cf.D[e] * inv_d, column_poly(v, 0, q)});
      }
  }
  return s;
}

SosCheck verify_sos(const SosDecomposition& c, const Polynomial& objective) {
  SosCheck r;
  for (const auto& t : c.terms)
    if (!t.weight.is_real() || t.weight.sign() < 0) {
      r.difference = "negative or non-real weight " + t.weight.str();
      return r;
    }
  Polynomial lhs = Polynomial(c.mu) - objective;
  Polynomial diff = lhs - c.expand();
  if (diff.is_zero()) {
    r.valid = true;
    return r;
  }
  auto terms = diff.sorted_terms();
  const auto& [w, d] = terms.front();
  Scalar want = lhs.coefficient(w);
  std::string mono = w.empty() ? std::string("1") : monomial_str(w);
  r.difference = "monomial " + mono + ": mu - E has " + want.str() + ", the squares give " + (want - d).str();
  return r;
}

// ---------------------------------------------------------------------------
// Certificate files

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Scenario parse_shape(const std::string& text, std::size_t line) {
  std::vector<std::vector<int>> shape;
  std::stringstream parties(text);
  std::string party;
  while (std::getline(parties, party, ';')) {
    std::vector<int> settings;
    std::stringstream ss(party);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      try {
        std::size_t used = 0;
        int v = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument(item);
        settings.push_back(v);
      } catch (const std::exception&) {
        throw CertificateParseError("bad scenario entry '" + item + "'", line);
      }
    }
    shape.push_back(settings);
  }
  try {
    return Scenario(shape);
  } catch (const ScenarioError& e) {
    throw CertificateParseError(e.what(), line);
  }
}

std::string shape_str(const Scenario& sc) {
  std::string s;
  for (int p = 0; p < sc.parties(); ++p) {
    if (p) s += ';';
    for (int x = 0; x < sc.settings(p); ++x) {
      if (x) s += ',';
      s += std::to_string(sc.outcomes(p, x));
    }
  }
  return s;
}

}  // namespace

Certificate parse_certificate(const std::string& text) {
  Certificate c;
  bool have_scenario = false, have_objective = false, have_bound = false;
  std::stringstream in(text);
  std::string raw;
  std::size_t line = 0;
  auto poly = [&](const std::string& s) {
    if (!have_scenario) throw CertificateParseError("scenario must come first", line);
    try {
      return Polynomial::parse(s, c.scenario);
    } catch (const std::exception& e) {
      throw CertificateParseError(e.what(), line);
    }
  };
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    auto sp = s.find_first_of(" \t");
    std::string key = s.substr(0, sp), rest = sp == std::string::npos ? "" : trim(s.substr(sp));
    if (key == "certificate") {
      c.name = rest;
    } else if (key == "scenario") {
      c.scenario = parse_shape(rest, line);
      have_scenario = true;
    } else if (key == "objective") {
      c.objective = poly(rest);
      have_objective = true;
    } else if (key == "bound") {
      try {
        c.sos.mu = Scalar::parse(rest);
      } catch (const std::exception& e) {
        throw CertificateParseError(e.what(), line);
      }
      have_bound = true;
    } else if (key == "sequence") {
      c.sequence.push_back(poly(rest));
    } else if (key == "term") {
      auto colon = rest.find(':');
      if (colon == std::string::npos) throw CertificateParseError("term needs 'weight : polynomial'", line);
      Scalar w;
      try {
        w = Scalar::parse(trim(rest.substr(0, colon)));
      } catch (const std::exception& e) {
        throw CertificateParseError(e.what(), line);
      }
      c.sos.terms.push_back({w, poly(trim(rest.substr(colon + 1)))});
    } else {
      throw CertificateParseError("unknown keyword '" + key + "'", line);
    }
  }
  if (!have_scenario) throw CertificateParseError("missing scenario", line);
  if (!have_objective) throw CertificateParseError("missing objective", line);
  if (!have_bound) throw CertificateParseError("missing bound", line);
  return c;
}

Certificate read_certificate(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CertificateError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_certificate(ss.str());
}

std::string write_certificate(const Certificate& c) {
  std::ostringstream os;
  if (!c.name.empty()) os << "certificate " << c.name << "\n";
  os << "scenario " << shape_str(c.scenario) << "\n";
  os << "objective " << c.objective.str() << "\n";
  os << "bound " << c.sos.mu.str() << "\n";
  for (const auto& q : c.sequence) os << "sequence " << q.str() << "\n";
  for (const auto& t : c.sos.terms) os << "term " << t.weight.str() << " : " << t.poly.str() << "\n";
  return os.str();
}

}  // namespace symsdp
