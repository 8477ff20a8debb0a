#include "symsdp/relaxation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "symsdp/linear.hpp"

namespace symsdp {

namespace {

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return monomial_less(a, b); }
};

// Real coordinates of polynomials: (2 id, 2 id + 1) hold the real and
// imaginary parts of the coefficient of monomial id.  Ids follow the
// canonical monomial order for the monomials registered up front.
class Coordinates {
 public:
  explicit Coordinates(const std::set<Monomial, MonomialLess>& known) {
    for (const auto& w : known) id(w);
  }
  std::size_t id(const Monomial& w) {
    auto [it, inserted] = ids_.emplace(w, words_.size());
    if (inserted) words_.push_back(w);
    return it->second;
  }
  SparseVec of(const Polynomial& p) {
    SparseVec v;
    for (const auto& [w, c] : p.terms()) {
      std::size_t k = id(w);
      Scalar re = c.real_part(), im = c.imag_part();
      if (!re.is_zero()) v[2 * k] = re;
      if (!im.is_zero()) v[2 * k + 1] = im;
    }
    return v;
  }
  Polynomial polynomial(const SparseVec& v) const {
    Polynomial p;
    for (const auto& [k, x] : v) p.add_normal(words_[k / 2], k % 2 ? x * Scalar::i() : x);
    return p;
  }

 private:
  std::unordered_map<Monomial, std::size_t, MonomialHash> ids_;
  std::vector<Monomial> words_;
};

Monomial leading(const Polynomial& p) {
  Monomial best;
  bool first = true;
  for (const auto& [w, c] : p.terms())
    if (first || monomial_less(w, best)) {
      best = w;
      first = false;
    }
  return best;
}

std::vector<Monomial> normal_words(const Scenario& sc, int max_len) {
  std::set<Monomial, MonomialLess> all{{}};
  std::vector<Monomial> frontier{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Monomial> next;
    for (const auto& w : frontier)
      for (Letter l : sc.generators()) {
        Monomial c = w;
        c.push_back(l);
        auto nf = normal_form(c);
        if (nf && static_cast<int>(nf->size()) == len && all.insert(*nf).second) next.push_back(*nf);
      }
    frontier = std::move(next);
  }
  return {all.begin(), all.end()};
}

}  // namespace

GeneratingSequence level_sequence(const Scenario& sc, int level) {
  if (level < 1) throw RelaxationError("level must be at least 1");
  GeneratingSequence q;
  q.tag = std::to_string(level);
  for (const auto& w : normal_words(sc, level)) q.entries.push_back(Polynomial::word(w));
  return q;
}

GeneratingSequence one_plus_ab_sequence(const Scenario& sc) {
  GeneratingSequence q;
  q.tag = "1+AB";
  q.entries.push_back(Polynomial(1));
  const auto& gens = sc.generators();
  for (Letter l : gens) q.entries.push_back(Polynomial::letter(l));
  for (int p = 0; p < sc.parties(); ++p)
    for (int r = p + 1; r < sc.parties(); ++r)
      for (Letter a : gens) {
        if (letter_party(a) != p) continue;
        for (Letter b : gens)
          if (letter_party(b) == r) q.entries.push_back(Polynomial::word({a, b}));
      }
  return q;
}

GeneratingSequence one_plus_ab_abc_sequence(const Scenario& sc) {
  GeneratingSequence q = one_plus_ab_sequence(sc);
  q.tag = "1+AB+ABC";
  const auto& gens = sc.generators();
  for (int p = 0; p < sc.parties(); ++p)
    for (int r = p + 1; r < sc.parties(); ++r)
      for (int t = r + 1; t < sc.parties(); ++t)
        for (Letter a : gens) {
          if (letter_party(a) != p) continue;
          for (Letter b : gens) {
            if (letter_party(b) != r) continue;
            for (Letter c : gens)
              if (letter_party(c) == t) q.entries.push_back(Polynomial::word({a, b, c}));
          }
        }
  return q;
}

GeneratingSequence custom_sequence(const Scenario& sc, std::vector<Polynomial> entries) {
  if (entries.empty() || entries[0] != Polynomial(1)) throw RelaxationError("the first entry of a generating sequence must be 1");
  Coordinates coords(std::set<Monomial, MonomialLess>{});
  SparseEchelon ech;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entries[i].validate(sc);
    SparseVec v = coords.of(entries[i]);
    // Dependence over C: test both v and i v in real coordinates.
    auto combo = ech.express(v);
    if (combo) {
      std::string msg = "generating sequence entry " + std::to_string(i) + " (" + entries[i].str() + ") is dependent on entries";
      std::set<std::size_t> used;
      for (const auto& [k, x] : *combo) used.insert(k / 2);
      for (auto k : used) msg += " " + std::to_string(k);
      throw RelaxationError(msg);
    }
    ech.insert(v, 2 * i);
    Polynomial iv = entries[i] * Scalar::i();
    if (!ech.insert(coords.of(iv), 2 * i + 1))
      throw RelaxationError("generating sequence entry " + std::to_string(i) + " (" + entries[i].str() + ") is dependent on earlier entries");
  }
  GeneratingSequence q;
  q.entries = std::move(entries);
  q.tag = "custom";
  return q;
}

GeneratingSequence generating_sequence(const Scenario& sc, std::string_view level) {
  if (level == "1+AB") return one_plus_ab_sequence(sc);
  if (level == "1+AB+ABC") return one_plus_ab_abc_sequence(sc);
  int k = 0;
  for (char c : level) {
    if (c < '0' || c > '9' || k > 100) throw RelaxationError("unknown level '" + std::string(level) + "'");
    k = 10 * k + (c - '0');
  }
  if (level.empty()) throw RelaxationError("empty level");
  return level_sequence(sc, k);
}

ExactMatrix to_dense(const SparseMatrixEntries& e, std::size_t n) {
  ExactMatrix m(n, n);
  for (const auto& x : e) m(x.i, x.j) += x.v;
  return m;
}

MomentStructure build_moment_structure(const Scenario& sc, const Polynomial& objective, const GeneratingSequence& q) {
  objective.validate(sc);
  if (!objective.is_hermitian()) throw RelaxationError("objective is not self-adjoint");
  std::size_t n = q.size();
  if (n == 0 || q.entries[0] != Polynomial(1)) throw RelaxationError("the first entry of a generating sequence must be 1");
  MomentStructure ms;
  ms.scenario = sc;
  ms.sequence = q;
  ms.xi.assign(n, std::vector<Polynomial>(n));
  std::vector<Polynomial> adj(n);
  for (std::size_t i = 0; i < n; ++i) adj[i] = q.entries[i].adjoint();
  std::set<Monomial, MonomialLess> known;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ms.xi[i][j] = q.entries[i] * adj[j];
      for (const auto& [w, c] : ms.xi[i][j].terms()) known.insert(w);
    }
  Coordinates coords(known);

  // Distinct entries up to adjoint, each represented by the one with the
  // smaller leading monomial, visited in canonical order.
  std::vector<std::pair<Monomial, Polynomial>> cand;
  {
    std::unordered_map<Monomial, std::vector<Polynomial>, MonomialHash> seen;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j) {
        Polynomial p = ms.xi[i][j];
        if (p.is_zero()) continue;
        Polynomial pa = p.adjoint();
        Monomial lp = leading(p), la = leading(pa);
        if (monomial_less(la, lp)) {
          std::swap(p, pa);
          std::swap(lp, la);
        }
        auto& bucket = seen[lp];
        if (std::find(bucket.begin(), bucket.end(), p) != bucket.end()) continue;
        bucket.push_back(p);
        cand.emplace_back(lp, std::move(p));
      }
    std::stable_sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) { return monomial_less(a.first, b.first); });
  }

  SparseEchelon ech;
  ms.basis.push_back(Polynomial(1));
  ech.insert(coords.of(ms.basis[0]), 0);
  auto offer = [&](Polynomial h) {
    if (h.is_zero()) return;
    if (ech.insert(coords.of(h), ms.basis.size())) ms.basis.push_back(std::move(h));
  };
  for (const auto& [lead, p] : cand) {
    if (p.is_hermitian()) {
      offer(p);
    } else {
      auto [h1, h2] = hermitian_split(p);
      offer(std::move(h1));
      offer(std::move(h2));
    }
  }

  std::size_t m = ms.basis.size();
  ms.A.assign(m, {});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (ms.xi[i][j].is_zero()) continue;
      // xi = sum_k (re_k + i im_k) M_k, split into self-adjoint parts
      const Polynomial& x = ms.xi[i][j];
      Polynomial xa = x.adjoint();
      SparseVec re = coords.of((x + xa) * Scalar::rational(1, 2));
      SparseVec im = coords.of((x - xa) * (Scalar::i() * Scalar::rational(-1, 2)));
      auto cr = ech.express(re), ci = ech.express(im);
      if (!cr || !ci) throw RelaxationError("internal: moment matrix entry outside the basis span");
      std::map<std::size_t, Scalar> acc;
      for (const auto& [k, x] : *cr) acc[k] += x;
      for (const auto& [k, x] : *ci) acc[k] += x * Scalar::i();
      for (const auto& [k, x] : acc)
        if (!x.is_zero()) ms.A[k].push_back({i, j, x});
    }

  auto cb = ech.express(coords.of(objective));
  if (!cb) {
    SparseVec r = ech.residual(coords.of(objective));
    std::set<std::size_t> words;
    for (const auto& [k, x] : r) words.insert(k / 2);
    std::string msg = "objective is not in the span of the moment matrix; missing:";
    for (auto k : words) {
      SparseVec unit{{2 * k, Scalar(1)}};
      msg += " " + coords.polynomial(unit).str();
    }
    throw RelaxationError(msg);
  }
  ms.b.assign(m, Scalar());
  for (const auto& [k, x] : *cb) ms.b[k] = x;
  return ms;
}

Polynomial group_average(const Polynomial& p, const Scenario& sc, const FiniteGroup& g) {
  Polynomial s;
  for (const auto& om : g.elements()) s += AffineAutomorphism(sc, om).apply(p);
  return s * Scalar(mpq_class(1, static_cast<long>(g.order())));
}

SymmetrizedMoments symmetrize_moments(const MomentStructure& ms, const FiniteGroup& g) {
  const Scenario& sc = ms.scenario;
  std::vector<AffineAutomorphism> autos;
  for (const auto& om : g.elements()) autos.emplace_back(sc, om);
  std::vector<std::unordered_map<Monomial, Polynomial, MonomialHash>> cache(autos.size());
  Scalar inv_order(mpq_class(1, static_cast<long>(g.order())));

  std::set<Monomial, MonomialLess> known;
  for (const auto& p : ms.basis)
    for (const auto& [w, c] : p.terms()) known.insert(w);
  Coordinates coords(known);

  std::size_t m = ms.m();
  std::vector<SparseVec> bar(m);
  for (std::size_t k = 0; k < m; ++k) {
    Polynomial s;
    for (std::size_t e = 0; e < autos.size(); ++e)
      for (const auto& [w, c] : ms.basis[k].terms()) {
        auto it = cache[e].find(w);
        if (it == cache[e].end()) it = cache[e].emplace(w, autos[e].apply(w)).first;
        s += it->second * c;
      }
    bar[k] = coords.of(s * inv_order);
  }

  // Ensures every averaged element lies in the span of the basis.
  {
    SparseEchelon ech;
    for (std::size_t k = 0; k < m; ++k) ech.insert(coords.of(ms.basis[k]), k);
    for (std::size_t k = 0; k < m; ++k)
      if (!ech.express(bar[k])) throw RelaxationError("span of the moment basis is not closed under the group");
  }

  std::vector<SparseVec> rows{coords.of(Polynomial(1))};
  rows.insert(rows.end(), bar.begin(), bar.end());
  auto red = sparse_rref(rows);
  if (red.empty() || red[0].begin()->first != 0) throw RelaxationError("internal: unit is not the first pivot");

  SymmetrizedMoments sm;
  std::vector<std::size_t> pivots;
  for (const auto& r : red) {
    pivots.push_back(r.begin()->first);
    sm.tilde_basis.push_back(coords.polynomial(r));
  }
  std::size_t mt = red.size();
  sm.w.assign(m, Scalar());
  sm.W.assign(m, std::vector<Scalar>(mt, Scalar()));
  for (std::size_t k = 0; k < m; ++k) {
    auto at = [&](std::size_t coord) {
      auto it = bar[k].find(coord);
      return it == bar[k].end() ? Scalar() : it->second;
    };
    sm.w[k] = at(0);
    for (std::size_t l = 1; l < mt; ++l) sm.W[k][l] = at(pivots[l]);
  }

  std::size_t n = ms.n();
  sm.Aprime.assign(mt, ExactMatrix(n, n));
  sm.tilde_b.assign(mt, Scalar());
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t l = 0; l < mt; ++l) {
      const Scalar& c = l == 0 ? sm.w[k] : sm.W[k][l];
      if (c.is_zero()) continue;
      for (const auto& e : ms.A[k]) sm.Aprime[l](e.i, e.j) += c * e.v;
      sm.tilde_b[l] += c * ms.b[k];
    }
  }
  return sm;
}

ConjugationReduction conjugation_reduction(const MomentStructure& ms) {
  ConjugationReduction out;
  out.reduced = ms;
  std::size_t m = ms.m();
  out.F.assign(m, 1);
  for (std::size_t k = 0; k < m; ++k) {
    bool real = true, imag = true;
    for (const auto& e : ms.A[k]) {
      if (!e.v.imag_part().is_zero()) real = false;
      if (!e.v.real_part().is_zero()) imag = false;
    }
    if (real) continue;
    if (!imag || k == 0) {
      out.reason = k == 0 ? "A_0 is not real" : "A_" + std::to_string(k) + " is neither real nor imaginary";
      out.F.clear();
      return out;
    }
    out.F[k] = -1;
  }
  for (std::size_t k = 0; k < m; ++k)
    if (out.F[k] < 0 && !ms.b[k].is_zero()) {
      out.reason = "objective is not invariant under conjugation (b_" + std::to_string(k) + " != 0)";
      out.F.clear();
      return out;
    }
  MomentStructure r;
  r.scenario = ms.scenario;
  r.sequence = ms.sequence;
  r.xi = ms.xi;
  for (std::size_t k = 0; k < m; ++k) {
    if (out.F[k] < 0) continue;
    out.kept.push_back(k);
    r.basis.push_back(ms.basis[k]);
    r.A.push_back(ms.A[k]);
    r.b.push_back(ms.b[k]);
  }
  out.reduced = std::move(r);
  out.applied = true;
  return out;
}

}  // namespace symsdp
