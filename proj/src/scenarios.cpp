#include "symsdp/scenarios.hpp"

#include <Eigen/Dense>

#include <charconv>
#include <sstream>

namespace symsdp {

Polynomial projector(const Scenario& sc, int party, int setting, int outcome) {
  int d = sc.outcomes(party, setting);
  if (outcome < 0 || outcome >= d) throw ScenarioError("outcome out of range");
  if (outcome + 1 < d) return Polynomial::letter(make_letter(party, setting, outcome));
  Polynomial r(1);
  for (int b = 0; b + 1 < d; ++b) r -= Polynomial::letter(make_letter(party, setting, b));
  return r;
}

Polynomial from_probability_coefficients(const Scenario& sc, const std::vector<ProbabilityTerm>& terms) {
  Polynomial r;
  for (const auto& t : terms) {
    if (static_cast<int>(t.outcomes.size()) != sc.parties() || static_cast<int>(t.settings.size()) != sc.parties())
      throw ScenarioError("probability term does not match the number of parties");
    Polynomial p(t.coeff);
    for (int q = 0; q < sc.parties(); ++q) p = p * projector(sc, q, t.settings[q], t.outcomes[q]);
    r += p;
  }
  return r;
}

BellExpression chsh() {
  Scenario sc = Scenario::uniform(2, 2, 2);
  // <A0B0> - <A0B1> + <A1B0> + <A1B1> with +-1 observables 1 - 2 A_{0|x}.
  Polynomial e = Polynomial::parse("2 - 4 A0|1 - 4 B0|0 + 4 A0|0 B0|0 - 4 A0|0 B0|1 + 4 A0|1 B0|0 + 4 A0|1 B0|1", sc);
  return {"chsh", sc, e, Scalar(2) * Scalar::sqrt(2)};
}

BellExpression cglmp(int d) {
  if (d < 2) throw ScenarioError("cglmp needs d >= 2");
  Scenario sc = Scenario::uniform(2, 2, d);
  auto mod = [d](int v) { return ((v % d) + d) % d; };
  // P(A_x = B_y + k)
  auto pab = [&](int x, int y, int k) {
    Polynomial r;
    for (int j = 0; j < d; ++j) r += projector(sc, 0, x, mod(j + k)) * projector(sc, 1, y, j);
    return r;
  };
  // P(B_y = A_x + k)
  auto pba = [&](int y, int x, int k) {
    Polynomial r;
    for (int j = 0; j < d; ++j) r += projector(sc, 0, x, j) * projector(sc, 1, y, mod(j + k));
    return r;
  };
  Polynomial e;
  for (int k = 0; k < d / 2; ++k) {
    Scalar c = Scalar(1) - Scalar::rational(2 * k, d - 1);
    Polynomial t = pab(0, 0, k) + pba(0, 1, k) + pab(1, 1, k) + pba(1, 0, k + 1);
    t -= pab(0, 0, -k - 1) + pba(0, 1, -k - 1) + pab(1, 1, -k - 1) + pba(1, 0, -k);
    e += c * t;
  }
  std::optional<Scalar> bound;
  if (d == 2) bound = Scalar(2) * Scalar::sqrt(2);
  if (d == 3) bound = Scalar(1) + Scalar::sqrt(mpq_class(11, 3));
  return {"cglmp:" + std::to_string(d), sc, e, bound};
}

BellExpression sliwa(int n) {
  Scenario sc = Scenario::uniform(3, 2, 2);
  const char* text = nullptr;
  Scalar bound;
  switch (n) {
    case 3:
      text =
          "8 A0|0 B0|0 C0|0 + 8 A0|0 B0|0 C0|1 + 8 A0|1 B0|1 C0|0 - 8 A0|1 B0|1 C0|1 - 8 A0|0 B0|0"
          " - 4 A0|0 C0|0 - 4 A0|0 C0|1 - 4 A0|1 C0|0 + 4 A0|1 C0|1 - 4 B0|0 C0|0 - 4 B0|1 C0|0"
          " - 4 B0|0 C0|1 + 4 B0|1 C0|1 + 4 A0|0 + 4 B0|0 + 4 C0|0 - 2";
      bound = Scalar(2) * Scalar::sqrt(2);
      break;
    case 10:
      text =
          "8 A0|0 B0|0 C0|0 + 8 A0|1 B0|0 C0|1 - 8 A0|1 B0|1 C0|0 - 8 A0|0 B0|1 C0|1 - 8 A0|1 B0|0"
          " + 8 A0|1 B0|1 + 8 A0|1 C0|0 - 8 A0|1 C0|1 + 8 B0|1 C0|0 + 8 B0|1 C0|1 - 8 B0|1 - 8 C0|0 + 4";
      bound = Scalar(4);
      break;
    case 11:
      text =
          "-8 A0|0 B0|0 C0|0 - 8 A0|1 B0|0 C0|0 - 8 A0|0 B0|0 C0|1 + 8 A0|1 B0|0 C0|1 + 8 A0|0 B0|1 C0|0"
          " - 8 A0|1 B0|1 C0|0 + 8 A0|0 B0|1 C0|1 + 8 A0|1 B0|1 C0|1 + 8 A0|0 B0|0 - 8 A0|0 B0|1"
          " + 8 A0|1 C0|0 - 8 A0|1 C0|1 - 16 B0|1 C0|1 + 8 B0|1 + 8 C0|1 - 4";
      bound = Scalar(4) * Scalar::sqrt(2);
      break;
    case 14:
      text =
          "8 A0|0 B0|1 C0|0 - 8 A0|1 B0|1 C0|0 - 8 A0|0 B0|1 C0|1 + 8 A0|1 B0|1 C0|1 + 8 A0|1 C0|0"
          " - 8 A0|1 C0|1 + 8 B0|0 C0|0 + 8 B0|0 C0|1 - 8 B0|0 - 8 C0|0 + 4";
      bound = Scalar(4) * Scalar::sqrt(2);
      break;
    default:
      throw ScenarioError("no built-in Sliwa inequality number " + std::to_string(n));
  }
  return {"sliwa:" + std::to_string(n), sc, Polynomial::parse(text, sc), bound};
}

BellExpression builtin_expression(std::string_view name) {
  auto arg = [&](std::string_view prefix) -> std::optional<int> {
    if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
    auto rest = name.substr(prefix.size());
    int v = 0;
    auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
    if (ec != std::errc() || p != rest.data() + rest.size()) throw ScenarioError("bad expression name: " + std::string(name));
    return v;
  };
  if (name == "chsh") return chsh();
  if (auto d = arg("cglmp:")) return cglmp(*d);
  if (auto n = arg("sliwa:")) return sliwa(*n);
  throw ScenarioError("unknown expression: " + std::string(name));
}

// ---------------------------------------------------------------------------

ExactMatrix relabeling_matrix(const Scenario& sc, const std::vector<int>& party_map,
                              const std::vector<std::vector<int>>& setting_map,
                              const std::vector<std::vector<std::vector<int>>>& outcome_map) {
  const auto& gens = sc.generators();
  std::size_t n = gens.size() + 1;
  ExactMatrix phi(n, n);
  phi(0, 0) = Scalar(1);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    int p = letter_party(gens[g]), x = letter_setting(gens[g]), a = letter_outcome(gens[g]);
    int p2 = party_map.at(p), x2 = setting_map.at(p).at(x), a2 = outcome_map.at(p).at(x).at(a);
    if (sc.outcomes(p2, x2) != sc.outcomes(p, x)) throw ScenarioError("relabelling changes the number of outcomes");
    Polynomial img = projector(sc, p2, x2, a2);
    for (const auto& [w, c] : img.terms()) {
      std::size_t col = w.empty() ? 0 : static_cast<std::size_t>(sc.index_of(w[0]) + 1);
      phi(g + 1, col) = c;
    }
  }
  try {
    return inverse(phi);
  } catch (const SingularMatrix&) {
    throw ScenarioError("relabelling is not a bijection");
  }
}

namespace {

struct Relabel {
  std::vector<int> party{0, 1};
  std::vector<std::vector<int>> setting{{0, 1}, {0, 1}};
  std::vector<std::vector<std::vector<int>>> outcome;
  explicit Relabel(int d) {
    std::vector<int> id(d);
    for (int a = 0; a < d; ++a) id[a] = a;
    outcome.assign(2, std::vector<std::vector<int>>(2, id));
  }
  ExactMatrix matrix(const Scenario& sc) const { return relabeling_matrix(sc, party, setting, outcome); }
};

}  // namespace

std::vector<ExactMatrix> cglmp_ambient_generators(int d) {
  Scenario sc = Scenario::uniform(2, 2, d);
  // omega_1: swap outcomes 0 and 1 of A_0.
  Relabel r1(d);
  std::swap(r1.outcome[0][0][0], r1.outcome[0][0][1]);
  // omega_2: cyclic shift a -> a+1 of A_0 (phi sends a -> a-1).
  Relabel r2(d);
  for (int a = 0; a < d; ++a) r2.outcome[0][0][a] = (a + d - 1) % d;
  // omega_3: swap the settings of Alice.
  Relabel r3(d);
  r3.setting[0] = {1, 0};
  // omega_4: swap the parties.
  Relabel r4(d);
  r4.party = {1, 0};
  return {r1.matrix(sc), r2.matrix(sc), r3.matrix(sc), r4.matrix(sc)};
}

ExactMatrix ambient_word(int d, std::string_view word) {
  auto gens = cglmp_ambient_generators(d);
  std::vector<ExactMatrix> invs;
  for (const auto& g : gens) invs.push_back(inverse(g));
  ExactMatrix r = ExactMatrix::identity(gens[0].rows());
  std::istringstream is{std::string(word)};
  std::string tok;
  while (is >> tok) {
    int g = 0, e = 1;
    auto caret = tok.find('^');
    try {
      g = std::stoi(tok.substr(0, caret));
      if (caret != std::string::npos) e = std::stoi(tok.substr(caret + 1));
    } catch (const std::exception&) {
      throw ScenarioError("bad generator token: " + tok);
    }
    if (g < 1 || g > 4) throw ScenarioError("bad generator token: " + tok);
    const auto& m = e < 0 ? invs[g - 1] : gens[g - 1];
    for (int k = 0; k < std::abs(e); ++k) r = r * m;
  }
  return r;
}

std::vector<ExactMatrix> cglmp_symmetry_generators(int d) {
  if (d < 2 || d > 5) throw ScenarioError("symmetry generators are provided for 2 <= d <= 5");
  auto w = cglmp_ambient_generators(d);
  ExactMatrix a = w[1] * w[2] * w[3];
  if (d == 2) return {a, ambient_word(2, "3 4 3")};
  if (d == 3) return {a, ambient_word(3, "1 3 1 4 1 3 1")};
  // Reflection x a, with x: A_{a|x} <-> B_{1-a|1-x}.  Using x a rather than x
  // labels the one-dimensional irreps so that sigma3 and sigma4 match d <= 3.
  Scenario sc = Scenario::uniform(2, 2, d);
  Relabel x(d);
  x.party = {1, 0};
  x.setting = {{1, 0}, {1, 0}};
  for (int p = 0; p < 2; ++p)
    for (int s = 0; s < 2; ++s)
      for (int o = 0; o < d; ++o) x.outcome[p][s][o] = ((1 - o) % d + d) % d;
  return {a, x.matrix(sc) * a};
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
Matrix<T> outer(const std::vector<T>& v) {
  Matrix<T> m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * FieldTraits<T>::conj(v[j]);
  return m;
}

// Local measurement vectors: Alice e^{2 pi i k (a + alpha_x)/d}, Bob
// e^{2 pi i k (-b + beta_y)/d}, alpha = (1/2, 0), beta = (-1/4, 1/4).  The
// phase is expressed as k * num / (4d).
long phase_num(int party, int setting, int outcome) {
  if (party == 0) return setting == 0 ? 4 * outcome + 2 : 4 * outcome;
  return setting == 0 ? -4 * outcome - 1 : -4 * outcome + 1;
}

template <class T>
Realization<T> cglmp_measurements(int d, bool exact) {
  Realization<T> r;
  r.scenario = Scenario::uniform(2, 2, d);
  r.local_dims = {d, d};
  for (Letter l : r.scenario.generators()) {
    long num = phase_num(letter_party(l), letter_setting(l), letter_outcome(l));
    std::vector<T> v(d);
    for (int k = 0; k < d; ++k) {
      if constexpr (std::is_same_v<T, Scalar>) {
        (void)exact;
        v[k] = root_of_unity(4 * d, (k * num % (4 * d) + 4 * d) % (4 * d));
      } else {
        v[k] = std::polar(1.0, 2 * M_PI * static_cast<double>(k * num) / (4.0 * d));
      }
    }
    Matrix<T> m = outer(v);
    if constexpr (std::is_same_v<T, Scalar>) m *= Scalar::rational(1, d);
    else m *= Complex(1.0 / d, 0);
    r.projectors.push_back(std::move(m));
  }
  return r;
}

template <class T>
Matrix<T> monomial_operator(const Realization<T>& r, const Monomial& w) {
  Matrix<T> op = Matrix<T>::identity(1);
  std::size_t k = 0;
  for (int p = 0; p < r.scenario.parties(); ++p) {
    Matrix<T> local = Matrix<T>::identity(r.local_dims[p]);
    for (; k < w.size() && letter_party(w[k]) == p; ++k) {
      int idx = r.scenario.index_of(w[k]);
      if (idx < 0) throw ScenarioError("monomial outside the realization scenario");
      local = local * r.projectors[idx];
    }
    op = kron(op, local);
  }
  return op;
}

template <class T>
Matrix<T> polynomial_operator(const Realization<T>& r, const Polynomial& poly) {
  std::size_t n = 1;
  for (int d : r.local_dims) n *= d;
  Matrix<T> op(n, n);
  for (const auto& [w, c] : poly.terms()) op += monomial_operator(r, w) * FieldTraits<T>::from_scalar(c);
  return op;
}

template <class T>
std::vector<T> moments_impl(const Realization<T>& r, const std::vector<Polynomial>& polys) {
  using F = FieldTraits<T>;
  std::unordered_map<Monomial, T, MonomialHash> cache;
  std::vector<T> out;
  for (const auto& p : polys) {
    T acc = F::zero();
    for (const auto& [w, c] : p.terms()) {
      auto it = cache.find(w);
      if (it == cache.end()) {
        Matrix<T> op = monomial_operator(r, w);
        T v = F::zero();
        for (std::size_t i = 0; i < op.rows(); ++i) {
          if (F::is_zero(r.state[i], 0)) continue;
          T row = F::zero();
          for (std::size_t j = 0; j < op.cols(); ++j)
            if (!F::is_zero(r.state[j], 0)) row += op(i, j) * r.state[j];
          v += F::conj(r.state[i]) * row;
        }
        it = cache.emplace(w, v / r.norm2).first;
      }
      acc += F::from_scalar(c) * it->second;
    }
    out.push_back(acc);
  }
  return out;
}

}  // namespace

ExactRealization cglmp_optimal_realization(int d) {
  if (d != 2 && d != 3) throw ExactUnsupported("exact mode unsupported: no exact optimal realization for d = " + std::to_string(d));
  auto r = cglmp_measurements<Scalar>(d, true);
  std::vector<Scalar> gamma(d, Scalar(1));
  if (d == 3) gamma[1] = (Scalar::sqrt(11) - Scalar::sqrt(3)) * Scalar::rational(1, 2);
  r.state.assign(d * d, Scalar());
  r.norm2 = Scalar();
  for (int k = 0; k < d; ++k) {
    r.state[k * d + k] = gamma[k];
    r.norm2 += gamma[k] * gamma[k];
  }
  return r;
}

NumericRealization cglmp_numeric_realization(int d) {
  auto r = cglmp_measurements<Complex>(d, false);
  ComplexMatrix bell = polynomial_operator(r, cglmp(d).poly);
  std::size_t n = bell.rows();
  Eigen::MatrixXcd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = bell(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  Eigen::VectorXcd v = es.eigenvectors().col(n - 1);
  // Fix the global phase on the largest entry.
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  v *= std::conj(v(imax)) / std::abs(v(imax));
  r.state.assign(v.data(), v.data() + n);
  r.norm2 = Complex(1, 0);
  return r;
}

NumericRealization to_numeric(const ExactRealization& r) {
  NumericRealization n;
  n.scenario = r.scenario;
  n.local_dims = r.local_dims;
  for (const auto& p : r.projectors) n.projectors.push_back(convert<Complex>(p));
  for (const auto& s : r.state) n.state.push_back(s.to_complex());
  n.norm2 = r.norm2.to_complex();
  return n;
}

std::vector<Scalar> realization_moments(const ExactRealization& r, const std::vector<Polynomial>& polys) {
  return moments_impl(r, polys);
}

std::vector<Complex> realization_moments(const NumericRealization& r, const std::vector<Polynomial>& polys) {
  return moments_impl(r, polys);
}

}  // namespace symsdp
