#include "symsdp/polynomial.hpp"

#include <algorithm>
#include <sstream>

#include "symsdp/detail/expr_parser.hpp"

namespace symsdp {

std::string letter_str(Letter l) {
  std::string s(1, static_cast<char>('A' + letter_party(l)));
  return s + std::to_string(letter_outcome(l)) + "|" + std::to_string(letter_setting(l));
}

std::uint32_t party_mask(const Monomial& m) {
  std::uint32_t mask = 0;
  for (auto l : m) mask |= 1u << letter_party(l);
  return mask;
}

bool monomial_less(const Monomial& a, const Monomial& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  auto ma = party_mask(a), mb = party_mask(b);
  if (ma != mb) return ma < mb;
  return a < b;
}

std::string monomial_str(const Monomial& m) {
  if (m.empty()) return "1";
  std::string s;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k) s += " ";
    s += letter_str(m[k]);
  }
  return s;
}

std::optional<Monomial> normal_form(const Monomial& w) {
  Monomial sorted = w;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](Letter a, Letter b) { return letter_party(a) < letter_party(b); });
  Monomial out;
  out.reserve(sorted.size());
  for (auto l : sorted) {
    if (!out.empty()) {
      Letter t = out.back();
      if (letter_party(t) == letter_party(l) && letter_setting(t) == letter_setting(l)) {
        if (letter_outcome(t) == letter_outcome(l)) continue;
        return std::nullopt;
      }
    }
    out.push_back(l);
  }
  return out;
}

Monomial adjoint_word(const Monomial& w) {
  Monomial r(w.rbegin(), w.rend());
  auto n = normal_form(r);
  if (!n) throw std::logic_error("adjoint of a nonzero word vanished");
  return *n;
}

std::optional<Monomial> rewrite_randomized(Monomial w, std::mt19937_64& rng) {
  for (;;) {
    // Collect every position where a rule applies.
    std::vector<std::size_t> sites;
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
      Letter a = w[k], b = w[k + 1];
      if (letter_party(a) > letter_party(b)) sites.push_back(k);
      else if (letter_party(a) == letter_party(b) && letter_setting(a) == letter_setting(b)) sites.push_back(k);
    }
    if (sites.empty()) return w;
    std::size_t k = sites[std::uniform_int_distribution<std::size_t>(0, sites.size() - 1)(rng)];
    Letter a = w[k], b = w[k + 1];
    if (letter_party(a) > letter_party(b)) {
      std::swap(w[k], w[k + 1]);
    } else if (letter_outcome(a) == letter_outcome(b)) {
      w.erase(w.begin() + static_cast<long>(k) + 1);
    } else {
      return std::nullopt;
    }
  }
}

// ---------------------------------------------------------------------------

Scenario::Scenario(std::vector<std::vector<int>> outcomes) : outcomes_(std::move(outcomes)) {
  if (outcomes_.empty()) throw ScenarioError("scenario needs at least one party");
  if (outcomes_.size() > 26) throw ScenarioError("at most 26 parties are supported");
  offset_.resize(outcomes_.size());
  for (std::size_t p = 0; p < outcomes_.size(); ++p) {
    if (outcomes_[p].empty()) throw ScenarioError("party without settings");
    for (std::size_t x = 0; x < outcomes_[p].size(); ++x) {
      if (outcomes_[p][x] < 2) throw ScenarioError("every setting needs at least two outcomes");
      offset_[p].push_back(static_cast<int>(gens_.size()));
      for (int a = 0; a + 1 < outcomes_[p][x]; ++a)
        gens_.push_back(make_letter(static_cast<int>(p), static_cast<int>(x), a));
    }
  }
}

Scenario Scenario::uniform(int parties, int settings, int outcomes) {
  return Scenario(std::vector<std::vector<int>>(parties, std::vector<int>(settings, outcomes)));
}

int Scenario::index_of(Letter l) const {
  int p = letter_party(l), x = letter_setting(l), a = letter_outcome(l);
  if (p >= parties() || x >= settings(p) || a + 1 >= outcomes(p, x)) return -1;
  return offset_[p][x] + a;
}

void Scenario::validate(Letter l) const {
  if (index_of(l) < 0) throw ScenarioError("generator " + letter_str(l) + " is not part of scenario " + str());
}

std::string Scenario::str() const {
  std::ostringstream os;
  for (std::size_t p = 0; p < outcomes_.size(); ++p) {
    if (p) os << " | ";
    for (std::size_t x = 0; x < outcomes_[p].size(); ++x) {
      if (x) os << " ";
      os << outcomes_[p][x];
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

Polynomial::Polynomial(const Scalar& c) {
  if (!c.is_zero()) terms_.emplace(Monomial{}, c);
}

Polynomial Polynomial::word(const Monomial& w, const Scalar& c) {
  Polynomial p;
  p.add_word(w, c);
  return p;
}

void Polynomial::add_normal(const Monomial& w, const Scalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Polynomial::add_word(const Monomial& w, const Scalar& c) {
  auto n = normal_form(w);
  if (n) add_normal(*n, c);
}

std::size_t Polynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [w, c] : terms_) d = std::max(d, w.size());
  return d;
}

std::vector<std::pair<Monomial, Scalar>> Polynomial::sorted_terms() const {
  std::vector<std::pair<Monomial, Scalar>> v(terms_.begin(), terms_.end());
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return monomial_less(a.first, b.first); });
  return v;
}

Scalar Polynomial::coefficient(const Monomial& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Scalar() : it->second;
}

std::optional<Scalar> Polynomial::as_scalar() const {
  if (terms_.empty()) return Scalar();
  if (terms_.size() == 1 && terms_.begin()->first.empty()) return terms_.begin()->second;
  return std::nullopt;
}

Polynomial Polynomial::adjoint() const {
  Polynomial r;
  for (const auto& [w, c] : terms_) r.add_normal(adjoint_word(w), c.conj());
  return r;
}

void Polynomial::validate(const Scenario& sc) const {
  for (const auto& [w, c] : terms_)
    for (auto l : w) sc.validate(l);
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : sorted_terms()) {
    // Single-term coefficients carry their own sign; compound ones are
    // parenthesised after a plus.
    bool single = c.terms().size() == 1;
    bool neg = single && c.terms()[0].coeff < 0;
    Scalar mag = neg ? -c : c;
    if (first) os << (neg ? "-" : "");
    else os << (neg ? " - " : " + ");
    first = false;
    if (w.empty()) {
      if (!single) os << "(" << mag.str() << ")";
      else os << mag.str();
      continue;
    }
    if (!mag.is_one()) {
      if (mag.is_rational()) os << mag.str() << " ";
      else os << "(" << mag.str() << ") ";
    }
    os << monomial_str(w);
  }
  return os.str();
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [w, c] : r.terms_) c = -c;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [w, c] : o.terms_) add_normal(w, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [w, c] : o.terms_) add_normal(w, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Scalar& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial r;
  Monomial buf;
  for (const auto& [wa, ca] : a.terms_) {
    for (const auto& [wb, cb] : b.terms_) {
      buf.assign(wa.begin(), wa.end());
      buf.insert(buf.end(), wb.begin(), wb.end());
      auto n = normal_form(buf);
      if (n) r.add_normal(*n, ca * cb);
    }
  }
  return r;
}

std::pair<Polynomial, Polynomial> hermitian_split(const Polynomial& p) {
  Polynomial a = p.adjoint();
  return {p + a, (p - a) * Scalar::i()};
}

namespace {

struct PolyOps {
  static Polynomial from_scalar(const Scalar& s) { return Polynomial(s); }
  static std::optional<Scalar> as_scalar(const Polynomial& p) { return p.as_scalar(); }
  static Polynomial generator(const detail::GeneratorToken& g) {
    return Polynomial::letter(make_letter(g.party, g.setting, g.outcome));
  }
};

}  // namespace

Polynomial Polynomial::parse(std::string_view text) {
  try {
    return detail::ExprParser<Polynomial, PolyOps>(text).parse();
  } catch (const detail::ParseError& e) {
    throw ScenarioError(std::string("cannot parse polynomial: ") + e.what());
  }
}

Polynomial Polynomial::parse(std::string_view text, const Scenario& sc) {
  Polynomial p = parse(text);
  p.validate(sc);
  return p;
}

}  // namespace symsdp
