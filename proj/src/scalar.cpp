#include "symsdp/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>

#include "symsdp/detail/expr_parser.hpp"

namespace symsdp {

namespace {

bool term_less(const Scalar::Term& a, const Scalar::Term& b) {
  if (a.radicand != b.radicand) return a.radicand < b.radicand;
  return a.imag < b.imag;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 r = static_cast<unsigned __int128>(a) * b;
  if (r >> 64) throw FieldError("radicand overflow");
  return static_cast<std::uint64_t>(r);
}

std::uint64_t largest_prime(const Scalar& s) {
  std::uint64_t best = 1;
  for (const auto& t : s.terms()) {
    if (t.radicand == 1) continue;
    auto ps = prime_factors(t.radicand);
    best = std::max(best, ps.back());
  }
  return best;
}

// Splits s = u + sqrt(p) v where u and v do not involve sqrt(p).
void split_prime(const Scalar& s, std::uint64_t p, Scalar& u, Scalar& v) {
  u = Scalar();
  v = Scalar();
  for (const auto& t : s.terms()) {
    Scalar piece(t.coeff);
    if (t.imag) piece *= Scalar::i();
    if (t.radicand % p == 0) {
      if (t.radicand / p != 1) piece *= Scalar::sqrt(mpq_class(static_cast<unsigned long>(t.radicand / p)));
      v += piece;
    } else {
      if (t.radicand != 1) piece *= Scalar::sqrt(mpq_class(static_cast<unsigned long>(t.radicand)));
      u += piece;
    }
  }
}

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t mpz_hash(const mpz_class& z) {
  std::size_t h = static_cast<std::size_t>(mpz_size(z.get_mpz_t()));
  if (mpz_size(z.get_mpz_t()) > 0) h = mix(h, mpz_getlimbn(z.get_mpz_t(), 0));
  return mix(h, static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 1));
}

void append_rational(std::ostringstream& os, const mpq_class& q) { os << q.get_str(); }

struct ScalarOps {
  static Scalar from_scalar(const Scalar& s) { return s; }
  static std::optional<Scalar> as_scalar(const Scalar& s) { return s; }
  static Scalar generator(const detail::GeneratorToken&) {
    throw detail::ParseError("generators are not allowed in a scalar", 0);
  }
};

}  // namespace

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::pair<std::uint64_t, std::uint64_t> squarefree_split(std::uint64_t n) {
  if (n == 0) throw FieldError("squarefree_split of zero");
  std::uint64_t s = 1, f = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int k = 0; k < e / 2; ++k) f *= p;
    if (e % 2) s *= p;
  }
  s *= n;
  return {s, f};
}

Scalar::Scalar(long v) {
  if (v != 0) terms_.push_back({1, false, mpq_class(v)});
}

Scalar::Scalar(const mpq_class& q) {
  if (q == 0) return;
  mpq_class c = q;
  c.canonicalize();
  terms_.push_back({1, false, std::move(c)});
}

Scalar Scalar::rational(long p, long q) {
  if (q == 0) throw FieldError("zero denominator");
  mpq_class r(p, q);
  r.canonicalize();
  return Scalar(r);
}

Scalar Scalar::sqrt(const mpq_class& q) {
  if (q == 0) return Scalar();
  bool neg = q < 0;
  mpz_class num = abs(q.get_num());
  mpz_class den = q.get_den();
  // sqrt(n/d) = sqrt(n d) / d
  mpz_class prod = num * den;
  if (!mpz_fits_ulong_p(prod.get_mpz_t())) throw FieldError("radicand too large");
  auto [s, f] = squarefree_split(prod.get_ui());
  Scalar r;
  mpq_class c(mpz_class(static_cast<unsigned long>(f)), den);
  c.canonicalize();
  r.terms_.push_back({s, neg, c});
  return r;
}

Scalar Scalar::i() {
  Scalar r;
  r.terms_.push_back({1, true, mpq_class(1)});
  return r;
}

Scalar Scalar::parse(std::string_view text) {
  try {
    return detail::ExprParser<Scalar, ScalarOps>(text).parse();
  } catch (const detail::ParseError& e) {
    throw FieldError(std::string("cannot parse scalar '") + std::string(text) + "': " + e.what());
  }
}

bool Scalar::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].radicand == 1 && !terms_[0].imag);
}

bool Scalar::is_real() const {
  return std::none_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.imag; });
}

bool Scalar::is_one() const { return is_rational() && !terms_.empty() && terms_[0].coeff == 1; }

mpq_class Scalar::rational_part() const {
  if (!terms_.empty() && terms_[0].radicand == 1 && !terms_[0].imag) return terms_[0].coeff;
  return mpq_class(0);
}

void Scalar::add_term(std::uint64_t radicand, bool imag, const mpq_class& c) {
  if (c == 0) return;
  Term probe{radicand, imag, mpq_class()};
  auto it = std::lower_bound(terms_.begin(), terms_.end(), probe, term_less);
  if (it != terms_.end() && it->radicand == radicand && it->imag == imag) {
    it->coeff += c;
    if (it->coeff == 0) terms_.erase(it);
  } else {
    terms_.insert(it, Term{radicand, imag, c});
  }
}

void Scalar::normalize() {
  std::sort(terms_.begin(), terms_.end(), term_less);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().radicand == t.radicand && out.back().imag == t.imag) {
      out.back().coeff += t.coeff;
    } else {
      out.push_back(std::move(t));
    }
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.coeff == 0; }), out.end());
  terms_ = std::move(out);
}

Scalar Scalar::conj() const {
  Scalar r = *this;
  for (auto& t : r.terms_)
    if (t.imag) t.coeff = -t.coeff;
  return r;
}

Scalar Scalar::real_part() const {
  Scalar r;
  for (const auto& t : terms_)
    if (!t.imag) r.terms_.push_back(t);
  return r;
}

Scalar Scalar::imag_part() const {
  Scalar r;
  for (const auto& t : terms_)
    if (t.imag) r.terms_.push_back({t.radicand, false, t.coeff});
  r.normalize();
  return r;
}

Scalar Scalar::flip_prime(std::uint64_t p) const {
  Scalar r = *this;
  for (auto& t : r.terms_)
    if (t.radicand % p == 0) t.coeff = -t.coeff;
  return r;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw FieldError("division by zero");
  if (is_rational()) return Scalar(mpq_class(1) / terms_[0].coeff);
  if (!is_real()) {
    Scalar c = conj();
    Scalar n = *this * c;
    return c * n.inverse();
  }
  std::uint64_t p = largest_prime(*this);
  Scalar f = flip_prime(p);
  Scalar n = *this * f;
  return f * n.inverse();
}

int Scalar::sign() const {
  if (!is_real()) throw FieldError("sign of a non-real scalar " + str());
  if (is_zero()) return 0;
  if (is_rational()) return sgn(terms_[0].coeff);
  std::uint64_t p = largest_prime(*this);
  Scalar u, v;
  split_prime(*this, p, u, v);
  int su = u.sign(), sv = v.sign();
  if (sv == 0) return su;
  if (su == 0 || su == sv) return sv;
  Scalar t = u * u - Scalar(static_cast<long>(p)) * v * v;
  return su * t.sign();
}

std::complex<double> Scalar::to_complex() const {
  double re = 0, im = 0;
  for (const auto& t : terms_) {
    double v = t.coeff.get_d() * std::sqrt(static_cast<double>(t.radicand));
    (t.imag ? im : re) += v;
  }
  return {re, im};
}

std::pair<mpf_class, mpf_class> Scalar::to_float(unsigned precision_bits) const {
  mpf_class re(0, precision_bits), im(0, precision_bits);
  for (const auto& t : terms_) {
    mpf_class r(static_cast<unsigned long>(t.radicand), precision_bits);
    mpf_class s(0, precision_bits);
    mpf_sqrt(s.get_mpf_t(), r.get_mpf_t());
    mpf_class c(t.coeff, precision_bits);
    mpf_class v(0, precision_bits);
    v = c * s;
    if (t.imag) im += v;
    else re += v;
  }
  return {re, im};
}

std::string Scalar::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    mpq_class c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) os << "-";
    } else {
      os << (neg ? " - " : " + ");
    }
    first = false;
    bool bare = t.radicand == 1 && !t.imag;
    if (bare) {
      append_rational(os, c);
      continue;
    }
    bool wrote = false;
    if (c != 1) {
      if (c.get_den() != 1) os << "(" << c.get_str() << ")";
      else os << c.get_str();
      wrote = true;
    }
    if (t.radicand != 1) {
      if (wrote) os << "*";
      os << "sqrt(" << t.radicand << ")";
      wrote = true;
    }
    if (t.imag) {
      if (wrote) os << "*";
      os << "i";
    }
  }
  return os.str();
}

std::size_t Scalar::hash() const {
  std::size_t h = terms_.size();
  for (const auto& t : terms_) {
    h = mix(h, t.radicand * 2 + (t.imag ? 1 : 0));
    h = mix(h, mpz_hash(t.coeff.get_num()));
    h = mix(h, mpz_hash(t.coeff.get_den()));
  }
  return h;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (o.terms_.empty()) return *this;
  if (terms_.empty()) return *this = o;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  std::size_t a = 0, b = 0;
  while (a < terms_.size() || b < o.terms_.size()) {
    if (b == o.terms_.size() || (a < terms_.size() && term_less(terms_[a], o.terms_[b]))) {
      out.push_back(std::move(terms_[a++]));
    } else if (a == terms_.size() || term_less(o.terms_[b], terms_[a])) {
      out.push_back(o.terms_[b++]);
    } else {
      mpq_class c = terms_[a].coeff + o.terms_[b].coeff;
      if (c != 0) out.push_back({terms_[a].radicand, terms_[a].imag, c});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) { return *this = *this * o; }

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar r;
  if (a.terms_.empty() || b.terms_.empty()) return r;
  if (a.is_rational()) {
    r = b;
    for (auto& t : r.terms_) t.coeff *= a.terms_[0].coeff;
    return r;
  }
  if (b.is_rational()) {
    r = a;
    for (auto& t : r.terms_) t.coeff *= b.terms_[0].coeff;
    return r;
  }
  r.terms_.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      std::uint64_t g = std::gcd(x.radicand, y.radicand);
      std::uint64_t m = checked_mul(x.radicand / g, y.radicand / g);
      mpq_class c = x.coeff * y.coeff;
      if (g != 1) c *= static_cast<unsigned long>(g);
      if (x.imag && y.imag) c = -c;
      r.terms_.push_back({m, x.imag != y.imag, c});
    }
  }
  r.normalize();
  return r;
}

bool operator==(const Scalar& a, const Scalar& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    const auto& x = a.terms_[k];
    const auto& y = b.terms_[k];
    if (x.radicand != y.radicand || x.imag != y.imag || x.coeff != y.coeff) return false;
  }
  return true;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.str(); }

namespace {

// cos(15 j degrees) for j = 0..6.
Scalar cos15_base(long j) {
  switch (j) {
    case 0: return Scalar(1);
    case 1: return (Scalar::sqrt(6) + Scalar::sqrt(2)) * Scalar::rational(1, 4);
    case 2: return Scalar::sqrt(3) * Scalar::rational(1, 2);
    case 3: return Scalar::sqrt(2) * Scalar::rational(1, 2);
    case 4: return Scalar::rational(1, 2);
    case 5: return (Scalar::sqrt(6) - Scalar::sqrt(2)) * Scalar::rational(1, 4);
    default: return Scalar();
  }
}

Scalar cos15(long j) {
  j = ((j % 24) + 24) % 24;
  if (j > 12) j = 24 - j;
  if (j > 6) return -cos15_base(12 - j);
  return cos15_base(j);
}

long fifteen_multiple(long k, long n) {
  if (n <= 0) throw FieldError("root of unity order must be positive");
  if ((24 * k) % n != 0)
    throw FieldError("cos/sin(2 pi " + std::to_string(k) + "/" + std::to_string(n) +
                     ") lies outside the supported quadratic towers");
  return 24 * k / n;
}

}  // namespace

bool root_of_unity_is_exact(long n) { return n > 0 && 24 % n == 0; }

Scalar cos_2pi(long k, long n) { return cos15(fifteen_multiple(k, n)); }

Scalar sin_2pi(long k, long n) { return cos15(6 - fifteen_multiple(k, n)); }

Scalar root_of_unity(long n, long k) { return cos_2pi(k, n) + sin_2pi(k, n) * Scalar::i(); }

// ---------------------------------------------------------------------------

namespace {

using PrimeSet = std::vector<std::uint64_t>;

PrimeSet xor_sets(const PrimeSet& a, const PrimeSet& b) {
  PrimeSet r;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

std::uint64_t product(const PrimeSet& s) {
  std::uint64_t r = 1;
  for (auto p : s) r = checked_mul(r, p);
  return r;
}

// Reduces `v` against an echelon basis keyed by largest prime.
PrimeSet reduce(PrimeSet v, const std::vector<PrimeSet>& echelon) {
  for (;;) {
    if (v.empty()) return v;
    std::uint64_t piv = v.back();
    auto it = std::find_if(echelon.begin(), echelon.end(), [&](const PrimeSet& e) { return e.back() == piv; });
    if (it == echelon.end()) return v;
    v = xor_sets(v, *it);
  }
}

}  // namespace

FieldTower::FieldTower(std::vector<std::uint64_t> radicands, bool imaginary) : imaginary_(imaginary) {
  std::vector<PrimeSet> echelon;
  for (auto r : radicands) {
    if (r == 0) throw FieldError("zero radicand");
    auto s = squarefree_split(r).first;
    if (s == 1) continue;
    PrimeSet v = prime_factors(s);
    PrimeSet red = reduce(v, echelon);
    if (red.empty()) continue;
    echelon.push_back(red);
    radicands_.push_back(s);
  }
}

bool FieldTower::in_span(std::uint64_t radicand) const {
  std::vector<PrimeSet> echelon;
  for (auto r : radicands_) {
    PrimeSet red = reduce(prime_factors(r), echelon);
    if (!red.empty()) echelon.push_back(red);
  }
  return reduce(prime_factors(radicand), echelon).empty();
}

FieldTower FieldTower::of(const Scalar& s) {
  std::vector<std::uint64_t> rs;
  bool im = false;
  for (const auto& t : s.terms()) {
    if (t.radicand != 1) rs.push_back(t.radicand);
    im = im || t.imag;
  }
  return FieldTower(rs, im);
}

std::vector<std::uint64_t> FieldTower::basis() const {
  std::vector<std::uint64_t> out;
  std::size_t k = radicands_.size();
  for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
    PrimeSet acc;
    for (std::size_t j = 0; j < k; ++j)
      if (mask >> j & 1) acc = xor_sets(acc, prime_factors(radicands_[j]));
    out.push_back(product(acc));
  }
  return out;
}

std::size_t FieldTower::degree() const { return (std::size_t(1) << radicands_.size()) * (imaginary_ ? 2 : 1); }

bool FieldTower::contains(const Scalar& s) const {
  for (const auto& t : s.terms()) {
    if (t.imag && !imaginary_) return false;
    if (t.radicand != 1 && !in_span(t.radicand)) return false;
  }
  return true;
}

FieldTower FieldTower::join(const FieldTower& o) const {
  auto rs = radicands_;
  rs.insert(rs.end(), o.radicands_.begin(), o.radicands_.end());
  return FieldTower(rs, imaginary_ || o.imaginary_);
}

std::string FieldTower::str() const {
  std::ostringstream os;
  os << "Q(";
  bool first = true;
  if (imaginary_) {
    os << "i";
    first = false;
  }
  for (auto r : radicands_) {
    if (!first) os << ", ";
    os << "sqrt(" << r << ")";
    first = false;
  }
  os << ")";
  return os.str();
}

bool FieldTower::operator==(const FieldTower& o) const {
  if (imaginary_ != o.imaginary_ || radicands_.size() != o.radicands_.size()) return false;
  for (auto r : o.radicands_)
    if (!in_span(r)) return false;
  return true;
}

// ---------------------------------------------------------------------------

mpq_class best_rational(const mpq_class& x, long bound) {
  if (bound < 1) throw FieldError("denominator bound must be positive");
  if (x.get_den() <= bound) return x;
  mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  mpz_class n = x.get_num(), d = x.get_den();
  for (;;) {
    mpz_class a;
    mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    mpz_class q2 = q0 + a * q1;
    if (q2 > bound) break;
    mpz_class p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    mpz_class r = n - a * d;
    n = d;
    d = r;
    if (d == 0) break;
  }
  mpz_class k = (mpz_class(bound) - q0) / q1;
  mpq_class b1(p0 + k * p1, q0 + k * q1);
  mpq_class b2(p1, q1);
  b1.canonicalize();
  b2.canonicalize();
  return abs(b2 - x) <= abs(b1 - x) ? b2 : b1;
}

mpq_class best_rational(double x, long bound) {
  if (!std::isfinite(x)) throw FieldError("cannot rationalize a non-finite value");
  mpq_class q(x);
  return best_rational(q, bound);
}

namespace {

std::vector<Scalar> recognize_real(double x, const FieldTower& tower, const RecognizeOptions& o) {
  auto basis = tower.basis();
  std::vector<std::uint64_t> irr(basis.begin() + 1, basis.end());
  std::vector<double> vals;
  for (auto m : irr) {
    Scalar s = Scalar::sqrt(mpq_class(static_cast<unsigned long>(m)));
    vals.push_back(s.to_float(256).first.get_d());
  }
  std::vector<Scalar> found;
  auto push = [&](const Scalar& c) {
    if (std::find(found.begin(), found.end(), c) == found.end()) found.push_back(c);
  };
  if (irr.empty()) {
    mpq_class q = best_rational(x, o.denom_bound);
    if (std::abs(q.get_d() - x) <= o.tolerance) push(Scalar(q));
    return found;
  }
  double cost = 0;
  for (long q = 1; q <= o.denom_bound; ++q) cost += std::pow(2.0 * o.height * q + 1, static_cast<double>(irr.size()));
  if (cost > o.max_search)
    throw FieldError("recognition search space too large for tower " + tower.str());
  std::vector<long> coef(irr.size());
  for (long q = 1; q <= o.denom_bound; ++q) {
    const long lim = o.height * q;
    const double target = x * q;
    const double tol = o.tolerance * q;
    std::function<void(std::size_t, double)> rec = [&](std::size_t j, double rest) {
      if (j == irr.size()) {
        double r = std::nearbyint(rest);
        if (std::abs(rest - r) <= tol) {
          Scalar c(static_cast<long>(r));
          for (std::size_t t = 0; t < irr.size(); ++t)
            if (coef[t] != 0) c += Scalar(coef[t]) * Scalar::sqrt(mpq_class(static_cast<unsigned long>(irr[t])));
          push(c * Scalar::rational(1, q));
        }
        return;
      }
      for (long c = -lim; c <= lim; ++c) {
        coef[j] = c;
        rec(j + 1, rest - c * vals[j]);
      }
      coef[j] = 0;
    };
    rec(0, target);
  }
  return found;
}

}  // namespace

std::optional<Scalar> recognize(std::complex<double> x, const FieldTower& tower, const RecognizeOptions& opts) {
  auto pick = [&](double v) -> std::optional<Scalar> {
    auto c = recognize_real(v, tower, opts);
    if (c.empty()) return std::nullopt;
    if (c.size() > 1)
      throw FieldError("ambiguous recognition of " + std::to_string(v) + ": " + c[0].str() + " and " + c[1].str());
    return c[0];
  };
  auto re = pick(x.real());
  if (!re) return std::nullopt;
  if (!tower.imaginary()) {
    if (std::abs(x.imag()) > opts.tolerance) return std::nullopt;
    return re;
  }
  auto im = pick(x.imag());
  if (!im) return std::nullopt;
  return *re + *im * Scalar::i();
}

std::optional<Scalar> recognize(std::complex<double> x, const FieldTower& tower, long denom_bound) {
  RecognizeOptions o;
  o.denom_bound = denom_bound;
  return recognize(x, tower, o);
}

}  // namespace symsdp
