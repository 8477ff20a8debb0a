#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace symsdp {

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Element of Q(i, sqrt(d1), ..., sqrt(dk)).  Stored as a sparse sum of
// q * sqrt(m) * i^e with m squarefree; the tower is implicit and grows as
// radicals are multiplied together.
class Scalar {
 public:
  struct Term {
    std::uint64_t radicand = 1;
    bool imag = false;
    mpq_class coeff;
  };

  Scalar() = default;
  Scalar(long v);  // NOLINT(google-explicit-constructor)
  Scalar(const mpq_class& q);  // NOLINT(google-explicit-constructor)

  static Scalar rational(long p, long q = 1);
  // sqrt of a rational; negative arguments give an imaginary result.
  static Scalar sqrt(const mpq_class& q);
  static Scalar i();
  static Scalar parse(std::string_view text);

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  bool is_real() const;
  bool is_one() const;
  const std::vector<Term>& terms() const { return terms_; }
  mpq_class rational_part() const;

  Scalar conj() const;
  Scalar real_part() const;
  Scalar imag_part() const;  // returned as a real scalar
  Scalar inverse() const;
  // Galois conjugate flipping sqrt(p) for a prime p.
  Scalar flip_prime(std::uint64_t p) const;

  // Exact sign of a real element.
  int sign() const;

  std::complex<double> to_complex() const;
  double to_double() const { return to_complex().real(); }
  std::pair<mpf_class, mpf_class> to_float(unsigned precision_bits) const;

  std::string str() const;
  std::size_t hash() const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o) { return *this *= o.inverse(); }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  // Ordering is only defined for real scalars.
  friend bool operator<(const Scalar& a, const Scalar& b) { return (a - b).sign() < 0; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return (a - b).sign() > 0; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return (a - b).sign() <= 0; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return (a - b).sign() >= 0; }

 private:
  void add_term(std::uint64_t radicand, bool imag, const mpq_class& c);
  void normalize();
  std::vector<Term> terms_;  // sorted by (radicand, imag), no zero coefficients
};

std::ostream& operator<<(std::ostream& os, const Scalar& s);

struct ScalarHash {
  std::size_t operator()(const Scalar& s) const { return s.hash(); }
};

// Squarefree part s and cofactor f with n = f^2 s.
std::pair<std::uint64_t, std::uint64_t> squarefree_split(std::uint64_t n);
std::vector<std::uint64_t> prime_factors(std::uint64_t n);

// exp(2 pi i k / n) exactly; only n dividing 24 is supported.
Scalar root_of_unity(long n, long k);
bool root_of_unity_is_exact(long n);
Scalar cos_2pi(long k, long n);
Scalar sin_2pi(long k, long n);

// A multi-quadratic tower Q(i?, sqrt(d1), ..., sqrt(dk)).  Radicands are
// kept multiplicatively independent modulo squares.
class FieldTower {
 public:
  FieldTower() = default;
  FieldTower(std::vector<std::uint64_t> radicands, bool imaginary);

  static FieldTower of(const Scalar& s);
  template <class It>
  static FieldTower of_range(It first, It last) {
    FieldTower t;
    for (; first != last; ++first) t = t.join(of(*first));
    return t;
  }

  const std::vector<std::uint64_t>& radicands() const { return radicands_; }
  bool imaginary() const { return imaginary_; }
  // Squarefree radicands of the Q-basis: 1 followed by all subset products.
  std::vector<std::uint64_t> basis() const;
  std::size_t degree() const;
  bool contains(const Scalar& s) const;
  FieldTower join(const FieldTower& o) const;
  std::string str() const;
  bool operator==(const FieldTower& o) const;

 private:
  bool in_span(std::uint64_t radicand) const;
  std::vector<std::uint64_t> radicands_;
  bool imaginary_ = false;
};

struct RecognizeOptions {
  long denom_bound = 12;
  double tolerance = 1e-7;
  long height = 16;  // bound on |coordinate| of irrational basis elements
  double max_search = 5e7;
};

// Rational with denominator <= bound closest to x (continued fractions).
mpq_class best_rational(double x, long bound);
mpq_class best_rational(const mpq_class& x, long bound);

// Finds the unique element of the tower with bounded denominators within
// tolerance of x.  Returns nullopt when nothing fits and throws FieldError
// when two distinct candidates fit.
std::optional<Scalar> recognize(std::complex<double> x, const FieldTower& tower,
                                const RecognizeOptions& opts);
std::optional<Scalar> recognize(std::complex<double> x, const FieldTower& tower,
                                long denom_bound);

}  // namespace symsdp

template <>
struct std::hash<symsdp::Scalar> {
  std::size_t operator()(const symsdp::Scalar& s) const { return s.hash(); }
};
