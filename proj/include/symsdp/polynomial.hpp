#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "symsdp/scalar.hpp"

namespace symsdp {

// A projector A_{a|x} of party p, packed as party:8 | setting:12 | outcome:12.
using Letter = std::uint32_t;

constexpr Letter make_letter(int party, int setting, int outcome) {
  return (static_cast<Letter>(party) << 24) | (static_cast<Letter>(setting) << 12) | static_cast<Letter>(outcome);
}
constexpr int letter_party(Letter l) { return static_cast<int>(l >> 24); }
constexpr int letter_setting(Letter l) { return static_cast<int>((l >> 12) & 0xfff); }
constexpr int letter_outcome(Letter l) { return static_cast<int>(l & 0xfff); }
std::string letter_str(Letter l);

using Monomial = std::vector<Letter>;

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const {
    std::size_t h = m.size();
    for (auto l : m) h ^= l + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
  }
};

// Bitmask of the parties occurring in a word.
std::uint32_t party_mask(const Monomial& m);
// Canonical order: degree, then set of parties involved, then
// lexicographic on (party, setting, outcome).
bool monomial_less(const Monomial& a, const Monomial& b);
std::string monomial_str(const Monomial& m);

// Normal form in the Bell quotient: parties sorted (stable), then
// A_{a|x} A_{a'|x} -> delta_{aa'} A_{a|x}.  nullopt means the word is zero.
std::optional<Monomial> normal_form(const Monomial& w);
// Reverse of a normal word, brought back to normal form.
Monomial adjoint_word(const Monomial& w);
// Applies single rewriting rules at random positions until none applies.
std::optional<Monomial> rewrite_randomized(Monomial w, std::mt19937_64& rng);

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Scenario {
 public:
  Scenario() = default;
  // outcomes[p][x] = number of outcomes of setting x of party p.
  explicit Scenario(std::vector<std::vector<int>> outcomes);
  static Scenario uniform(int parties, int settings, int outcomes);

  int parties() const { return static_cast<int>(outcomes_.size()); }
  int settings(int party) const { return static_cast<int>(outcomes_.at(party).size()); }
  int outcomes(int party, int setting) const { return outcomes_.at(party).at(setting); }
  const std::vector<std::vector<int>>& shape() const { return outcomes_; }

  // Independent projectors in canonical order: party, setting, outcome < d-1.
  const std::vector<Letter>& generators() const { return gens_; }
  std::size_t num_generators() const { return gens_.size(); }
  int index_of(Letter l) const;  // -1 when not a generator
  void validate(Letter l) const;
  std::string str() const;
  bool operator==(const Scenario& o) const { return outcomes_ == o.outcomes_; }

 private:
  std::vector<std::vector<int>> outcomes_;
  std::vector<Letter> gens_;
  std::vector<std::vector<int>> offset_;
};

class Polynomial {
 public:
  using TermMap = std::unordered_map<Monomial, Scalar, MonomialHash>;

  Polynomial() = default;
  Polynomial(const Scalar& c);  // NOLINT(google-explicit-constructor)
  Polynomial(long c) : Polynomial(Scalar(c)) {}  // NOLINT(google-explicit-constructor)
  static Polynomial word(const Monomial& w, const Scalar& c = Scalar(1));
  static Polynomial letter(Letter l) { return word({l}); }
  static Polynomial parse(std::string_view text);
  static Polynomial parse(std::string_view text, const Scenario& sc);

  // Adds c times a word that is already in normal form.
  void add_normal(const Monomial& w, const Scalar& c);
  void add_word(const Monomial& w, const Scalar& c);

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  std::size_t degree() const;
  const TermMap& terms() const { return terms_; }
  std::vector<std::pair<Monomial, Scalar>> sorted_terms() const;
  Scalar coefficient(const Monomial& w) const;
  Scalar constant_term() const { return coefficient({}); }
  std::optional<Scalar> as_scalar() const;

  Polynomial adjoint() const;
  bool is_hermitian() const { return adjoint() == *this; }
  void validate(const Scenario& sc) const;

  std::string str() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Scalar& s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Scalar& s) { return a *= s; }
  friend Polynomial operator*(const Scalar& s, Polynomial a) { return a *= s; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  TermMap terms_;
};

// (p + p*, i (p - p*)); both parts are self-adjoint.
std::pair<Polynomial, Polynomial> hermitian_split(const Polynomial& p);

}  // namespace symsdp
