#include "symsdp/reptheory.hpp"

#include <cmath>
#include <numbers>

#include "symsdp/scenarios.hpp"

namespace symsdp {

namespace {

template <class T>
Matrix<T> one_by_one(const T& v) {
  Matrix<T> m(1, 1);
  m(0, 0) = v;
  return m;
}

template <class T, class Cos, class Sin>
std::vector<Irrep<T>> dihedral_family(int d, Cos cosf, Sin sinf) {
  if (d < 1) throw DecompositionError("dihedral irreps need d >= 1");
  std::vector<Irrep<T>> out;
  const int signs[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (int i = 0; i < 4; ++i)
    out.push_back({"sigma" + std::to_string(i + 1),
                   {one_by_one<T>(T(signs[i][0])), one_by_one<T>(T(signs[i][1]))}});
  for (int k = 1; k <= 2 * d - 1; ++k) {
    Matrix<T> a(2, 2), x(2, 2);
    T c = cosf(k, 4 * d), s = sinf(k, 4 * d);
    a(0, 0) = c;
    a(0, 1) = -s;
    a(1, 0) = s;
    a(1, 1) = c;
    x(0, 0) = T(1);
    x(1, 1) = T(-1);
    out.push_back({"sigma" + std::to_string(k + 4), {a, x}});
  }
  return out;
}

template <class T, class Root>
std::vector<Irrep<T>> abelian_family(const std::vector<int>& orders, Root root) {
  if (orders.empty()) throw DecompositionError("abelian irreps need at least one factor");
  for (int n : orders)
    if (n < 1) throw DecompositionError("cyclic factor orders must be positive");
  std::vector<int> c(orders.size(), 0);
  std::vector<Irrep<T>> out;
  while (true) {
    Irrep<T> irr;
    irr.label = "chi(";
    for (std::size_t j = 0; j < orders.size(); ++j) {
      irr.label += (j ? "," : "") + std::to_string(c[j]);
      irr.gen_images.push_back(one_by_one<T>(root(orders[j], c[j])));
    }
    irr.label += ")";
    out.push_back(std::move(irr));
    std::size_t j = orders.size();
    while (j > 0 && ++c[j - 1] == orders[j - 1]) c[--j] = 0;
    if (j == 0) break;
  }
  return out;
}

Complex numeric_root(long n, long k) {
  double t = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(t), std::sin(t)};
}

}  // namespace

bool dihedral_irreps_exact(int d) { return d >= 1 && root_of_unity_is_exact(4L * d); }

std::vector<Irrep<Scalar>> dihedral_irreps(int d) {
  if (!dihedral_irreps_exact(d))
    throw ExactUnsupported("exact mode unsupported: cos(2 pi / " + std::to_string(4 * d) + ") is outside the supported quadratic towers");
  return dihedral_family<Scalar>(d, [](long k, long n) { return cos_2pi(k, n); }, [](long k, long n) { return sin_2pi(k, n); });
}

std::vector<Irrep<Complex>> dihedral_irreps_numeric(int d) {
  return dihedral_family<Complex>(
      d, [](long k, long n) { return Complex(numeric_root(n, k).real(), 0); },
      [](long k, long n) { return Complex(numeric_root(n, k).imag(), 0); });
}

bool abelian_irreps_exact(const std::vector<int>& orders) {
  for (int n : orders)
    if (n < 1 || !root_of_unity_is_exact(n)) return false;
  return true;
}

std::vector<Irrep<Scalar>> abelian_irreps(const std::vector<int>& orders) {
  if (!abelian_irreps_exact(orders)) throw ExactUnsupported("exact mode unsupported: roots of unity of these orders are not in the supported towers");
  return abelian_family<Scalar>(orders, [](long n, long k) { return root_of_unity(n, k); });
}

std::vector<Irrep<Complex>> abelian_irreps_numeric(const std::vector<int>& orders) {
  return abelian_family<Complex>(orders, numeric_root);
}

}  // namespace symsdp
