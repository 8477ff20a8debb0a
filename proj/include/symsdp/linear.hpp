#pragma once

#include <map>
#include <optional>
#include <vector>

#include "symsdp/scalar.hpp"

namespace symsdp {

using SparseVec = std::map<std::size_t, Scalar>;

inline void axpy(SparseVec& y, const Scalar& a, const SparseVec& x) {
  if (a.is_zero()) return;
  for (const auto& [k, v] : x) {
    auto [it, inserted] = y.try_emplace(k, a * v);
    if (!inserted) {
      it->second += a * v;
      if (it->second.is_zero()) y.erase(it);
    }
  }
}

// Incremental row echelon form over exact scalars.  Each stored row keeps
// its expression in terms of the vectors that were inserted (by label), so
// later vectors can be written as combinations of the accepted ones.
class SparseEchelon {
 public:
  // Returns true when v was independent of the rows so far.
  bool insert(const SparseVec& v, std::size_t label) {
    SparseVec combo{{label, Scalar(1)}};
    SparseVec r = v;
    reduce(r, combo, Scalar(-1));
    if (r.empty()) return false;
    Scalar inv = r.begin()->second.inverse();
    for (auto& [k, x] : r) x *= inv;
    for (auto& [k, x] : combo) x *= inv;
    std::size_t piv = r.begin()->first;
    pivot_row_[piv] = rows_.size();
    rows_.push_back({std::move(r), std::move(combo)});
    return true;
  }

  // Coefficients (by label) expressing v, or nullopt when v is outside the span.
  std::optional<SparseVec> express(const SparseVec& v) const {
    SparseVec r = v, combo;
    reduce(r, combo, Scalar(1));
    if (!r.empty()) return std::nullopt;
    return combo;
  }

  // Residual of v after reduction; empty iff v is in the span.
  SparseVec residual(SparseVec v) const {
    SparseVec combo;
    reduce(v, combo, Scalar(1));
    return v;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  struct Row {
    SparseVec v, combo;
  };
  // v -= c row; combo += sign * c row.combo
  void reduce(SparseVec& v, SparseVec& combo, const Scalar& sign) const {
    auto it = v.begin();
    while (it != v.end()) {
      std::size_t key = it->first;
      auto p = pivot_row_.find(key);
      if (p == pivot_row_.end()) {
        ++it;
        continue;
      }
      const Row& row = rows_[p->second];
      Scalar c = it->second;
      axpy(v, -c, row.v);
      axpy(combo, sign * c, row.combo);
      it = v.upper_bound(key);
    }
  }
  std::vector<Row> rows_;
  std::map<std::size_t, std::size_t> pivot_row_;
};

// Reduced row echelon form of sparse rows; returns nonzero rows sorted by pivot.
inline std::vector<SparseVec> sparse_rref(const std::vector<SparseVec>& rows) {
  std::map<std::size_t, SparseVec> piv;
  for (const auto& r0 : rows) {
    SparseVec r = r0;
    auto it = r.begin();
    while (it != r.end()) {
      auto p = piv.find(it->first);
      if (p == piv.end()) {
        ++it;
        continue;
      }
      std::size_t key = it->first;
      axpy(r, -it->second, p->second);
      it = r.upper_bound(key);
    }
    if (r.empty()) continue;
    Scalar inv = r.begin()->second.inverse();
    for (auto& [k, x] : r) x *= inv;
    piv.emplace(r.begin()->first, std::move(r));
  }
  // Back substitution, last pivot first.
  for (auto it = piv.rbegin(); it != piv.rend(); ++it) {
    for (auto jt = piv.begin(); jt->first != it->first; ++jt) {
      auto e = jt->second.find(it->first);
      if (e != jt->second.end()) axpy(jt->second, -Scalar(e->second), it->second);
    }
  }
  std::vector<SparseVec> out;
  for (auto& [k, r] : piv) out.push_back(std::move(r));
  return out;
}

}  // namespace symsdp
