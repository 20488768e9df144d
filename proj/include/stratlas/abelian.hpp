#pragma once

#include <string>
#include <vector>

#include "stratlas/rational.hpp"

// Finitely generated abelian quotients Z^m / L, presented by a relation
// matrix whose columns span L, and put into normal form by a Smith
// reduction. Used for the fundamental group of a root datum and its
// Frobenius coinvariants.

namespace strat {

struct SmithDecomposition {
  IMat u;  // unimodular, rows record the row operations
  IMat v;  // unimodular
  IMat d;  // u * a * v, diagonal with nonnegative divisibility chain
};

// a may be any integer matrix (including 0 columns).
SmithDecomposition smith_normal_form(const IMat& a);

class AbelianQuotient {
 public:
  AbelianQuotient() = default;
  // Z^ambient_rank modulo the span of relation_columns.
  AbelianQuotient(int ambient_rank, const std::vector<IVec>& relation_columns);

  int ambient_rank() const { return m_; }
  int torsion_count() const { return static_cast<int>(torsion_.size()); }
  int free_rank() const { return free_rank_; }
  const std::vector<i64>& torsion() const { return torsion_; }
  bool is_trivial() const { return torsion_.empty() && free_rank_ == 0; }

  // Canonical coordinates: torsion coordinates (reduced into [0, d)) first,
  // then free coordinates.
  IVec project(const IVec& lambda) const;

  IVec zero() const { return IVec(torsion_.size() + free_rank_, 0); }
  IVec add(const IVec& a, const IVec& b) const;
  IVec neg(const IVec& a) const;
  bool is_zero(const IVec& a) const;

  std::string describe() const;  // e.g. "Z", "Z/2", "Z x Z/2", "0"

  bool operator==(const AbelianQuotient& o) const {
    return m_ == o.m_ && torsion_ == o.torsion_ && free_rank_ == o.free_rank_;
  }

 private:
  int m_ = 0;
  std::vector<IVec> proj_rows_;  // torsion rows of U, then free rows
  std::vector<i64> torsion_;     // invariant factors ≥ 2
  int free_rank_ = 0;
};

}  // namespace strat
