#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stratlas/admissible.hpp"

// Newton and Kottwitz invariants on the extended affine Weyl group,
// sigma-straight elements and their classes, the finite poset B(G,{μ}) of
// neutral acceptable classes, and the dimension bookkeeping attached to it.

namespace strat {

struct NewtonPair {
  QVec nu;    // dominant rational cocharacter
  IVec kappa; // class in the sigma-coinvariants of pi1

  bool operator==(const NewtonPair& o) const {
    return nu == o.nu && kappa == o.kappa;
  }
  std::string to_string() const;
};

// Dominant average of the translation parts of the sigma-twisted powers.
QVec newton_point(AffineWeyl& w, const AffineWeyl::Sigma& s, AffineWeyl::Elt e);
IVec kottwitz_point(AffineWeyl& w, const AffineWeyl::Sigma& s, AffineWeyl::Elt e);
NewtonPair newton_pair(AffineWeyl& w, const AffineWeyl::Sigma& s, AffineWeyl::Elt e);

// l(w) = <nu(w), 2 rho>, decided in integers.
bool is_straight(AffineWeyl& w, const AffineWeyl::Sigma& s, AffineWeyl::Elt e);

struct StraightClass {
  NewtonPair invariants;
  std::vector<AffineWeyl::Elt> members;  // straight elements found, sorted
  AffineWeyl::Elt rep;                   // minimal member
};

// Group the straight elements of a set by (nu, kappa). With verify = true,
// the grouping is checked against the orbit partition under the
// length-preserving elementary conjugations w ↦ s·w·σ(s).
std::vector<StraightClass> straight_classes_in(
    AffineWeyl& w, const AffineWeyl::Sigma& s,
    const std::vector<AffineWeyl::Elt>& elems, bool verify = false);

bool leq_newton(const RootDatum& rd, const NewtonPair& a, const NewtonPair& b);

struct BofG {
  std::vector<StraightClass> classes;  // sorted: basic first
  std::vector<std::pair<int, int>> leq_pairs;  // all comparable pairs (a <= b)
  int minimum = -1;  // index of the basic class
  int maximum = -1;
};

// B(G,{μ}) as the set of straight-class invariants inside Adm({μ}).
// verify = true additionally checks kappa = mu_natural and nu <= mu_bar for
// every class and, for the GL/GSp built-ins, compares the Newton points
// against the independent slope-polygon enumeration.
BofG b_of_g_mu(AffineWeyl& w, const AffineWeyl::Sigma& s, const AdmSet& adm,
               bool verify = false);

// Number of simple isocrystal summands dropped from the rank; GL(n) only.
std::optional<i64> defect(const RootDatum& rd, const QVec& nu);

struct DimPrediction {
  Rat value;
  bool integral;
};

// <mu + nu, rho> - def/2 (needs the defect, so GL(n) only).
std::optional<DimPrediction> newton_dim_prediction(const RootDatum& rd,
                                                   const CocharClass& mu,
                                                   const NewtonPair& b);
// <nu, 2 rho>: the predicted dimension of a central leaf.
Rat leaf_dim_prediction(const RootDatum& rd, const NewtonPair& b);

// Independent oracle: dominant rational vectors with integral slope-polygon
// breakpoints lying under mu. Supports the GL and GSp built-ins; the result
// is sorted lexicographically.
std::vector<QVec> polygon_oracle(const RootDatum& rd, const IVec& mu);

}  // namespace strat
