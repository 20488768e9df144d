#pragma once

#include <unordered_set>
#include <vector>

#include "stratlas/affine_weyl.hpp"

// Admissible sets attached to a dominant cocharacter class: the union of
// Bruhat ideals of the Weyl translates t^{xμ}, its parahoric double-coset
// picture, and the index set Adm({μ}) ∩ ᴷW̃ of the finest stratification.

namespace strat {

struct CocharClass {
  IVec mu_dom;      // dominant integral representative
  QVec mu_bar;      // average over the sigma-orbit (dominant)
  IVec mu_pi1;      // class in pi1
  IVec mu_natural;  // class in the sigma-coinvariants of pi1
};

CocharClass make_cochar_class(AffineWeyl& w, const AffineWeyl::Sigma& s,
                              const IVec& mu);

// The unique length-zero element whose pi1 class is that of mu.
AffineWeyl::Elt tau_of_mu(AffineWeyl& w, const CocharClass& mu);

struct AdmSet {
  CocharClass mu;
  std::vector<AffineWeyl::Elt> elements;    // canonically sorted
  std::vector<AffineWeyl::Elt> generators;  // the translations t^{xμ}
  std::unordered_set<AffineWeyl::Elt> index;

  bool contains(AffineWeyl::Elt e) const { return index.count(e) > 0; }
};

AdmSet admissible_set(AffineWeyl& w, const CocharClass& mu);

struct AdmKCoset {
  AffineWeyl::Elt min_rep;      // shortest element of the double coset
  AffineWeyl::Elt max_min_rep;  // longest right-minimal element
};

struct AdmK {
  ParahoricType k;
  std::vector<AdmKCoset> cosets;  // sorted by the canonical form of min_rep
  // W_K · Adm · W_K as a plain element set; only filled on request since it
  // is quadratic in |W_K|
  std::vector<AffineWeyl::Elt> upper;
};

AdmK admissible_K(AffineWeyl& w, const AdmSet& adm, const ParahoricType& k,
                  const AffineWeyl::Sigma& s, bool materialize_upper = false);

// Adm({μ}) ∩ ᴷW̃. With verify = true the same set is recomputed as
// (W_K Adm W_K) ∩ ᴷW̃ through coset minima and the two routes are required
// to agree exactly.
std::vector<AffineWeyl::Elt> ekor_index_set(AffineWeyl& w, const AdmSet& adm,
                                            const ParahoricType& k,
                                            const AffineWeyl::Sigma& s,
                                            bool verify = false);

}  // namespace strat
