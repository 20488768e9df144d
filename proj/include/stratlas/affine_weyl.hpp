#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stratlas/root_datum.hpp"

// The extended affine Weyl group X_* ⋊ W0 of a root datum: interned
// elements t^λ·u, Iwahori-Matsumoto length, reduced words over the affine
// simple reflections, Bruhat order, diagram automorphisms, and coset
// combinatorics for parahoric types.

namespace strat {

// Sorted set of affine simple-reflection indices. Index i in [1, n] is the
// finite simple reflection s_i; index 0 is the affine node of the first
// Dynkin component, and components c = 1, 2, ... get indices n + c.
struct ParahoricType {
  std::vector<int> nodes;

  static ParahoricType iwahori() { return {}; }
  bool contains(int j) const {
    for (int x : nodes)
      if (x == j) return true;
    return false;
  }
  std::string describe() const;
};

class AffineWeyl {
 public:
  using Elt = u32;

  explicit AffineWeyl(RootDatum rd);
  const RootDatum& datum() const { return rd_; }

  // --- elements -----------------------------------------------------------
  Elt make(const IVec& translation, u16 finite);
  Elt identity() const { return 0; }
  Elt translation(const IVec& la) { return make(la, 0); }
  Elt from_finite(u16 u) { return make(IVec(rd_.rank(), 0), u); }
  const IVec& trans_part(Elt a) const { return pool_[a].t; }
  u16 finite_part(Elt a) const { return pool_[a].u; }
  i64 length(Elt a) const { return pool_[a].len; }
  const IVec& omega_class(Elt a) const { return pool_[a].omega; }  // in pi1

  Elt multiply(Elt a, Elt b);
  Elt inverse(Elt a);

  // --- affine simple reflections -------------------------------------------
  int n_affine() const { return static_cast<int>(affine_simple_.size()); }
  Elt affine_simple(int j) const { return affine_simple_[j]; }
  Elt simple_left(int j, Elt a) { return multiply(affine_simple_[j], a); }
  Elt simple_right(Elt a, int j) { return multiply(a, affine_simple_[j]); }
  bool has_left_descent(Elt a, int j) {
    return length(simple_left(j, a)) < length(a);
  }
  bool has_right_descent(Elt a, int j) {
    return length(simple_right(a, j)) < length(a);
  }
  // lowest-index left descent, or -1 when the element has length zero
  int first_left_descent(Elt a);

  // w = s_{i1} ... s_{il} · ω with l = length(w); greedy lowest descent.
  std::pair<std::vector<int>, Elt> reduced_word(Elt a);
  // all reduced words (test-sized elements only)
  std::vector<std::vector<int>> all_reduced_words(Elt a);

  bool bruhat_leq(Elt a, Elt b);
  std::vector<Elt> bruhat_ideal(Elt a);  // {a' : a' <= a}, canonically sorted

  // all elements of length <= max_len sharing the Ω-class of omega_rep
  std::vector<Elt> ball(i64 max_len, Elt omega_rep);

  // --- diagram automorphisms ------------------------------------------------
  struct Sigma {
    IMat g;                        // lattice automorphism
    IMat g_inv;
    std::vector<u16> twist;        // u ↦ g u g^{-1} as W0 indices
    std::vector<int> affine_perm;  // action on affine simple indices
    AbelianQuotient coinv;         // X_* / (Q^vee + (g-1) X_*)
    int order = 1;
    bool trivial = true;
  };
  Sigma trivial_sigma() const;
  Sigma sigma_from_matrix(const IMat& g) const;
  // built-in automorphism names: "trivial"/"id", "flip" (GL(n) only)
  Sigma sigma_from_name(const std::string& name) const;
  // permutation of the finite simple roots (0-based); must extend uniquely
  Sigma sigma_from_perm(const std::vector<int>& perm) const;

  Elt apply_sigma(const Sigma& s, Elt a);
  IVec kappa(const Sigma& s, Elt a) const {  // Kottwitz point, coinvariants
    return s.coinv.project(pool_[a].t);
  }

  // --- parahoric types ------------------------------------------------------
  void validate_parahoric(const ParahoricType& k) const;  // W_K finite?
  bool sigma_stable(const Sigma& s, const ParahoricType& k) const;
  bool is_left_minimal(const ParahoricType& k, Elt a);
  bool is_right_minimal(const ParahoricType& k, Elt a);
  Elt coset_min_left(const ParahoricType& k, Elt a);
  Elt coset_min_right(const ParahoricType& k, Elt a);
  Elt coset_min_double(const ParahoricType& k, Elt a);
  // the unique maximal-length right-minimal element of the double coset
  Elt max_min_rep(const ParahoricType& k, Elt a);
  const std::vector<Elt>& subgroup(const ParahoricType& k);  // W_K, cached
  bool in_subgroup(const ParahoricType& k, Elt a);

  // --- canonical form -------------------------------------------------------
  // t[l1,...,lm]*w[one-line form of the finite part]
  std::string to_string(Elt a) const;
  std::optional<Elt> parse(const std::string& text);
  bool canonical_less(Elt a, Elt b) const;
  void sort_canonical(std::vector<Elt>& v) const;

  std::size_t n_interned() const { return pool_.size(); }

 private:
  struct Node {
    IVec t;
    u16 u;
    i64 len;
    IVec omega;
  };

  i64 compute_length(const IVec& t, u16 u) const;

  RootDatum rd_;
  std::vector<Node> pool_;
  std::unordered_map<std::string, Elt> index_;
  mutable std::mutex intern_mu_;

  std::vector<Elt> affine_simple_;
  std::vector<int> affine_component_;   // component of each affine index
  std::vector<int> affine_finite_idx_;  // finite simple index or -1

  std::unordered_map<u64, bool> bruhat_memo_;
  std::unordered_map<std::string, std::vector<Elt>> subgroup_cache_;
};

}  // namespace strat
