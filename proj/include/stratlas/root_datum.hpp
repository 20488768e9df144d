#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stratlas/abelian.hpp"
#include "stratlas/rational.hpp"

// A finite root datum: a lattice Z^m, simple roots as integer covectors,
// simple coroots as integer vectors, and everything derived from them --
// the full (finite) root system, the Weyl group acting by integer matrices,
// dominance order, rho pairings, and the fundamental group X_* / Q^vee.

namespace strat {

enum class Family { GL, SL, GSp, User };

struct RootDatumSpec {
  int rank = 0;
  std::vector<IVec> simple_roots;    // covectors on Z^rank
  std::vector<IVec> simple_coroots;  // vectors in Z^rank
  std::string name;
  Family family = Family::User;
};

class RootDatum {
 public:
  static RootDatum from_spec(const RootDatumSpec& spec);
  // "GL(n)", "SL(n)", "GSp(2g)"
  static RootDatum from_label(const std::string& label);
  // { "rank": m, "simple_roots": [[..]], "simple_coroots": [[..]] }
  static RootDatum from_json_text(const std::string& text);

  const std::string& name() const { return name_; }
  Family family() const { return family_; }
  int rank() const { return rank_; }
  int n_simple() const { return static_cast<int>(simple_roots_.size()); }
  const IVec& simple_root(int i) const { return simple_roots_[i]; }
  const IVec& simple_coroot(int i) const { return simple_coroots_[i]; }
  std::string to_json_text() const;

  // Root system, positive roots first; root p pairs with coroot p.
  int n_pos_roots() const { return n_pos_; }
  const IVec& pos_root(int p) const { return roots_[p]; }
  const IVec& pos_coroot(int p) const { return coroots_[p]; }
  const IVec& rho2() const { return rho2_; }  // sum of positive roots

  // Finite Weyl group, enumerated once; elements are dense indices.
  int w0_order() const { return static_cast<int>(w0_mats_.size()); }
  u16 w0_identity() const { return 0; }
  u16 w0_simple(int i) const { return simple_refl_[i]; }
  u16 w0_mult(u16 a, u16 b) const { return mult_[a][b]; }
  u16 w0_inverse(u16 a) const { return inv_[a]; }
  const IMat& w0_matrix(u16 a) const { return w0_mats_[a]; }
  std::optional<u16> w0_index_of(const IMat& m) const;
  IVec w0_apply(u16 a, const IVec& v) const { return mat_apply(w0_mats_[a], v); }
  QVec w0_apply(u16 a, const QVec& v) const { return mat_apply(w0_mats_[a], v); }
  i64 w0_length(u16 a) const { return w0_len_[a]; }

  // u · α_p = sign · α_q over positive roots; returns (q, sign).
  std::pair<int, int> root_image(u16 u, int p) const { return root_act_[u][p]; }

  // Faithful permutation used for the printable one-line form of a finite
  // Weyl element: coordinates for GL, the 2g weight slots of the defining
  // representation for GSp, the list of all roots otherwise.
  const std::vector<int>& display_perm(u16 u) const { return display_[u]; }
  std::optional<u16> w0_from_display(const std::vector<int>& perm) const;

  template <typename Vec>
  bool is_dominant(const Vec& v) const {
    for (const IVec& a : simple_roots_)
      if (pair_with(v, a) < 0) return false;
    return true;
  }

  // Unique dominant element of the Weyl orbit together with a witness w
  // such that w·v is the returned vector.
  std::pair<IVec, u16> dominant_representative(const IVec& v) const;
  std::pair<QVec, u16> dominant_representative(const QVec& v) const;

  // Dominance order on dominant vectors: mu - la is a nonnegative rational
  // combination of simple coroots (and nothing outside their span).
  bool dominance_leq(const QVec& la, const QVec& mu) const;

  // <dominant representative of la, rho> (factor 1) or <.., 2 rho> (factor 2).
  Rat rho_pairing(const QVec& la, int factor) const;

  // Irreducible components of the Dynkin diagram.
  int n_components() const { return static_cast<int>(components_.size()); }
  const std::vector<int>& component(int c) const { return components_[c]; }
  int component_of_simple(int i) const { return comp_of_[i]; }
  int highest_root_of(int c) const { return highest_[c]; }  // positive root index

  const AbelianQuotient& pi1() const { return pi1_; }
  // X_* / (Q^vee + (sigma - 1) X_*) for a lattice automorphism sigma.
  AbelianQuotient coinvariants(const IMat& sigma) const;

 private:
  RootDatum() = default;
  void build();

  int rank_ = 0;
  std::vector<IVec> simple_roots_, simple_coroots_;
  std::string name_;
  Family family_ = Family::User;

  std::vector<IVec> roots_, coroots_;
  int n_pos_ = 0;
  IVec rho2_;
  std::vector<IMat> w0_mats_;
  std::vector<std::vector<u16>> mult_;
  std::vector<u16> inv_, simple_refl_;
  std::vector<i64> w0_len_;
  std::vector<std::vector<std::pair<int, int>>> root_act_;
  std::vector<std::vector<int>> display_;
  std::unordered_map<std::string, u16> mat_index_, display_index_;
  std::vector<std::vector<int>> components_;
  std::vector<int> comp_of_, highest_;
  AbelianQuotient pi1_;

  template <typename Vec>
  static auto pair_with(const Vec& v, const IVec& covec) {
    if constexpr (std::is_same_v<Vec, IVec>)
      return dot(covec, v);
    else
      return dot(v, covec);
  }
};

}  // namespace strat
