#pragma once

#include <unordered_map>
#include <vector>

#include "stratlas/newton.hpp"

// Partial-conjugation calculus for a sigma-stable parahoric type J: the
// length-nonincreasing moves w ↦ s·w·σ(s) with s in J, canonical forms u·x
// with x left-J-minimal and u in the twisted-stabilizer subgroup I(J,x,σ),
// the finite sets Σ_K(w) they induce, and the two refinement orders built
// from them (on ᴷW̃ and on straight classes).

namespace strat {

struct ConjStep {
  int s;                  // affine simple index in J
  bool length_preserving; // otherwise strictly length-decreasing
  AffineWeyl::Elt from;
  AffineWeyl::Elt to;     // s · from · σ(s)
};

struct CanonicalForm {
  AffineWeyl::Elt x;  // left-J-minimal
  AffineWeyl::Elt u;  // element of W_{I(J,x,σ)}
  std::vector<ConjStep> trace;
};

class PartialConjCtx {
 public:
  PartialConjCtx(AffineWeyl& w, ParahoricType j, const AffineWeyl::Sigma& s);

  AffineWeyl& weyl() const { return w_; }
  const ParahoricType& parahoric() const { return j_; }
  const AffineWeyl::Sigma& sigma() const { return s_; }

  // s · w · σ(s); never increases length when it is a →_{J,σ} step.
  AffineWeyl::Elt twisted_conj(int s, AffineWeyl::Elt w);

  // Largest J' ⊆ J with x σ(J') x^{-1} = J' (as sets of simple reflections);
  // requires x left-J-minimal.
  std::vector<int> stable_subtype(AffineWeyl::Elt x);

  // Does w factor as u·x with x = leftmin(w) and u in W_{I(J,x,σ)}?
  bool in_canonical_form(AffineWeyl::Elt w, AffineWeyl::Elt* x_out = nullptr);

  // Reach a canonical form through →_{J,σ} steps.
  CanonicalForm reduce(AffineWeyl::Elt w);

  // Σ_K(w), canonically sorted; memoized three-rule recursion.
  const std::vector<AffineWeyl::Elt>& sigma_k(AffineWeyl::Elt w);

  // Exercise every applicable step order (exponential; test sizes only) and
  // collect the distinct results.
  std::vector<std::vector<AffineWeyl::Elt>> sigma_k_all_orders(AffineWeyl::Elt w);

  // x' ≼_{K,σ} x: some W_K-twisted conjugate of x' is Bruhat-below x.
  bool leq_k_sigma(AffineWeyl::Elt x_small, AffineWeyl::Elt x_big);

  // {x' ∈ ᴷW̃ : x' ≼_{K,σ} x}; every member must land inside adm.
  std::vector<AffineWeyl::Elt> ekor_closure(AffineWeyl::Elt x, const AdmSet& adm);

 private:
  AffineWeyl& w_;
  ParahoricType j_;
  const AffineWeyl::Sigma& s_;
  std::unordered_map<AffineWeyl::Elt, std::vector<AffineWeyl::Elt>> sigma_k_memo_;
  std::unordered_map<AffineWeyl::Elt, std::vector<int>> stable_memo_;
};

// a ≼ b on straight classes: some straight element with the invariants of a
// lies Bruhat-below a representative of b.
bool leq_straight(AffineWeyl& w, const AffineWeyl::Sigma& s,
                  const StraightClass& a, const StraightClass& b);

}  // namespace strat
