#include "stratlas/admissible.hpp"

#include <algorithm>
#include <stdexcept>

#include "stratlas/budget.hpp"

namespace strat {

CocharClass make_cochar_class(AffineWeyl& w, const AffineWeyl::Sigma& s,
                              const IVec& mu) {
  const RootDatum& rd = w.datum();
  if (static_cast<int>(mu.size()) != rd.rank())
    throw std::invalid_argument("mu has wrong length");
  if (!rd.is_dominant(mu))
    throw std::invalid_argument("mu must be given in dominant form");
  CocharClass out;
  out.mu_dom = mu;
  // Galois average: a diagram automorphism keeps dominant vectors dominant,
  // so averaging the sigma-orbit of the dominant representative is exact.
  QVec acc = to_qvec(mu);
  IVec cur = mu;
  int count = 1;
  for (;;) {
    cur = mat_apply(s.g, cur);
    if (cur == mu) break;
    if (!rd.is_dominant(cur))
      throw std::logic_error("sigma image of a dominant cocharacter not dominant");
    acc = add(acc, to_qvec(cur));
    ++count;
    if (count > s.order) throw std::logic_error("sigma orbit failed to close");
  }
  for (Rat& q : acc) q /= count;
  out.mu_bar = acc;
  out.mu_pi1 = rd.pi1().project(mu);
  out.mu_natural = s.coinv.project(mu);
  return out;
}

AffineWeyl::Elt tau_of_mu(AffineWeyl& w, const CocharClass& mu) {
  // greedy descent inside W_aff · t^μ ends at its unique length-0 element
  AffineWeyl::Elt cur = w.translation(mu.mu_dom);
  while (w.length(cur) > 0) cur = w.simple_left(w.first_left_descent(cur), cur);
  if (w.omega_class(cur) != mu.mu_pi1)
    throw std::logic_error("length-zero descent left the pi1 fiber");
  return cur;
}

AdmSet admissible_set(AffineWeyl& w, const CocharClass& mu) {
  AdmSet out;
  out.mu = mu;
  const RootDatum& rd = w.datum();
  std::unordered_set<AffineWeyl::Elt> gens;
  for (int a = 0; a < rd.w0_order(); ++a)
    gens.insert(w.translation(rd.w0_apply(static_cast<u16>(a), mu.mu_dom)));
  out.generators.assign(gens.begin(), gens.end());
  w.sort_canonical(out.generators);
  for (AffineWeyl::Elt g : out.generators) {
    budget_check();
    for (AffineWeyl::Elt e : w.bruhat_ideal(g)) out.index.insert(e);
  }
  out.elements.assign(out.index.begin(), out.index.end());
  w.sort_canonical(out.elements);
  return out;
}

AdmK admissible_K(AffineWeyl& w, const AdmSet& adm, const ParahoricType& k,
                  const AffineWeyl::Sigma& s, bool materialize_upper) {
  w.validate_parahoric(k);
  if (!w.sigma_stable(s, k))
    throw std::invalid_argument("parahoric type is not sigma-stable");
  AdmK out;
  out.k = k;
  std::unordered_set<AffineWeyl::Elt> mins;
  for (AffineWeyl::Elt e : adm.elements) {
    budget_check();
    mins.insert(w.coset_min_double(k, e));
  }
  std::vector<AffineWeyl::Elt> sorted(mins.begin(), mins.end());
  w.sort_canonical(sorted);
  for (AffineWeyl::Elt m : sorted)
    out.cosets.push_back(AdmKCoset{m, w.max_min_rep(k, m)});
  if (materialize_upper) {
    std::unordered_set<AffineWeyl::Elt> upper;
    const auto& wk = w.subgroup(k);
    for (AffineWeyl::Elt e : adm.elements)
      for (AffineWeyl::Elt u : wk) {
        budget_check();
        AffineWeyl::Elt ue = w.multiply(u, e);
        for (AffineWeyl::Elt v : wk) upper.insert(w.multiply(ue, v));
      }
    out.upper.assign(upper.begin(), upper.end());
    w.sort_canonical(out.upper);
  }
  return out;
}

std::vector<AffineWeyl::Elt> ekor_index_set(AffineWeyl& w, const AdmSet& adm,
                                            const ParahoricType& k,
                                            const AffineWeyl::Sigma& s,
                                            bool verify) {
  w.validate_parahoric(k);
  if (!w.sigma_stable(s, k))
    throw std::invalid_argument("parahoric type is not sigma-stable");
  std::vector<AffineWeyl::Elt> direct;
  for (AffineWeyl::Elt e : adm.elements)
    if (w.is_left_minimal(k, e)) direct.push_back(e);
  w.sort_canonical(direct);
  if (verify) {
    // (W_K Adm W_K) ∩ ᴷW̃ via left-coset minima of Adm · W_K
    std::unordered_set<AffineWeyl::Elt> through_cosets;
    for (AffineWeyl::Elt e : adm.elements)
      for (AffineWeyl::Elt v : w.subgroup(k)) {
        budget_check();
        through_cosets.insert(w.coset_min_left(k, w.multiply(e, v)));
      }
    std::vector<AffineWeyl::Elt> other(through_cosets.begin(), through_cosets.end());
    w.sort_canonical(other);
    if (other != direct)
      throw std::logic_error(
          "parahoric-saturated and direct EKOR index sets differ (bug)");
  }
  return direct;
}

}  // namespace strat
