#include "stratlas/partial_conj.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

#include "stratlas/budget.hpp"

namespace strat {

PartialConjCtx::PartialConjCtx(AffineWeyl& w, ParahoricType j,
                               const AffineWeyl::Sigma& s)
    : w_(w), j_(std::move(j)), s_(s) {
  w_.validate_parahoric(j_);
  if (!w_.sigma_stable(s_, j_))
    throw std::invalid_argument("parahoric type is not sigma-stable");
}

AffineWeyl::Elt PartialConjCtx::twisted_conj(int s, AffineWeyl::Elt w) {
  AffineWeyl::Elt left = w_.simple_left(s, w);
  return w_.multiply(left, w_.affine_simple(s_.affine_perm[s]));
}

std::vector<int> PartialConjCtx::stable_subtype(AffineWeyl::Elt x) {
  auto it = stable_memo_.find(x);
  if (it != stable_memo_.end()) return it->second;
  AffineWeyl::Elt xi = w_.inverse(x);
  std::vector<int> cur = j_.nodes;
  for (;;) {
    std::vector<int> next;
    for (int s : cur) {
      AffineWeyl::Elt conj = w_.multiply(
          w_.multiply(x, w_.affine_simple(s_.affine_perm[s])), xi);
      bool simple_in_cur = false;
      for (int t : cur)
        if (conj == w_.affine_simple(t)) {
          simple_in_cur = true;
          break;
        }
      if (simple_in_cur) next.push_back(s);
    }
    if (next == cur) break;
    cur = std::move(next);
  }
  stable_memo_.emplace(x, cur);
  return cur;
}

bool PartialConjCtx::in_canonical_form(AffineWeyl::Elt w, AffineWeyl::Elt* x_out) {
  AffineWeyl::Elt x = w_.coset_min_left(j_, w);
  if (x_out) *x_out = x;
  AffineWeyl::Elt u = w_.multiply(w, w_.inverse(x));
  ParahoricType stab{stable_subtype(x)};
  return w_.in_subgroup(stab, u);
}

CanonicalForm PartialConjCtx::reduce(AffineWeyl::Elt w) {
  // Walk the →_{J,σ} step graph: flood the current length level, drop a level
  // whenever a strictly decreasing step appears, stop at a canonical form.
  std::map<AffineWeyl::Elt, std::vector<ConjStep>> trace{{w, {}}};
  std::vector<AffineWeyl::Elt> frontier{w};
  for (;;) {
    std::deque<AffineWeyl::Elt> queue(frontier.begin(), frontier.end());
    std::set<AffineWeyl::Elt> level(frontier.begin(), frontier.end());
    std::optional<std::pair<AffineWeyl::Elt, int>> drop;
    while (!queue.empty()) {
      budget_check();
      AffineWeyl::Elt z = queue.front();
      queue.pop_front();
      if (AffineWeyl::Elt x; in_canonical_form(z, &x)) {
        AffineWeyl::Elt u = w_.multiply(z, w_.inverse(x));
        return CanonicalForm{x, u, trace.at(z)};
      }
      for (int s : j_.nodes) {
        AffineWeyl::Elt img = twisted_conj(s, z);
        if (w_.length(img) > w_.length(z)) continue;
        if (w_.length(img) < w_.length(z)) {
          if (!drop) drop = {z, s};
          continue;
        }
        if (!level.count(img)) {
          level.insert(img);
          auto steps = trace.at(z);
          steps.push_back(ConjStep{s, true, z, img});
          trace.emplace(img, std::move(steps));
          queue.push_back(img);
        }
      }
    }
    if (!drop)
      throw std::logic_error("partial conjugation stalled without canonical form");
    auto [z, s] = *drop;
    AffineWeyl::Elt img = twisted_conj(s, z);
    auto steps = trace.at(z);
    steps.push_back(ConjStep{s, false, z, img});
    trace.clear();
    trace.emplace(img, std::move(steps));
    frontier = {img};
  }
}

const std::vector<AffineWeyl::Elt>& PartialConjCtx::sigma_k(AffineWeyl::Elt w) {
  auto it = sigma_k_memo_.find(w);
  if (it != sigma_k_memo_.end()) return it->second;

  if (AffineWeyl::Elt x; in_canonical_form(w, &x))
    return sigma_k_memo_.emplace(w, std::vector<AffineWeyl::Elt>{x}).first->second;

  // Flood the length-preserving component; Σ is constant along it.
  std::set<AffineWeyl::Elt> component{w};
  std::deque<AffineWeyl::Elt> queue{w};
  std::optional<std::pair<AffineWeyl::Elt, int>> drop;
  while (!queue.empty()) {
    budget_check();
    AffineWeyl::Elt z = queue.front();
    queue.pop_front();
    if (AffineWeyl::Elt x; z != w && in_canonical_form(z, &x)) {
      std::vector<AffineWeyl::Elt> res{x};
      for (AffineWeyl::Elt m : component) sigma_k_memo_.emplace(m, res);
      return sigma_k_memo_.at(w);
    }
    for (int s : j_.nodes) {
      AffineWeyl::Elt img = twisted_conj(s, z);
      if (w_.length(img) > w_.length(z)) continue;
      if (w_.length(img) < w_.length(z)) {
        if (!drop) drop = {z, s};
        continue;
      }
      if (!component.count(img)) {
        component.insert(img);
        queue.push_back(img);
      }
    }
  }
  if (!drop)
    throw std::logic_error("sigma_k recursion stalled (no step, no canonical form)");
  auto [z, s] = *drop;
  // Σ(z) = Σ(s z σ(s)) ∪ Σ(s z), both of strictly smaller length.
  std::set<AffineWeyl::Elt> merged;
  for (AffineWeyl::Elt e : sigma_k(twisted_conj(s, z))) merged.insert(e);
  for (AffineWeyl::Elt e : sigma_k(w_.simple_left(s, z))) merged.insert(e);
  std::vector<AffineWeyl::Elt> res(merged.begin(), merged.end());
  w_.sort_canonical(res);
  for (AffineWeyl::Elt m : component) sigma_k_memo_.emplace(m, res);
  return sigma_k_memo_.at(w);
}

std::vector<std::vector<AffineWeyl::Elt>> PartialConjCtx::sigma_k_all_orders(
    AffineWeyl::Elt w) {
  std::vector<std::vector<AffineWeyl::Elt>> results;
  auto record = [&](std::vector<AffineWeyl::Elt> r) {
    w_.sort_canonical(r);
    if (std::find(results.begin(), results.end(), r) == results.end())
      results.push_back(std::move(r));
  };
  // Every admissible rule application, recursively; no memo on purpose.
  std::function<std::vector<std::vector<AffineWeyl::Elt>>(AffineWeyl::Elt,
                                                          std::set<AffineWeyl::Elt>)>
      explore = [&](AffineWeyl::Elt z, std::set<AffineWeyl::Elt> seen)
      -> std::vector<std::vector<AffineWeyl::Elt>> {
    budget_check();
    std::vector<std::vector<AffineWeyl::Elt>> outcomes;
    auto push = [&](std::vector<AffineWeyl::Elt> r) {
      w_.sort_canonical(r);
      if (std::find(outcomes.begin(), outcomes.end(), r) == outcomes.end())
        outcomes.push_back(std::move(r));
    };
    if (AffineWeyl::Elt x; in_canonical_form(z, &x)) push({x});
    seen.insert(z);
    for (int s : j_.nodes) {
      AffineWeyl::Elt img = twisted_conj(s, z);
      if (w_.length(img) > w_.length(z)) continue;
      if (w_.length(img) == w_.length(z)) {
        if (seen.count(img)) continue;
        for (auto& r : explore(img, seen)) push(std::move(r));
      } else {
        auto left = explore(img, {});
        auto right = explore(w_.simple_left(s, z), {});
        for (auto& a : left)
          for (auto& b : right) {
            std::set<AffineWeyl::Elt> u(a.begin(), a.end());
            u.insert(b.begin(), b.end());
            push(std::vector<AffineWeyl::Elt>(u.begin(), u.end()));
          }
      }
    }
    return outcomes;
  };
  for (auto& r : explore(w, {})) record(std::move(r));
  return results;
}

bool PartialConjCtx::leq_k_sigma(AffineWeyl::Elt x_small, AffineWeyl::Elt x_big) {
  if (!w_.is_left_minimal(j_, x_small) || !w_.is_left_minimal(j_, x_big))
    throw std::invalid_argument("leq_k_sigma arguments must be left-minimal");
  for (AffineWeyl::Elt v : w_.subgroup(j_)) {
    budget_check();
    AffineWeyl::Elt conj =
        w_.multiply(w_.multiply(v, x_small), w_.inverse(w_.apply_sigma(s_, v)));
    if (w_.bruhat_leq(conj, x_big)) return true;
  }
  return false;
}

std::vector<AffineWeyl::Elt> PartialConjCtx::ekor_closure(AffineWeyl::Elt x,
                                                          const AdmSet& adm) {
  if (!adm.contains(x))
    throw std::invalid_argument("ekor_closure wants an admissible element");
  AffineWeyl::Elt omega = tau_of_mu(w_, adm.mu);
  std::vector<AffineWeyl::Elt> closure;
  for (AffineWeyl::Elt cand : w_.ball(w_.length(x), omega)) {
    if (!w_.is_left_minimal(j_, cand)) continue;
    if (leq_k_sigma(cand, x)) closure.push_back(cand);
  }
  for (AffineWeyl::Elt e : closure)
    if (!adm.contains(e))
      throw std::logic_error("EKOR closure escapes the admissible index set");
  w_.sort_canonical(closure);
  return closure;
}

bool leq_straight(AffineWeyl& w, const AffineWeyl::Sigma& s,
                  const StraightClass& a, const StraightClass& b) {
  for (AffineWeyl::Elt below : w.bruhat_ideal(b.rep)) {
    budget_check();
    if (!is_straight(w, s, below)) continue;
    if (newton_pair(w, s, below) == a.invariants) return true;
  }
  return false;
}

}  // namespace strat
