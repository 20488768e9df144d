#include "stratlas/newton.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "stratlas/budget.hpp"

namespace strat {

namespace {

// Translation accumulator of (w·sigma)^j until the linear part is trivial;
// returns (lambda, n) with (w sigma)^n acting as t^lambda.
std::pair<IVec, int> twisted_power_translation(AffineWeyl& w,
                                               const AffineWeyl::Sigma& s,
                                               AffineWeyl::Elt e) {
  const RootDatum& rd = w.datum();
  IMat step = mat_mul(rd.w0_matrix(w.finite_part(e)), s.g);
  IVec lambda = w.trans_part(e);
  IMat lin = step;
  IMat id = identity_matrix(rd.rank());
  int n = 1;
  int bound = rd.w0_order() * s.order + 1;
  while (lin != id) {
    lambda = add(lambda, mat_apply(lin, w.trans_part(e)));
    lin = mat_mul(lin, step);
    if (++n > bound)
      throw std::logic_error("twisted power iteration exceeded its bound");
  }
  return {lambda, n};
}

std::string nu_key(const QVec& nu) {
  std::string k;
  for (const Rat& q : nu) {
    k += q.get_str();
    k += ',';
  }
  return k;
}

std::string pair_key(const NewtonPair& p) {
  std::string k = nu_key(p.nu) + "|";
  for (i64 x : p.kappa) k += std::to_string(x) + ",";
  return k;
}

}  // namespace

std::string NewtonPair::to_string() const {
  std::string out = "nu=(";
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (i) out += ",";
    out += nu[i].get_str();
  }
  out += ") kappa=(";
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(kappa[i]);
  }
  return out + ")";
}

QVec newton_point(AffineWeyl& w, const AffineWeyl::Sigma& s, AffineWeyl::Elt e) {
  auto [lambda, n] = twisted_power_translation(w, s, e);
  QVec nu = to_qvec(lambda);
  for (Rat& q : nu) q /= n;
  return w.datum().dominant_representative(nu).first;
}

IVec kottwitz_point(AffineWeyl& w, const AffineWeyl::Sigma& s, AffineWeyl::Elt e) {
  return w.kappa(s, e);
}

NewtonPair newton_pair(AffineWeyl& w, const AffineWeyl::Sigma& s, AffineWeyl::Elt e) {
  return NewtonPair{newton_point(w, s, e), kottwitz_point(w, s, e)};
}

bool is_straight(AffineWeyl& w, const AffineWeyl::Sigma& s, AffineWeyl::Elt e) {
  // n·l(w) = <lambda_dom, 2 rho> avoids rationals entirely
  auto [lambda, n] = twisted_power_translation(w, s, e);
  IVec dom = w.datum().dominant_representative(lambda).first;
  return dot(w.datum().rho2(), dom) == n * w.length(e);
}

std::vector<StraightClass> straight_classes_in(
    AffineWeyl& w, const AffineWeyl::Sigma& s,
    const std::vector<AffineWeyl::Elt>& elems, bool verify) {
  std::vector<AffineWeyl::Elt> straights;
  for (AffineWeyl::Elt e : elems)
    if (is_straight(w, s, e)) straights.push_back(e);
  w.sort_canonical(straights);

  std::map<std::string, StraightClass> grouped;
  for (AffineWeyl::Elt e : straights) {
    NewtonPair p = newton_pair(w, s, e);
    auto [it, fresh] = grouped.try_emplace(pair_key(p));
    if (fresh) it->second.invariants = p;
    it->second.members.push_back(e);
  }
  std::vector<StraightClass> out;
  for (auto& [k, cls] : grouped) {
    cls.rep = cls.members.front();  // canonically sorted: minimal length first
    out.push_back(std::move(cls));
  }

  if (verify) {
    // Orbit partition under length-preserving elementary conjugations
    // z ↦ s z σ(s) must coincide with the (nu, kappa) grouping.
    std::unordered_map<AffineWeyl::Elt, int> orbit;
    int next_orbit = 0;
    for (AffineWeyl::Elt seed : straights) {
      if (orbit.count(seed)) continue;
      int id = next_orbit++;
      std::deque<AffineWeyl::Elt> q{seed};
      orbit[seed] = id;
      while (!q.empty()) {
        budget_check();
        AffineWeyl::Elt z = q.front();
        q.pop_front();
        for (int j = 0; j < w.n_affine(); ++j) {
          AffineWeyl::Elt img = w.multiply(w.multiply(w.affine_simple(j), z),
                                           w.apply_sigma(s, w.affine_simple(j)));
          if (w.length(img) != w.length(z)) continue;
          if (!orbit.count(img)) {
            orbit[img] = id;
            q.push_back(img);
          }
        }
      }
    }
    std::unordered_map<int, std::string> orbit_class;
    for (AffineWeyl::Elt e : straights) {
      std::string cls = pair_key(newton_pair(w, s, e));
      auto [it, fresh] = orbit_class.try_emplace(orbit.at(e), cls);
      if (!fresh && it->second != cls)
        throw std::logic_error(
            "conjugation orbit mixes distinct straight classes (bug)");
    }
    std::unordered_map<std::string, int> class_orbit;
    for (AffineWeyl::Elt e : straights) {
      std::string cls = pair_key(newton_pair(w, s, e));
      auto [it, fresh] = class_orbit.try_emplace(cls, orbit.at(e));
      if (!fresh && it->second != orbit.at(e))
        throw std::logic_error(
            "straight class split across conjugation orbits (bug)");
    }
  }
  return out;
}

bool leq_newton(const RootDatum& rd, const NewtonPair& a, const NewtonPair& b) {
  return a.kappa == b.kappa && rd.dominance_leq(a.nu, b.nu);
}

BofG b_of_g_mu(AffineWeyl& w, const AffineWeyl::Sigma& s, const AdmSet& adm,
               bool verify) {
  BofG out;
  out.classes = straight_classes_in(w, s, adm.elements, verify);
  // basic first: <nu, 2 rho> is strictly monotone for the dominance order
  std::sort(out.classes.begin(), out.classes.end(),
            [&](const StraightClass& a, const StraightClass& b) {
              Rat pa = dot(a.invariants.nu, w.datum().rho2());
              Rat pb = dot(b.invariants.nu, w.datum().rho2());
              if (pa != pb) return pa < pb;
              return nu_key(a.invariants.nu) < nu_key(b.invariants.nu);
            });
  int n = static_cast<int>(out.classes.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && leq_newton(w.datum(), out.classes[i].invariants,
                               out.classes[j].invariants))
        out.leq_pairs.emplace_back(i, j);
  auto comparable = [&](int a, int b) {
    if (a == b) return true;
    for (auto& [x, y] : out.leq_pairs)
      if (x == a && y == b) return true;
    return false;
  };
  for (int i = 0; i < n; ++i) {
    bool is_min = true, is_max = true;
    for (int j = 0; j < n; ++j) {
      if (!comparable(i, j)) is_min = false;
      if (!comparable(j, i)) is_max = false;
    }
    if (is_min) out.minimum = i;
    if (is_max) out.maximum = i;
  }

  if (verify) {
    for (const StraightClass& cls : out.classes) {
      if (cls.invariants.kappa != adm.mu.mu_natural)
        throw std::logic_error("straight class with wrong Kottwitz point: " +
                               cls.invariants.to_string());
      if (!w.datum().dominance_leq(cls.invariants.nu, adm.mu.mu_bar))
        throw std::logic_error("straight class above the mu average: " +
                               cls.invariants.to_string());
    }
    Family fam = w.datum().family();
    if (fam == Family::GL || fam == Family::GSp) {
      std::vector<QVec> expect = polygon_oracle(w.datum(), adm.mu.mu_dom);
      std::vector<QVec> got;
      for (const StraightClass& cls : out.classes) got.push_back(cls.invariants.nu);
      std::sort(got.begin(), got.end(),
                [](const QVec& a, const QVec& b) { return nu_key(a) < nu_key(b); });
      if (expect != got)
        throw std::logic_error(
            "straight-class Newton points differ from the polygon enumeration");
    }
  }
  return out;
}

std::optional<i64> defect(const RootDatum& rd, const QVec& nu) {
  if (rd.family() != Family::GL) return std::nullopt;
  std::map<std::string, std::pair<Rat, i64>> slopes;  // value -> multiplicity
  for (const Rat& q : nu) {
    auto [it, fresh] = slopes.try_emplace(q.get_str(), std::make_pair(q, 0));
    ++it->second.second;
  }
  i64 summands = 0;
  for (auto& [k, sm] : slopes) {
    i64 den = sm.first.get_den().get_si();
    if (sm.second % den != 0)
      throw std::invalid_argument("slope multiplicity incompatible with its denominator");
    summands += sm.second / den;
  }
  return rd.rank() - summands;
}

std::optional<DimPrediction> newton_dim_prediction(const RootDatum& rd,
                                                   const CocharClass& mu,
                                                   const NewtonPair& b) {
  auto def = defect(rd, b.nu);
  if (!def) return std::nullopt;
  QVec sum = add(to_qvec(mu.mu_dom), b.nu);
  Rat value = rd.rho_pairing(sum, 1) - rat(*def, 2);
  return DimPrediction{value, is_integer(value)};
}

Rat leaf_dim_prediction(const RootDatum& rd, const NewtonPair& b) {
  return rd.rho_pairing(b.nu, 2);
}

namespace {

// Lattice-breakpoint slope polygons: nonincreasing rational slope vectors of
// given length and total, with integral partial sums wherever the slope
// drops, lying under the concave majorant given by caps.
void polygon_dfs(int len, i64 total, const std::vector<i64>& caps, i64 slope_min,
                 i64 slope_max, int x, i64 y, std::optional<Rat> prev_slope,
                 QVec& acc, std::vector<QVec>& out) {
  if (x == len) {
    if (y == total) out.push_back(acc);
    return;
  }
  for (int nx = x + 1; nx <= len; ++nx)
    for (i64 ny = y + slope_min * (nx - x); ny <= y + slope_max * (nx - x); ++ny) {
      budget_check();
      if (ny > caps[nx]) continue;
      Rat slope = rat(ny - y, nx - x);
      if (prev_slope && slope >= *prev_slope) continue;
      if (nx == len && ny != total) continue;
      for (int i = x; i < nx; ++i) acc[i] = slope;
      polygon_dfs(len, total, caps, slope_min, slope_max, nx, ny, slope, acc, out);
    }
}

std::vector<QVec> polygons_under(const std::vector<i64>& mu_slopes) {
  int len = static_cast<int>(mu_slopes.size());
  std::vector<i64> caps(len + 1, 0);
  i64 total = 0;
  for (int i = 0; i < len; ++i) {
    total += mu_slopes[i];
    caps[i + 1] = total;
  }
  i64 lo = *std::min_element(mu_slopes.begin(), mu_slopes.end());
  i64 hi = *std::max_element(mu_slopes.begin(), mu_slopes.end());
  QVec acc(len, Rat(0));
  std::vector<QVec> out;
  polygon_dfs(len, total, caps, lo, hi, 0, 0, std::nullopt, acc, out);
  std::sort(out.begin(), out.end(),
            [](const QVec& a, const QVec& b) { return nu_key(a) < nu_key(b); });
  return out;
}

}  // namespace

std::vector<QVec> polygon_oracle(const RootDatum& rd, const IVec& mu) {
  if (rd.family() == Family::GL) {
    std::vector<i64> slopes = mu;
    std::sort(slopes.rbegin(), slopes.rend());
    return polygons_under(slopes);
  }
  if (rd.family() == Family::GSp) {
    int g = rd.rank() - 1;
    i64 c = mu[g];
    std::vector<i64> rep(2 * g);
    for (int i = 0; i < g; ++i) {
      rep[i] = mu[i];
      rep[2 * g - 1 - i] = c - mu[i];
    }
    std::sort(rep.rbegin(), rep.rend());
    std::vector<QVec> all = polygons_under(rep);
    std::vector<QVec> out;
    for (const QVec& nu : all) {
      bool symmetric = true;
      for (int i = 0; i < g; ++i)
        if (nu[i] + nu[2 * g - 1 - i] != rat(c)) symmetric = false;
      if (!symmetric) continue;
      QVec native(nu.begin(), nu.begin() + g);
      native.push_back(rat(c));
      out.push_back(std::move(native));
    }
    std::sort(out.begin(), out.end(),
              [](const QVec& a, const QVec& b) { return nu_key(a) < nu_key(b); });
    return out;
  }
  throw std::invalid_argument("polygon oracle supports the GL and GSp built-ins");
}

}  // namespace strat
