#include "stratlas/affine_weyl.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "stratlas/budget.hpp"

namespace strat {

namespace {

constexpr std::size_t kMaxSubgroup = 2'000'000;

std::string elt_key(const IVec& t, u16 u) {
  std::string k;
  for (i64 x : t) {
    k += std::to_string(x);
    k += ',';
  }
  k += '|';
  k += std::to_string(u);
  return k;
}

std::string nodes_key(const std::vector<int>& nodes) {
  std::string k;
  for (int x : nodes) {
    k += std::to_string(x);
    k += ',';
  }
  return k;
}

}  // namespace

std::string ParahoricType::describe() const {
  if (nodes.empty()) return "iwahori";
  std::string out = "{";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(nodes[i]);
  }
  return out + "}";
}

AffineWeyl::AffineWeyl(RootDatum rd) : rd_(std::move(rd)) {
  pool_.push_back(Node{IVec(rd_.rank(), 0), 0, 0, rd_.pi1().project(IVec(rd_.rank(), 0))});
  index_[elt_key(pool_[0].t, 0)] = 0;

  // Affine simple layout: [0] = affine node of component 0, [1..n] = finite
  // simple reflections, [n+c] = affine node of component c >= 1.
  int n = rd_.n_simple();
  affine_simple_.resize(n + std::max(rd_.n_components(), 1));
  affine_component_.assign(affine_simple_.size(), -1);
  affine_finite_idx_.assign(affine_simple_.size(), -1);
  if (rd_.n_components() == 0) {
    // torus: no affine reflections at all
    affine_simple_.clear();
    affine_component_.clear();
    affine_finite_idx_.clear();
  }
  for (int i = 0; i < n; ++i) {
    affine_simple_[i + 1] = make(IVec(rd_.rank(), 0), rd_.w0_simple(i));
    affine_component_[i + 1] = rd_.component_of_simple(i);
    affine_finite_idx_[i + 1] = i;
  }
  for (int c = 0; c < rd_.n_components(); ++c) {
    int p = rd_.highest_root_of(c);
    IMat refl = identity_matrix(rd_.rank());
    const IVec& th = rd_.pos_root(p);
    const IVec& thv = rd_.pos_coroot(p);
    for (int r = 0; r < rd_.rank(); ++r)
      for (int col = 0; col < rd_.rank(); ++col) refl[r][col] -= thv[r] * th[col];
    auto s_theta = rd_.w0_index_of(refl);
    if (!s_theta) throw std::logic_error("highest-root reflection not in W0");
    int idx = c == 0 ? 0 : n + c;
    affine_simple_[idx] = make(thv, *s_theta);
    affine_component_[idx] = c;
  }
}

i64 AffineWeyl::compute_length(const IVec& t, u16 u) const {
  // l(t^λ u) = Σ_{α>0, u^{-1}α>0} |<λ,α>| + Σ_{α>0, u^{-1}α<0} |<λ,α> - 1|
  i64 len = 0;
  u16 ui = rd_.w0_inverse(u);
  for (int p = 0; p < rd_.n_pos_roots(); ++p) {
    i64 pairing = dot(rd_.pos_root(p), t);
    if (rd_.root_image(ui, p).second > 0)
      len += std::abs(pairing);
    else
      len += std::abs(pairing - 1);
  }
  return len;
}

AffineWeyl::Elt AffineWeyl::make(const IVec& translation, u16 finite) {
  if (static_cast<int>(translation.size()) != rd_.rank())
    throw std::invalid_argument("translation part has wrong length");
  std::string key = elt_key(translation, finite);
  std::lock_guard<std::mutex> lock(intern_mu_);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  Elt id = static_cast<Elt>(pool_.size());
  pool_.push_back(Node{translation, finite, compute_length(translation, finite),
                       rd_.pi1().project(translation)});
  index_.emplace(std::move(key), id);
  return id;
}

AffineWeyl::Elt AffineWeyl::multiply(Elt a, Elt b) {
  const Node& na = pool_[a];
  const Node& nb = pool_[b];
  IVec t = rd_.w0_apply(na.u, nb.t);
  for (int r = 0; r < rd_.rank(); ++r) t[r] += na.t[r];
  return make(t, rd_.w0_mult(na.u, nb.u));
}

AffineWeyl::Elt AffineWeyl::inverse(Elt a) {
  const Node& na = pool_[a];
  u16 ui = rd_.w0_inverse(na.u);
  IVec t = rd_.w0_apply(ui, na.t);
  for (auto& x : t) x = -x;
  return make(t, ui);
}

int AffineWeyl::first_left_descent(Elt a) {
  if (length(a) == 0) return -1;
  for (int j = 0; j < n_affine(); ++j)
    if (has_left_descent(a, j)) return j;
  throw std::logic_error("positive-length element without a left descent");
}

std::pair<std::vector<int>, AffineWeyl::Elt> AffineWeyl::reduced_word(Elt a) {
  std::vector<int> word;
  Elt cur = a;
  while (length(cur) > 0) {
    int j = first_left_descent(cur);
    word.push_back(j);
    cur = simple_left(j, cur);
  }
  return {word, cur};
}

std::vector<std::vector<int>> AffineWeyl::all_reduced_words(Elt a) {
  if (length(a) == 0) return {{}};
  std::vector<std::vector<int>> out;
  for (int j = 0; j < n_affine(); ++j) {
    if (!has_left_descent(a, j)) continue;
    for (auto& tail : all_reduced_words(simple_left(j, a))) {
      std::vector<int> w{j};
      w.insert(w.end(), tail.begin(), tail.end());
      out.push_back(std::move(w));
    }
  }
  return out;
}

bool AffineWeyl::bruhat_leq(Elt a, Elt b) {
  if (omega_class(a) != omega_class(b)) return false;
  if (a == b) return true;
  if (length(a) >= length(b)) return false;
  if (length(a) == 0) return true;  // a is the unique length-0 element below b
  u64 key = (static_cast<u64>(a) << 32) | b;
  auto it = bruhat_memo_.find(key);
  if (it != bruhat_memo_.end()) return it->second;
  // lifting step along the first descent of b
  int j = first_left_descent(b);
  Elt sb = simple_left(j, b);
  Elt sa = simple_left(j, a);
  bool res = length(sa) < length(a) ? bruhat_leq(sa, sb) : bruhat_leq(a, sb);
  bruhat_memo_.emplace(key, res);
  return res;
}

std::vector<AffineWeyl::Elt> AffineWeyl::bruhat_ideal(Elt a) {
  auto [word, omega] = reduced_word(a);
  std::unordered_set<Elt> cur{identity()};
  for (int j : word) {
    budget_check();
    std::unordered_set<Elt> next = cur;
    for (Elt e : cur) next.insert(simple_right(e, j));
    cur = std::move(next);
  }
  std::vector<Elt> out;
  out.reserve(cur.size());
  for (Elt e : cur) out.push_back(multiply(e, omega));
  sort_canonical(out);
  return out;
}

std::vector<AffineWeyl::Elt> AffineWeyl::ball(i64 max_len, Elt omega_rep) {
  if (length(omega_rep) != 0)
    throw std::invalid_argument("ball wants a length-zero base point");
  std::unordered_set<Elt> seen{omega_rep};
  std::deque<Elt> q{omega_rep};
  while (!q.empty()) {
    budget_check();
    Elt x = q.front();
    q.pop_front();
    for (int j = 0; j < n_affine(); ++j) {
      Elt y = simple_left(j, x);
      if (length(y) <= max_len && !seen.count(y)) {
        seen.insert(y);
        q.push_back(y);
      }
    }
  }
  std::vector<Elt> out(seen.begin(), seen.end());
  sort_canonical(out);
  return out;
}

AffineWeyl::Sigma AffineWeyl::trivial_sigma() const {
  Sigma s;
  s.g = identity_matrix(rd_.rank());
  s.g_inv = s.g;
  s.twist.resize(rd_.w0_order());
  for (int i = 0; i < rd_.w0_order(); ++i) s.twist[i] = static_cast<u16>(i);
  s.affine_perm.resize(affine_simple_.size());
  for (std::size_t i = 0; i < affine_simple_.size(); ++i)
    s.affine_perm[i] = static_cast<int>(i);
  s.coinv = rd_.coinvariants(s.g);
  s.order = 1;
  s.trivial = true;
  return s;
}

AffineWeyl::Sigma AffineWeyl::sigma_from_matrix(const IMat& g) const {
  int m = rd_.rank();
  if (static_cast<int>(g.size()) != m)
    throw std::invalid_argument("sigma matrix has wrong size");
  Sigma s;
  s.g = g;

  // inverse by iterating: a diagram automorphism has finite order
  IMat power = g;
  int order = 1;
  IMat id = identity_matrix(m);
  while (power != id) {
    power = mat_mul(g, power);
    if (++order > 64)
      throw std::invalid_argument("sigma matrix does not have small finite order");
  }
  s.order = order;
  s.g_inv = id;
  for (int k = 0; k + 1 < order; ++k) s.g_inv = mat_mul(g, s.g_inv);
  s.trivial = (order == 1);

  // must permute the based datum: alpha_i ∘ g^{-1} is again a simple root and
  // the coroots follow the same permutation
  int n = rd_.n_simple();
  std::vector<int> perm(n, -1);
  for (int i = 0; i < n; ++i) {
    IVec img = covector_compose(rd_.simple_root(i), s.g_inv);
    for (int j = 0; j < n; ++j)
      if (img == rd_.simple_root(j)) {
        perm[i] = j;
        break;
      }
    if (perm[i] < 0)
      throw std::invalid_argument("sigma does not permute the simple roots");
    if (mat_apply(g, rd_.simple_coroot(i)) != rd_.simple_coroot(perm[i]))
      throw std::invalid_argument("sigma is incompatible with the simple coroots");
  }

  s.twist.resize(rd_.w0_order());
  for (int a = 0; a < rd_.w0_order(); ++a) {
    IMat conj = mat_mul(s.g, mat_mul(rd_.w0_matrix(static_cast<u16>(a)), s.g_inv));
    auto idx = rd_.w0_index_of(conj);
    if (!idx)
      throw std::invalid_argument("sigma does not normalize the Weyl group");
    s.twist[a] = *idx;
  }

  s.affine_perm.assign(affine_simple_.size(), -1);
  for (std::size_t j = 0; j < affine_simple_.size(); ++j) {
    int fi = affine_finite_idx_[j];
    if (fi >= 0) {
      s.affine_perm[j] = perm[fi] + 1;
    } else {
      // image component: where the simple roots of this component go
      int c = affine_component_[j];
      int some_simple = rd_.component(c)[0];
      int image_comp = rd_.component_of_simple(perm[some_simple]);
      s.affine_perm[j] = image_comp == 0 ? 0 : n + image_comp;
    }
  }
  s.coinv = rd_.coinvariants(g);
  return s;
}

AffineWeyl::Sigma AffineWeyl::sigma_from_name(const std::string& name) const {
  if (name.empty() || name == "trivial" || name == "id") return trivial_sigma();
  if (name == "flip") {
    if (rd_.family() != Family::GL)
      throw std::invalid_argument("the flip automorphism is built in for GL(n) only");
    int m = rd_.rank();
    IMat g(m, IVec(m, 0));
    for (int i = 0; i < m; ++i) g[i][m - 1 - i] = -1;
    return sigma_from_matrix(g);
  }
  throw std::invalid_argument("unknown sigma name: " + name);
}

AffineWeyl::Sigma AffineWeyl::sigma_from_perm(const std::vector<int>& perm) const {
  int n = rd_.n_simple();
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("sigma permutation has wrong length");
  bool is_id = true;
  for (int i = 0; i < n; ++i)
    if (perm[i] != i) is_id = false;
  if (is_id) return trivial_sigma();
  // Solve for an integral lattice map with alpha_{p(i)} ∘ g = alpha_i and
  // g·alpha_i^vee = alpha_{p(i)}^vee. Entries of g are the unknowns; when the
  // solution is not unique the permutation alone does not pin sigma down.
  int m = rd_.rank();
  int vars = m * m;
  std::vector<QVec> rows;
  auto add_row = [&](const QVec& coeff, const Rat& rhs) {
    QVec r = coeff;
    r.push_back(rhs);
    rows.push_back(std::move(r));
  };
  for (int i = 0; i < n; ++i) {
    // alpha_{p(i)}(g e_c) = alpha_i(e_c) for each c
    for (int c = 0; c < m; ++c) {
      QVec coeff(vars, Rat(0));
      for (int r = 0; r < m; ++r)
        coeff[r * m + c] = rat(rd_.simple_root(perm[i])[r]);
      add_row(coeff, rat(rd_.simple_root(i)[c]));
    }
    // (g alpha_i^vee)_r = alpha_{p(i)}^vee_r
    for (int r = 0; r < m; ++r) {
      QVec coeff(vars, Rat(0));
      for (int c = 0; c < m; ++c) coeff[r * m + c] = rat(rd_.simple_coroot(i)[c]);
      add_row(coeff, rat(rd_.simple_coroot(perm[i])[r]));
    }
  }
  // Gaussian elimination; require full rank in the unknowns.
  std::size_t rr = 0;
  std::vector<int> pivot_of_var(vars, -1);
  for (int c = 0; c < vars && rr < rows.size(); ++c) {
    std::size_t piv = rr;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rr]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rr || rows[r][c] == 0) continue;
      Rat f = rows[r][c] / rows[rr][c];
      for (int j = c; j <= vars; ++j) rows[r][j] -= f * rows[rr][j];
    }
    pivot_of_var[c] = static_cast<int>(rr);
    ++rr;
  }
  for (std::size_t r = rr; r < rows.size(); ++r)
    if (rows[r][vars] != 0)
      throw std::invalid_argument("sigma permutation is inconsistent with the datum");
  for (int c = 0; c < vars; ++c)
    if (pivot_of_var[c] < 0)
      throw std::invalid_argument(
          "sigma permutation does not determine a unique lattice map; "
          "provide an explicit sigma matrix");
  IMat g(m, IVec(m, 0));
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) {
      int var = r * m + c;
      Rat val = rows[pivot_of_var[var]][vars] / rows[pivot_of_var[var]][var];
      if (!is_integer(val))
        throw std::invalid_argument("sigma permutation forces a non-integral map");
      g[r][c] = to_i64(val);
    }
  return sigma_from_matrix(g);
}

AffineWeyl::Elt AffineWeyl::apply_sigma(const Sigma& s, Elt a) {
  const Node& na = pool_[a];
  return make(mat_apply(s.g, na.t), s.twist[na.u]);
}

void AffineWeyl::validate_parahoric(const ParahoricType& k) const {
  std::vector<int> sorted = k.nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("parahoric type has a repeated node");
  if (sorted != k.nodes)
    throw std::invalid_argument("parahoric type nodes must be sorted");
  for (int j : k.nodes)
    if (j < 0 || j >= n_affine())
      throw std::invalid_argument("parahoric node out of range");
  for (int c = 0; c < rd_.n_components(); ++c) {
    int total = 0, present = 0;
    for (int j = 0; j < n_affine(); ++j)
      if (affine_component_[j] == c) {
        ++total;
        if (k.contains(j)) ++present;
      }
    if (total > 0 && present == total)
      throw std::invalid_argument(
          "parahoric type contains a whole affine component (W_K infinite)");
  }
}

bool AffineWeyl::sigma_stable(const Sigma& s, const ParahoricType& k) const {
  for (int j : k.nodes)
    if (!k.contains(s.affine_perm[j])) return false;
  return true;
}

bool AffineWeyl::is_left_minimal(const ParahoricType& k, Elt a) {
  for (int j : k.nodes)
    if (has_left_descent(a, j)) return false;
  return true;
}

bool AffineWeyl::is_right_minimal(const ParahoricType& k, Elt a) {
  for (int j : k.nodes)
    if (has_right_descent(a, j)) return false;
  return true;
}

AffineWeyl::Elt AffineWeyl::coset_min_left(const ParahoricType& k, Elt a) {
  Elt cur = a;
  for (;;) {
    int desc = -1;
    for (int j : k.nodes)
      if (has_left_descent(cur, j)) {
        desc = j;
        break;
      }
    if (desc < 0) return cur;
    cur = simple_left(desc, cur);
  }
}

AffineWeyl::Elt AffineWeyl::coset_min_right(const ParahoricType& k, Elt a) {
  Elt cur = a;
  for (;;) {
    int desc = -1;
    for (int j : k.nodes)
      if (has_right_descent(cur, j)) {
        desc = j;
        break;
      }
    if (desc < 0) return cur;
    cur = simple_right(cur, desc);
  }
}

AffineWeyl::Elt AffineWeyl::coset_min_double(const ParahoricType& k, Elt a) {
  Elt cur = a;
  for (;;) {
    Elt next = coset_min_right(k, coset_min_left(k, cur));
    if (next == cur) return cur;
    cur = next;
  }
}

const std::vector<AffineWeyl::Elt>& AffineWeyl::subgroup(const ParahoricType& k) {
  std::string key = nodes_key(k.nodes);
  auto it = subgroup_cache_.find(key);
  if (it != subgroup_cache_.end()) return it->second;
  validate_parahoric(k);
  std::unordered_set<Elt> seen{identity()};
  std::deque<Elt> q{identity()};
  while (!q.empty()) {
    Elt x = q.front();
    q.pop_front();
    for (int j : k.nodes) {
      Elt y = simple_left(j, x);
      if (!seen.count(y)) {
        if (seen.size() >= kMaxSubgroup)
          throw std::logic_error("parahoric subgroup failed to close");
        seen.insert(y);
        q.push_back(y);
      }
    }
  }
  std::vector<Elt> elems(seen.begin(), seen.end());
  sort_canonical(elems);
  return subgroup_cache_.emplace(std::move(key), std::move(elems)).first->second;
}

bool AffineWeyl::in_subgroup(const ParahoricType& k, Elt a) {
  Elt cur = a;
  for (;;) {
    if (length(cur) == 0) return cur == identity();
    int desc = -1;
    for (int j : k.nodes)
      if (has_left_descent(cur, j)) {
        desc = j;
        break;
      }
    if (desc < 0) return false;
    cur = simple_left(desc, cur);
  }
}

AffineWeyl::Elt AffineWeyl::max_min_rep(const ParahoricType& k, Elt a) {
  Elt dmin = coset_min_double(k, a);
  std::unordered_set<Elt> right_min;
  for (Elt u : subgroup(k)) right_min.insert(coset_min_right(k, multiply(u, dmin)));
  Elt best = dmin;
  for (Elt e : right_min)
    if (length(e) > length(best)) best = e;
  for (Elt e : right_min)
    if (e != best && length(e) == length(best))
      throw std::logic_error("double coset has two maximal right-minimal elements");
  return best;
}

std::string AffineWeyl::to_string(Elt a) const {
  const Node& na = pool_[a];
  std::string out = "t[";
  for (int r = 0; r < rd_.rank(); ++r) {
    if (r) out += ",";
    out += std::to_string(na.t[r]);
  }
  out += "]*w[";
  const std::vector<int>& perm = rd_.display_perm(na.u);
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(perm[i]);
  }
  return out + "]";
}

std::optional<AffineWeyl::Elt> AffineWeyl::parse(const std::string& text) {
  auto read_list = [](const std::string& s, std::size_t& pos,
                      std::vector<i64>& out) -> bool {
    if (pos >= s.size() || s[pos] != '[') return false;
    ++pos;
    if (pos < s.size() && s[pos] == ']') {
      ++pos;
      return true;
    }
    for (;;) {
      std::size_t end = pos;
      while (end < s.size() && s[end] != ',' && s[end] != ']') ++end;
      if (end == pos || end >= s.size()) return false;
      try {
        out.push_back(std::stoll(s.substr(pos, end - pos)));
      } catch (...) {
        return false;
      }
      pos = end;
      if (s[pos] == ']') {
        ++pos;
        return true;
      }
      ++pos;
    }
  };
  std::size_t pos = 0;
  if (text.rfind("t", 0) != 0) return std::nullopt;
  pos = 1;
  std::vector<i64> t;
  if (!read_list(text, pos, t)) return std::nullopt;
  if (text.compare(pos, 2, "*w") != 0) return std::nullopt;
  pos += 2;
  std::vector<i64> perm64;
  if (!read_list(text, pos, perm64) || pos != text.size()) return std::nullopt;
  if (static_cast<int>(t.size()) != rd_.rank()) return std::nullopt;
  std::vector<int> perm(perm64.begin(), perm64.end());
  auto u = rd_.w0_from_display(perm);
  if (!u) return std::nullopt;
  return make(t, *u);
}

bool AffineWeyl::canonical_less(Elt a, Elt b) const {
  const Node& na = pool_[a];
  const Node& nb = pool_[b];
  if (na.len != nb.len) return na.len < nb.len;
  if (na.t != nb.t) return na.t < nb.t;
  return na.u < nb.u;
}

void AffineWeyl::sort_canonical(std::vector<Elt>& v) const {
  std::sort(v.begin(), v.end(), [this](Elt a, Elt b) { return canonical_less(a, b); });
}

}  // namespace strat
