#include "stratlas/root_datum.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace strat {

namespace {

constexpr int kMaxRoots = 400;
constexpr std::size_t kMaxW0 = 4000;

std::string mat_key(const IMat& m) {
  std::string k;
  for (const IVec& row : m)
    for (i64 x : row) {
      k += std::to_string(x);
      k += ',';
    }
  return k;
}

std::string ivec_key(const IVec& v) {
  std::string k;
  for (i64 x : v) {
    k += std::to_string(x);
    k += ',';
  }
  return k;
}

std::string perm_key(const std::vector<int>& v) {
  std::string k;
  for (int x : v) {
    k += std::to_string(x);
    k += ',';
  }
  return k;
}

int rational_rank(std::vector<QVec> rows) {
  std::size_t rank = 0;
  std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      Rat f = rows[r][c] / rows[rank][c];
      for (std::size_t j = c; j < cols; ++j) rows[r][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

// All leading principal minors positive, by exact elimination.
bool positive_definite(std::vector<QVec> m) {
  std::size_t n = m.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (m[k][k] <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      Rat f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return true;
}

// Solve b = sum c_i basis_i over Q. The basis vectors are linearly
// independent; returns nullopt when b is outside their span.
std::optional<QVec> solve_in_basis(const std::vector<IVec>& basis, const QVec& b) {
  int n = static_cast<int>(basis.size());
  int m = static_cast<int>(b.size());
  std::vector<QVec> rows(m, QVec(n + 1, Rat(0)));
  for (int r = 0; r < m; ++r) {
    for (int i = 0; i < n; ++i) rows[r][i] = rat(basis[i][r]);
    rows[r][n] = b[r];
  }
  int rr = 0;
  std::vector<int> pivot_col;
  for (int c = 0; c < n && rr < m; ++c) {
    int piv = -1;
    for (int r = rr; r < m; ++r)
      if (rows[r][c] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(rows[piv], rows[rr]);
    for (int r = 0; r < m; ++r) {
      if (r == rr || rows[r][c] == 0) continue;
      Rat f = rows[r][c] / rows[rr][c];
      for (int j = c; j <= n; ++j) rows[r][j] -= f * rows[rr][j];
    }
    pivot_col.push_back(c);
    ++rr;
  }
  for (int r = rr; r < m; ++r)
    if (rows[r][n] != 0) return std::nullopt;
  QVec coef(n, Rat(0));
  for (std::size_t r = 0; r < pivot_col.size(); ++r)
    coef[pivot_col[r]] = rows[r][n] / rows[r][pivot_col[r]];
  return coef;
}

}  // namespace

RootDatum RootDatum::from_spec(const RootDatumSpec& spec) {
  RootDatum rd;
  rd.rank_ = spec.rank;
  rd.simple_roots_ = spec.simple_roots;
  rd.simple_coroots_ = spec.simple_coroots;
  rd.name_ = spec.name;
  rd.family_ = spec.family;
  rd.build();
  return rd;
}

void RootDatum::build() {
  int n = static_cast<int>(simple_roots_.size());
  if (rank_ <= 0) throw std::invalid_argument("rank must be positive");
  if (static_cast<int>(simple_coroots_.size()) != n)
    throw std::invalid_argument("simple root and coroot counts differ");
  if (n > rank_)
    throw std::invalid_argument("more simple roots than the lattice rank");
  for (const IVec& v : simple_roots_)
    if (static_cast<int>(v.size()) != rank_)
      throw std::invalid_argument("simple root has wrong length");
  for (const IVec& v : simple_coroots_)
    if (static_cast<int>(v.size()) != rank_)
      throw std::invalid_argument("simple coroot has wrong length");

  // Cartan matrix c[i][j] = <alpha_j^vee, alpha_i>.
  IMat cartan(n, IVec(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cartan[i][j] = dot(simple_roots_[i], simple_coroots_[j]);
  for (int i = 0; i < n; ++i) {
    if (cartan[i][i] != 2)
      throw std::invalid_argument("Cartan diagonal entry is not 2");
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (cartan[i][j] > 0)
        throw std::invalid_argument("positive off-diagonal Cartan entry");
      if ((cartan[i][j] == 0) != (cartan[j][i] == 0))
        throw std::invalid_argument("Cartan matrix has one-sided zero");
    }
  }
  {
    std::vector<QVec> simples_q, cosimples_q;
    for (const IVec& v : simple_roots_) simples_q.push_back(to_qvec(v));
    for (const IVec& v : simple_coroots_) cosimples_q.push_back(to_qvec(v));
    if (rational_rank(simples_q) != n || rational_rank(cosimples_q) != n)
      throw std::invalid_argument("simple roots or coroots are dependent");
  }

  // Connected components of the Dynkin diagram.
  comp_of_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (comp_of_[i] >= 0) continue;
    int c = static_cast<int>(components_.size());
    components_.emplace_back();
    std::deque<int> q{i};
    comp_of_[i] = c;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      components_[c].push_back(x);
      for (int j = 0; j < n; ++j)
        if (comp_of_[j] < 0 && cartan[x][j] != 0) {
          comp_of_[j] = c;
          q.push_back(j);
        }
    }
    std::sort(components_[c].begin(), components_[c].end());
  }

  // Finite type: the symmetrized Cartan matrix must be positive definite.
  {
    QVec d(n, Rat(0));
    for (const auto& comp : components_) {
      d[comp[0]] = 1;
      std::deque<int> q{comp[0]};
      while (!q.empty()) {
        int x = q.front();
        q.pop_front();
        for (int j : comp) {
          if (j == x || cartan[x][j] == 0) continue;
          Rat dj = d[x] * rat(cartan[x][j]) / rat(cartan[j][x]);
          if (d[j] == 0) {
            d[j] = dj;
            q.push_back(j);
          } else if (d[j] != dj) {
            throw std::invalid_argument("Cartan matrix is not symmetrizable");
          }
        }
      }
    }
    std::vector<QVec> sym(n, QVec(n, Rat(0)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) sym[i][j] = d[i] * rat(cartan[i][j]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (sym[i][j] != sym[j][i])
          throw std::invalid_argument("Cartan matrix is not symmetrizable");
    if (!positive_definite(sym))
      throw std::invalid_argument(
          "Cartan matrix is not of finite type (Weyl group would be infinite)");
  }

  // Close the simple (root, coroot) pairs under simple reflections.
  std::vector<QVec> expansions;  // coefficients of each positive root
  {
    std::unordered_map<std::string, int> seen;
    std::deque<std::pair<IVec, IVec>> q;
    std::vector<std::pair<IVec, IVec>> all;
    for (int i = 0; i < n; ++i) {
      seen[ivec_key(simple_roots_[i])] = i;
      all.emplace_back(simple_roots_[i], simple_coroots_[i]);
      q.emplace_back(simple_roots_[i], simple_coroots_[i]);
    }
    while (!q.empty()) {
      auto [b, bv] = q.front();
      q.pop_front();
      for (int i = 0; i < n; ++i) {
        IVec rb = b, rbv = bv;
        i64 p = dot(b, simple_coroots_[i]);
        i64 pv = dot(simple_roots_[i], bv);
        for (int c = 0; c < rank_; ++c) {
          rb[c] -= p * simple_roots_[i][c];
          rbv[c] -= pv * simple_coroots_[i][c];
        }
        if (!seen.count(ivec_key(rb))) {
          seen[ivec_key(rb)] = static_cast<int>(all.size());
          all.emplace_back(rb, rbv);
          q.emplace_back(rb, rbv);
          if (static_cast<int>(all.size()) > kMaxRoots)
            throw std::invalid_argument("root system failed to close (not finite)");
        }
      }
    }
    std::vector<std::pair<IVec, IVec>> pos;
    std::vector<QVec> pos_exp;
    for (auto& [b, bv] : all) {
      auto coef = solve_in_basis(simple_roots_, to_qvec(b));
      if (!coef) throw std::logic_error("root outside the simple-root span");
      int sign = 0;
      for (const Rat& c : *coef) {
        if (c > 0) sign = sign >= 0 ? 1 : 2;
        if (c < 0) sign = sign <= 0 ? -1 : 2;
      }
      if (sign == 0 || sign == 2)
        throw std::logic_error("root with mixed-sign expansion");
      if (sign > 0) {
        pos.emplace_back(b, bv);
        pos_exp.push_back(*coef);
      }
    }
    std::vector<std::size_t> order(pos.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return ivec_key(pos[x].first) < ivec_key(pos[y].first);
    });
    n_pos_ = static_cast<int>(pos.size());
    for (std::size_t i : order) {
      roots_.push_back(pos[i].first);
      coroots_.push_back(pos[i].second);
      expansions.push_back(pos_exp[i]);
    }
    for (std::size_t i : order) {
      IVec nb = pos[i].first, nbv = pos[i].second;
      for (auto& x : nb) x = -x;
      for (auto& x : nbv) x = -x;
      roots_.push_back(nb);
      coroots_.push_back(nbv);
    }
    rho2_.assign(rank_, 0);
    for (int p = 0; p < n_pos_; ++p) rho2_ = add(rho2_, roots_[p]);
  }

  // Enumerate W0 as matrices on the lattice.
  {
    std::vector<IMat> gens;
    for (int i = 0; i < n; ++i) {
      IMat s = identity_matrix(rank_);
      for (int r = 0; r < rank_; ++r)
        for (int c = 0; c < rank_; ++c)
          s[r][c] -= simple_coroots_[i][r] * simple_roots_[i][c];
      gens.push_back(std::move(s));
    }
    w0_mats_.push_back(identity_matrix(rank_));
    mat_index_[mat_key(w0_mats_[0])] = 0;
    std::deque<u16> q{0};
    while (!q.empty()) {
      u16 x = q.front();
      q.pop_front();
      for (const IMat& g : gens) {
        IMat y = mat_mul(g, w0_mats_[x]);
        std::string k = mat_key(y);
        if (!mat_index_.count(k)) {
          if (w0_mats_.size() >= kMaxW0)
            throw std::invalid_argument("Weyl group too large for this build");
          u16 id = static_cast<u16>(w0_mats_.size());
          mat_index_[k] = id;
          w0_mats_.push_back(std::move(y));
          q.push_back(id);
        }
      }
    }
    int order = static_cast<int>(w0_mats_.size());
    simple_refl_.resize(n);
    for (int i = 0; i < n; ++i) simple_refl_[i] = mat_index_.at(mat_key(gens[i]));
    mult_.assign(order, std::vector<u16>(order));
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        mult_[a][b] = mat_index_.at(mat_key(mat_mul(w0_mats_[a], w0_mats_[b])));
    inv_.resize(order);
    for (int a = 0; a < order; ++a)
      for (int b = 0; b < order; ++b)
        if (mult_[a][b] == 0) inv_[a] = static_cast<u16>(b);

    std::unordered_map<std::string, int> root_idx;
    for (int p = 0; p < 2 * n_pos_; ++p) root_idx[ivec_key(roots_[p])] = p;
    root_act_.assign(order, std::vector<std::pair<int, int>>(n_pos_));
    for (int a = 0; a < order; ++a)
      for (int p = 0; p < n_pos_; ++p) {
        // a · alpha = alpha ∘ a^{-1}
        IVec img = covector_compose(roots_[p], w0_mats_[inv_[a]]);
        int q2 = root_idx.at(ivec_key(img));
        root_act_[a][p] = q2 < n_pos_ ? std::make_pair(q2, 1)
                                      : std::make_pair(q2 - n_pos_, -1);
      }
    w0_len_.resize(order);
    for (int a = 0; a < order; ++a) {
      i64 len = 0;
      for (int p = 0; p < n_pos_; ++p)
        if (root_act_[a][p].second < 0) ++len;
      w0_len_[a] = len;
    }
  }

  // Highest root per component: maximal height among roots supported there.
  {
    highest_.assign(components_.size(), -1);
    std::vector<Rat> best(components_.size(), Rat(0));
    for (int p = 0; p < n_pos_; ++p) {
      int comp = -1;
      Rat h(0);
      for (int i = 0; i < n; ++i) {
        if (expansions[p][i] != 0 && comp < 0) comp = comp_of_[i];
        h += expansions[p][i];
      }
      if (comp < 0) throw std::logic_error("positive root with empty support");
      if (highest_[comp] < 0 || h > best[comp]) {
        highest_[comp] = p;
        best[comp] = h;
      }
    }
  }

  // Display slots: a faithful finite set of weight covectors permuted by W0.
  {
    std::vector<IVec> slots;
    if (family_ == Family::GL) {
      for (int j = 0; j < rank_; ++j) {
        IVec f(rank_, 0);
        f[j] = 1;
        slots.push_back(f);
      }
    } else if (family_ == Family::GSp) {
      int g = rank_ - 1;
      for (int j = 0; j < g; ++j) {
        IVec f(rank_, 0);
        f[j] = 1;
        slots.push_back(f);
      }
      for (int j = g - 1; j >= 0; --j) {
        IVec f(rank_, 0);
        f[j] = -1;
        f[g] = 1;  // c - a_j
        slots.push_back(f);
      }
    } else {
      slots.assign(roots_.begin(), roots_.end());
    }
    std::unordered_map<std::string, int> slot_idx;
    for (std::size_t j = 0; j < slots.size(); ++j)
      slot_idx[ivec_key(slots[j])] = static_cast<int>(j);
    display_.resize(w0_order());
    for (int a = 0; a < w0_order(); ++a) {
      std::vector<int> perm(slots.size());
      for (std::size_t j = 0; j < slots.size(); ++j) {
        IVec img = covector_compose(slots[j], w0_mats_[inv_[a]]);  // a · f_j
        auto it = slot_idx.find(ivec_key(img));
        if (it == slot_idx.end())
          throw std::logic_error("display slots not permuted by the Weyl group");
        perm[j] = it->second + 1;  // 1-based
      }
      display_index_[perm_key(perm)] = static_cast<u16>(a);
      display_[a] = std::move(perm);
    }
  }

  {
    std::vector<IVec> rel;
    for (int i = 0; i < n; ++i) rel.push_back(simple_coroots_[i]);
    pi1_ = AbelianQuotient(rank_, rel);
  }
}

std::optional<u16> RootDatum::w0_index_of(const IMat& m) const {
  auto it = mat_index_.find(mat_key(m));
  if (it == mat_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<u16> RootDatum::w0_from_display(const std::vector<int>& perm) const {
  auto it = display_index_.find(perm_key(perm));
  if (it == display_index_.end()) return std::nullopt;
  return it->second;
}

std::pair<IVec, u16> RootDatum::dominant_representative(const IVec& v) const {
  IVec cur = v;
  u16 w = 0;
  for (;;) {
    int neg = -1;
    for (int i = 0; i < n_simple(); ++i)
      if (dot(simple_roots_[i], cur) < 0) {
        neg = i;
        break;
      }
    if (neg < 0) return {cur, w};
    cur = w0_apply(simple_refl_[neg], cur);
    w = w0_mult(simple_refl_[neg], w);
  }
}

std::pair<QVec, u16> RootDatum::dominant_representative(const QVec& v) const {
  QVec cur = v;
  u16 w = 0;
  for (;;) {
    int neg = -1;
    for (int i = 0; i < n_simple(); ++i)
      if (dot(cur, simple_roots_[i]) < 0) {
        neg = i;
        break;
      }
    if (neg < 0) return {cur, w};
    cur = w0_apply(simple_refl_[neg], cur);
    w = w0_mult(simple_refl_[neg], w);
  }
}

bool RootDatum::dominance_leq(const QVec& la, const QVec& mu) const {
  if (!is_dominant(la) || !is_dominant(mu))
    throw std::invalid_argument("dominance_leq requires dominant arguments");
  QVec diff(rank_);
  for (int r = 0; r < rank_; ++r) diff[r] = mu[r] - la[r];
  auto coef = solve_in_basis(simple_coroots_, diff);
  if (!coef) return false;  // difference leaves the coroot span
  for (const Rat& c : *coef)
    if (c < 0) return false;
  return true;
}

Rat RootDatum::rho_pairing(const QVec& la, int factor) const {
  if (factor != 1 && factor != 2)
    throw std::invalid_argument("rho_pairing factor must be 1 or 2");
  QVec dom = dominant_representative(la).first;
  Rat v = dot(dom, rho2_);
  return factor == 2 ? v : v / 2;
}

AbelianQuotient RootDatum::coinvariants(const IMat& sigma) const {
  std::vector<IVec> rel;
  for (int i = 0; i < n_simple(); ++i) rel.push_back(simple_coroots_[i]);
  for (int j = 0; j < rank_; ++j) {
    IVec img(rank_);
    for (int r = 0; r < rank_; ++r) img[r] = sigma[r][j] - (r == j ? 1 : 0);
    rel.push_back(img);
  }
  return AbelianQuotient(rank_, rel);
}

RootDatum RootDatum::from_label(const std::string& label) {
  auto parse_arg = [&](const std::string& prefix) -> std::optional<int> {
    if (label.size() < prefix.size() + 3 ||
        label.compare(0, prefix.size(), prefix) != 0)
      return std::nullopt;
    if (label[prefix.size()] != '(' || label.back() != ')') return std::nullopt;
    return std::stoi(
        label.substr(prefix.size() + 1, label.size() - prefix.size() - 2));
  };
  RootDatumSpec spec;
  spec.name = label;
  if (auto arg = parse_arg("GL")) {
    int nn = *arg;
    if (nn < 1) throw std::invalid_argument("GL(n) needs n >= 1");
    spec.rank = nn;
    spec.family = Family::GL;
    for (int i = 0; i + 1 < nn; ++i) {
      IVec a(nn, 0), av(nn, 0);
      a[i] = 1;
      a[i + 1] = -1;
      av[i] = 1;
      av[i + 1] = -1;
      spec.simple_roots.push_back(a);
      spec.simple_coroots.push_back(av);
    }
    return from_spec(spec);
  }
  if (auto arg = parse_arg("SL")) {
    int nn = *arg;
    if (nn < 2) throw std::invalid_argument("SL(n) needs n >= 2");
    int r = nn - 1;
    spec.rank = r;
    spec.family = Family::SL;
    for (int i = 0; i < r; ++i) {
      IVec a(r, 0), av(r, 0);
      av[i] = 1;
      a[i] = 2;
      if (i > 0) a[i - 1] = -1;
      if (i + 1 < r) a[i + 1] = -1;
      spec.simple_roots.push_back(a);
      spec.simple_coroots.push_back(av);
    }
    return from_spec(spec);
  }
  if (auto arg = parse_arg("GSp")) {
    int nn = *arg;
    if (nn < 2 || nn % 2 != 0)
      throw std::invalid_argument("GSp(2g) needs an even argument >= 2");
    int g = nn / 2;
    // Coordinates (a_1, ..., a_g, c): the cocharacter
    // t -> diag(t^{a_1}, ..., t^{a_g}, t^{c-a_g}, ..., t^{c-a_1})
    // of the symplectic similitude group, with multiplier t^c.
    spec.rank = g + 1;
    spec.family = Family::GSp;
    for (int i = 0; i + 1 < g; ++i) {
      IVec a(g + 1, 0), av(g + 1, 0);
      a[i] = 1;
      a[i + 1] = -1;
      av[i] = 1;
      av[i + 1] = -1;
      spec.simple_roots.push_back(a);
      spec.simple_coroots.push_back(av);
    }
    IVec a(g + 1, 0), av(g + 1, 0);
    a[g - 1] = 2;
    a[g] = -1;  // 2 a_g - c, the long simple root
    av[g - 1] = 1;
    spec.simple_roots.push_back(a);
    spec.simple_coroots.push_back(av);
    return from_spec(spec);
  }
  throw std::invalid_argument("unknown root datum label: " + label);
}

RootDatum RootDatum::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  RootDatumSpec spec;
  spec.rank = j.at("rank").get<int>();
  for (const auto& row : j.at("simple_roots"))
    spec.simple_roots.push_back(row.get<IVec>());
  for (const auto& row : j.at("simple_coroots"))
    spec.simple_coroots.push_back(row.get<IVec>());
  spec.name = j.value("name", std::string("user"));
  spec.family = Family::User;
  return from_spec(spec);
}

std::string RootDatum::to_json_text() const {
  nlohmann::ordered_json j;
  j["name"] = name_;
  j["rank"] = rank_;
  j["simple_roots"] = simple_roots_;
  j["simple_coroots"] = simple_coroots_;
  return j.dump();
}

}  // namespace strat
