#include "stratlas/abelian.hpp"

#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace strat {

namespace {

void swap_rows(IMat& a, IMat& u, std::size_t i, std::size_t j) {
  std::swap(a[i], a[j]);
  std::swap(u[i], u[j]);
}

void swap_cols(IMat& a, IMat& v, std::size_t i, std::size_t j) {
  for (auto& row : a) std::swap(row[i], row[j]);
  for (auto& row : v) std::swap(row[i], row[j]);
}

void add_row(IMat& a, IMat& u, std::size_t dst, std::size_t src, i64 f) {
  for (std::size_t c = 0; c < a[dst].size(); ++c) a[dst][c] += f * a[src][c];
  for (std::size_t c = 0; c < u[dst].size(); ++c) u[dst][c] += f * u[src][c];
}

void add_col(IMat& a, IMat& v, std::size_t dst, std::size_t src, i64 f) {
  for (auto& row : a) row[dst] += f * row[src];
  for (auto& row : v) row[dst] += f * row[src];
}

void negate_row(IMat& a, IMat& u, std::size_t i) {
  for (auto& x : a[i]) x = -x;
  for (auto& x : u[i]) x = -x;
}

}  // namespace

SmithDecomposition smith_normal_form(const IMat& a_in) {
  std::size_t m = a_in.size();
  std::size_t n = m == 0 ? 0 : a_in[0].size();
  SmithDecomposition s;
  s.d = a_in;
  s.u = identity_matrix(m);
  s.v = identity_matrix(n);
  IMat& a = s.d;

  std::size_t k = std::min(m, n);
  for (std::size_t t = 0; t < k; ++t) {
    for (;;) {
      // locate the minimal nonzero entry of the trailing block
      std::size_t pi = t, pj = t;
      i64 best = 0;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (a[i][j] != 0 && (best == 0 || std::llabs(a[i][j]) < best)) {
            best = std::llabs(a[i][j]);
            pi = i;
            pj = j;
          }
      if (best == 0) {
        t = k;  // trailing block vanished
        break;
      }
      if (pi != t) swap_rows(a, s.u, t, pi);
      if (pj != t) swap_cols(a, s.v, t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i)
        if (a[i][t] != 0) {
          add_row(a, s.u, i, t, -(a[i][t] / a[t][t]));
          if (a[i][t] != 0) clean = false;
        }
      for (std::size_t j = t + 1; j < n; ++j)
        if (a[t][j] != 0) {
          add_col(a, s.v, j, t, -(a[t][j] / a[t][t]));
          if (a[t][j] != 0) clean = false;
        }
      if (!clean) continue;
      // pivot must divide the rest of the block
      bool divides = true;
      for (std::size_t i = t + 1; i < m && divides; ++i)
        for (std::size_t j = t + 1; j < n && divides; ++j)
          if (a[i][j] % a[t][t] != 0) {
            add_row(a, s.u, t, i, 1);
            divides = false;
          }
      if (divides) break;
    }
    if (t >= k) break;
  }
  for (std::size_t t = 0; t < k; ++t)
    if (a[t][t] < 0) negate_row(a, s.u, t);
  return s;
}

AbelianQuotient::AbelianQuotient(int ambient_rank,
                                 const std::vector<IVec>& relation_columns)
    : m_(ambient_rank) {
  for (const IVec& c : relation_columns)
    if (static_cast<int>(c.size()) != ambient_rank)
      throw std::invalid_argument("relation column has wrong length");
  IMat rel(ambient_rank, IVec(relation_columns.size(), 0));
  for (std::size_t j = 0; j < relation_columns.size(); ++j)
    for (int i = 0; i < ambient_rank; ++i) rel[i][j] = relation_columns[j][i];
  SmithDecomposition s = smith_normal_form(rel);

  int rank = 0;
  std::size_t k = std::min(s.d.size(), relation_columns.size());
  for (std::size_t t = 0; t < k; ++t)
    if (s.d[t][t] != 0) ++rank;
  for (int t = 0; t < rank; ++t) {
    i64 d = s.d[t][t];
    if (d >= 2) {
      torsion_.push_back(d);
      proj_rows_.push_back(s.u[t]);
    }
  }
  free_rank_ = ambient_rank - rank;
  for (int t = rank; t < ambient_rank; ++t) proj_rows_.push_back(s.u[t]);
}

IVec AbelianQuotient::project(const IVec& lambda) const {
  if (static_cast<int>(lambda.size()) != m_)
    throw std::invalid_argument("projection input has wrong length");
  IVec out(proj_rows_.size(), 0);
  for (std::size_t r = 0; r < proj_rows_.size(); ++r) {
    i64 x = dot(proj_rows_[r], lambda);
    if (r < torsion_.size()) {
      x %= torsion_[r];
      if (x < 0) x += torsion_[r];
    }
    out[r] = x;
  }
  return out;
}

IVec AbelianQuotient::add(const IVec& a, const IVec& b) const {
  IVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    c[i] = a[i] + b[i];
    if (i < torsion_.size()) {
      c[i] %= torsion_[i];
      if (c[i] < 0) c[i] += torsion_[i];
    }
  }
  return c;
}

IVec AbelianQuotient::neg(const IVec& a) const {
  IVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    c[i] = -a[i];
    if (i < torsion_.size()) {
      c[i] %= torsion_[i];
      if (c[i] < 0) c[i] += torsion_[i];
    }
  }
  return c;
}

bool AbelianQuotient::is_zero(const IVec& a) const {
  for (i64 x : a)
    if (x != 0) return false;
  return true;
}

std::string AbelianQuotient::describe() const {
  std::string out;
  auto append = [&out](const std::string& part) {
    if (!out.empty()) out += " x ";
    out += part;
  };
  if (free_rank_ == 1) append("Z");
  if (free_rank_ > 1) append("Z^" + std::to_string(free_rank_));
  for (i64 d : torsion_) append("Z/" + std::to_string(d));
  return out.empty() ? "0" : out;
}

}  // namespace strat
