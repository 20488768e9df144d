#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

// Exact arithmetic primitives. Everything in this library that is not a
// plain lattice integer is an mpq rational; no floating point anywhere.

namespace strat {

using i64 = long long;
using u16 = std::uint16_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;

using IVec = std::vector<i64>;
using IMat = std::vector<IVec>;  // row-major

using Rat = mpq_class;
using QVec = std::vector<Rat>;

inline Rat rat(i64 num, i64 den = 1) {
  Rat q(static_cast<long>(num), static_cast<long>(den));
  q.canonicalize();
  return q;
}

inline Rat rat_from_string(const std::string& text) {
  Rat q(text);
  q.canonicalize();
  return q;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline i64 to_i64(const Rat& q) { return q.get_num().get_si(); }

inline std::string to_string(const Rat& q) { return q.get_str(); }

inline QVec to_qvec(const IVec& v) {
  QVec out;
  out.reserve(v.size());
  for (i64 x : v) out.push_back(rat(x));
  return out;
}

inline std::vector<std::string> to_strings(const QVec& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const Rat& q : v) out.push_back(q.get_str());
  return out;
}

inline i64 dot(const IVec& a, const IVec& b) {
  i64 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rat dot(const QVec& a, const IVec& b) {
  Rat s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * rat(b[i]);
  return s;
}

inline IVec add(const IVec& a, const IVec& b) {
  IVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

inline QVec add(const QVec& a, const QVec& b) {
  QVec c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

// λ ↦ M·λ for an integer matrix acting on column vectors.
inline IVec mat_apply(const IMat& m, const IVec& v) {
  IVec out(m.size(), 0);
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) out[r] += m[r][c] * v[c];
  return out;
}

inline QVec mat_apply(const IMat& m, const QVec& v) {
  QVec out(m.size(), Rat(0));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) out[r] += rat(m[r][c]) * v[c];
  return out;
}

inline IMat mat_mul(const IMat& a, const IMat& b) {
  std::size_t n = a.size(), k = b.size(), mcols = b.empty() ? 0 : b[0].size();
  IMat out(n, IVec(mcols, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (a[i][j] == 0) continue;
      for (std::size_t c = 0; c < mcols; ++c) out[i][c] += a[i][j] * b[j][c];
    }
  return out;
}

inline IMat identity_matrix(std::size_t n) {
  IMat m(n, IVec(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

// Covector composed with a matrix: (f ∘ M)(λ) = f(Mλ), i.e. row·M.
inline IVec covector_compose(const IVec& f, const IMat& m) {
  std::size_t n = m.empty() ? 0 : m[0].size();
  IVec out(n, 0);
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (f[r] == 0) continue;
    for (std::size_t c = 0; c < n; ++c) out[c] += f[r] * m[r][c];
  }
  return out;
}

}  // namespace strat
