#pragma once

// Reference computations kept apart from the library: plain long double
// bisection, textbook determinants and hand-reduced closed forms.

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

namespace oracle {

using ld = long double;

/// x^n - k (1 + x + ... + x^(n-2)), summed term by term.
inline ld defining_poly(int n, ld k, ld x) {
  ld s = 0;
  for (int i = 0; i <= n - 2; ++i) s += std::pow(x, static_cast<ld>(i));
  return std::pow(x, static_cast<ld>(n)) - k * s;
}

/// 200 bisection steps on [1, 2]; the polynomial is negative at 1 and
/// positive at 2 for every n >= 3 and k in {1, 2}.
inline ld bisect_root(int n, ld k) {
  ld lo = 1, hi = 2;
  for (int it = 0; it < 200; ++it) {
    const ld mid = (lo + hi) / 2;
    if (defining_poly(n, k, mid) > 0)
      hi = mid;
    else
      lo = mid;
  }
  return (lo + hi) / 2;
}

inline ld beta(int n) { return bisect_root(n, 1); }
inline ld lambda(int n) { return bisect_root(n, 2); }

/// Laplace expansion along the first row. Only for small matrices.
inline ld cofactor_det(const std::vector<std::vector<ld>>& m) {
  const std::size_t k = m.size();
  if (k == 1) return m[0][0];
  ld det = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (m[0][j] == 0) continue;
    std::vector<std::vector<ld>> minor;
    for (std::size_t r = 1; r < k; ++r) {
      std::vector<ld> row;
      for (std::size_t c = 0; c < k; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    det += ((j % 2 == 0) ? 1 : -1) * m[0][j] * cofactor_det(minor);
  }
  return det;
}

/// Bareiss fraction-free elimination with row swaps.
inline ld bareiss_det(std::vector<std::vector<ld>> m) {
  const std::size_t k = m.size();
  ld sign = 1, prev = 1;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    if (m[i][i] == 0) {
      std::size_t r = i + 1;
      while (r < k && m[r][i] == 0) ++r;
      if (r == k) return 0;
      std::swap(m[i], m[r]);
      sign = -sign;
    }
    for (std::size_t r = i + 1; r < k; ++r)
      for (std::size_t c = i + 1; c < k; ++c) m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]) / prev;
    prev = m[i][i];
  }
  return sign * m[k - 1][k - 1];
}

/// det(x I - S) for a 0/1 matrix.
template <class Det>
ld char_poly(const std::vector<std::vector<int>>& s, ld x, Det det) {
  std::vector<std::vector<ld>> m(s.size(), std::vector<ld>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) m[i][j] = (i == j ? x : 0) - s[i][j];
  return det(m);
}

/// The 5x5 matrix S_3 as displayed: A->B, B->C, C->A,B,D,E, D->C, E->D.
inline std::vector<std::vector<int>> s3() {
  return {{0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}, {1, 1, 0, 1, 1}, {0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}};
}

// n = 3 closed forms, reduced with lambda^3 = 2 lambda + 2.
inline ld inv_cd_n3(ld lam) { return lam * lam * lam + 2 * lam + 4; }
inline ld induced_entropy_n3(ld lam) { return std::log(lam) * (3 + 2 * lam) / (lam + 1); }

/// One application of K in long double, coin used only in [a, b].
inline ld k_step(ld x, int coin, ld beta, ld a, ld b) {
  if (x < a) return beta * x;
  if (x > b) return beta * x - 1;
  return beta * x - coin;
}

/// Partial sum of d_i beta^-i.
inline ld digits_value(const std::vector<int>& d, ld beta) {
  ld s = 0, w = 1;
  for (int v : d) {
    w /= beta;
    s += v * w;
  }
  return s;
}

}  // namespace oracle
