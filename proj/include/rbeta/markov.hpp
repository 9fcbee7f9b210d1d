#pragma once

// Markov partition of the attractor [T1(a), T0(b)] and the Parry measure.
//
// Cells, left to right (2n-1 of them):
//   [T0^k T1(a), T0^(k+1) T1(a)]          k = 0, ..., n-2   (ends at a)
//   [a, b]                                                  (center)
//   [T1^(j+1) T0(b), T1^j T0(b)]          j = n-2, ..., 0   (starts at b)
// T0 pushes each left cell one to the right, T1 pushes each right cell one
// to the left, and the center is spread over every other cell. With
// lambda the Perron value of the adjacency matrix S_n,
//   v = (1, lambda, ..., lambda^(n-1), ..., lambda, 1)              (c = 1)
//   u = d (1, (1+lambda)/lambda, ..., lambda, ..., (1+lambda)/lambda, 1)
//   1/(cd) = 2/(lambda-1) (lambda^(n-1) - n + lambda^n/2) + lambda^n.

#include "rbeta/algebra.hpp"
#include "rbeta/error.hpp"
#include "rbeta/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <span>
#include <string>
#include <vector>

namespace rbeta {

using adjacency_matrix = std::vector<std::vector<int>>;

template <class Real = double>
using real_matrix = std::vector<std::vector<Real>>;

template <class Real = double>
struct markov_cell {
  Real lo{};
  Real hi{};
  std::string label;
};

inline std::size_t cell_count(int n) { return static_cast<std::size_t>(2 * n - 1); }
inline std::size_t center_index(int n) { return static_cast<std::size_t>(n - 1); }

inline std::string cell_label(std::size_t i, int n) {
  if (cell_count(n) <= 26) return std::string(1, static_cast<char>('A' + i));
  return "c" + std::to_string(i);
}

template <class Real>
std::vector<markov_cell<Real>> build_partition(const algebraic_beta<Real>& ctx) {
  const int n = ctx.n;
  const Real& beta = ctx.beta;
  std::vector<markov_cell<Real>> cells;
  cells.reserve(cell_count(n));

  // Left boundaries T0^k T1(a), k = 0..n-1, ending at a; right boundaries
  // T1^j T0(b), j = 0..n-1, ending at b. Both chains are built backwards
  // from their end point so a and b are shared exactly.
  std::vector<Real> left(n);
  left[n - 1] = ctx.a;
  for (int k = n - 2; k >= 0; --k) left[k] = left[k + 1] / beta;
  for (int k = 0; k <= n - 2; ++k) cells.push_back({left[k], left[k + 1], ""});
  cells.push_back({ctx.a, ctx.b, ""});

  std::vector<Real> right(n);
  right[n - 1] = ctx.b;
  for (int j = n - 2; j >= 0; --j) right[j] = (right[j + 1] + 1) / beta;
  for (int j = n - 2; j >= 0; --j) cells.push_back({right[j + 1], right[j], ""});

  for (std::size_t i = 0; i < cells.size(); ++i) cells[i].label = cell_label(i, n);

  using std::abs;
  const Real tol(1e-10);
  for (std::size_t i = 0; i + 1 < cells.size(); ++i) {
    if (!(cells[i].lo < cells[i].hi))
      throw invariant_violation("build_partition: empty cell " + cells[i].label);
    if (abs(cells[i].hi - cells[i + 1].lo) > tol)
      throw invariant_violation("build_partition: gap or overlap after cell " + cells[i].label);
  }
  return cells;
}

/// Rule-based S_n: left cells step right, right cells step left, the
/// center reaches every other cell.
inline adjacency_matrix build_adjacency(int n) {
  detail::require_n(n);
  const std::size_t m = cell_count(n);
  const std::size_t c = center_index(n);
  adjacency_matrix s(m, std::vector<int>(m, 0));
  for (std::size_t i = 0; i < c; ++i) s[i][i + 1] = 1;
  for (std::size_t j = 0; j < m; ++j)
    if (j != c) s[c][j] = 1;
  for (std::size_t i = c + 1; i < m; ++i) s[i][i - 1] = 1;
  return s;
}

template <class Real = double>
struct cell_image {
  std::size_t cell = 0;
  int map = 0;  // 0 for T0, 1 for T1
  Real lo{}, hi{};
};

/// Images of every cell under the branches of K active on it.
template <class Real>
std::vector<cell_image<Real>> cell_images(const std::vector<markov_cell<Real>>& cells,
                                          const algebraic_beta<Real>& ctx) {
  const Real tol(1e-10);
  std::vector<cell_image<Real>> out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i];
    const bool t0 = c.lo < ctx.a + tol;   // part of the cell lies in [0, a]
    const bool t1 = c.hi > ctx.b - tol;   // part of the cell lies in [b, max]
    const bool sw = c.lo < ctx.b - tol && c.hi > ctx.a + tol;
    if (t0 || sw) out.push_back({i, 0, ctx.beta * c.lo, ctx.beta * c.hi});
    if (t1 || sw) out.push_back({i, 1, ctx.beta * c.lo - 1, ctx.beta * c.hi - 1});
  }
  return out;
}

/// S_n read off from interval images: cell i -> j when some image of i
/// overlaps the interior of j.
template <class Real>
adjacency_matrix adjacency_from_images(const std::vector<markov_cell<Real>>& cells,
                                       const algebraic_beta<Real>& ctx) {
  using std::max;
  using std::min;
  const Real tol(1e-9);
  adjacency_matrix s(cells.size(), std::vector<int>(cells.size(), 0));
  for (const auto& img : cell_images(cells, ctx))
    for (std::size_t j = 0; j < cells.size(); ++j)
      if (min(img.hi, cells[j].hi) - max(img.lo, cells[j].lo) > tol) s[img.cell][j] = 1;
  return s;
}

/// Largest distance from an image endpoint to the nearest cell endpoint;
/// zero (up to rounding) iff every image is a union of cells.
template <class Real>
Real markov_property_residual(const std::vector<markov_cell<Real>>& cells,
                              const algebraic_beta<Real>& ctx) {
  using std::abs;
  std::vector<Real> ends;
  for (const auto& c : cells) {
    ends.push_back(c.lo);
    ends.push_back(c.hi);
  }
  auto nearest = [&](const Real& y) {
    Real best = abs(y - ends[0]);
    for (const auto& e : ends) best = std::min(best, Real(abs(y - e)));
    return best;
  };
  Real worst{0};
  for (const auto& img : cell_images(cells, ctx)) {
    worst = std::max(worst, nearest(img.lo));
    worst = std::max(worst, nearest(img.hi));
  }
  return worst;
}

/// Single strongly connected component.
inline bool is_irreducible(const adjacency_matrix& s) {
  const std::size_t m = s.size();
  auto reach_all = [&](bool transpose) {
    std::vector<char> seen(m, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      auto i = stack.back();
      stack.pop_back();
      for (std::size_t j = 0; j < m; ++j) {
        int e = transpose ? s[j][i] : s[i][j];
        if (e && !seen[j]) {
          seen[j] = 1;
          stack.push_back(j);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return m > 0 && reach_all(false) && reach_all(true);
}

/// Determinant by Gaussian elimination with partial pivoting.
template <class Real>
Real determinant(real_matrix<Real> m) {
  using std::abs;
  const std::size_t k = m.size();
  Real det{1};
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (abs(m[r][col]) > abs(m[piv][col])) piv = r;
    if (m[piv][col] == 0) return Real{0};
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < k; ++r) {
      Real f = m[r][col] / m[col][col];
      if (f == 0) continue;
      for (std::size_t c = col; c < k; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

/// det(x I - S) evaluated numerically.
template <class Real>
Real char_poly_numeric(const adjacency_matrix& s, const Real& x) {
  real_matrix<Real> m(s.size(), std::vector<Real>(s.size()));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) m[i][j] = (i == j ? x : Real{0}) - Real(s[i][j]);
  return determinant(std::move(m));
}

/// x^(n-1) (x^n - 2 (1 + x + ... + x^(n-2))).
template <class Real>
Real char_poly_closed(int n, const Real& x) {
  return ipow(x, n - 1) * detail::defining_poly(n, Real{2}, x);
}

/// a_3 = x^2 (x^3 - 2x - 2), a_{k+1} = x^2 a_k - 2 x^k.
template <class Real>
Real char_poly_recurrence(int n, const Real& x) {
  detail::require_n(n);
  Real ak = x * x * (x * x * x - 2 * x - 2);
  for (int k = 3; k < n; ++k) ak = x * x * ak - 2 * ipow(x, k);
  return ak;
}

/// Largest relative deviation |det(xI - S_n) - closed(x)| / max(1, |closed(x)|).
template <class Real>
Real char_poly_residual(int n, std::span<const Real> samples) {
  using std::abs;
  const auto s = build_adjacency(n);
  Real worst{0};
  for (const auto& x : samples) {
    Real closed = char_poly_closed(n, x);
    Real num = char_poly_numeric(s, x);
    Real scale = std::max(Real{1}, Real(abs(closed)));
    worst = std::max(worst, Real(abs(num - closed) / scale));
  }
  return worst;
}

template <class Real>
Real inf_norm(std::span<const Real> v) {
  using std::abs;
  Real m{0};
  for (const auto& e : v) m = std::max(m, Real(abs(e)));
  return m;
}

/// ||S v - lambda v||_inf / ||v||_inf.
template <class Real>
Real right_eigen_residual(const adjacency_matrix& s, const Real& lambda,
                          std::span<const Real> v) {
  using std::abs;
  Real worst{0};
  for (std::size_t i = 0; i < s.size(); ++i) {
    Real acc = -lambda * v[i];
    for (std::size_t j = 0; j < s.size(); ++j)
      if (s[i][j]) acc += Real(s[i][j]) * v[j];
    worst = std::max(worst, Real(abs(acc)));
  }
  return worst / inf_norm(v);
}

/// ||u S - lambda u||_inf / ||u||_inf.
template <class Real>
Real left_eigen_residual(const adjacency_matrix& s, const Real& lambda,
                         std::span<const Real> u) {
  using std::abs;
  Real worst{0};
  for (std::size_t j = 0; j < s.size(); ++j) {
    Real acc = -lambda * u[j];
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i][j]) acc += u[i] * Real(s[i][j]);
    worst = std::max(worst, Real(abs(acc)));
  }
  return worst / inf_norm(u);
}

template <class Real = double>
struct eigen_data {
  std::vector<Real> u;
  std::vector<Real> v;
  Real cd{};
  Real inv_cd_closed{};  // 2/(lambda-1) (lambda^(n-1) - n + lambda^n/2) + lambda^n
  Real inv_cd_direct{};  // sum_i u_i v_i / (c d), summed entrywise
  Real right_residual{};
  Real left_residual{};
};

inline constexpr double eigen_tolerance = 1e-10;

/// Perron vectors of S_n from their closed forms, normalized so u.v = 1
/// with c = 1.
template <class Real>
eigen_data<Real> eigen_closed_form(const perron_value<Real>& pv) {
  const int n = pv.n;
  detail::require_n(n);
  const Real& lam = pv.lambda;
  const std::size_t m = cell_count(n);
  const std::size_t c = center_index(n);

  eigen_data<Real> e;
  e.v.assign(m, Real{0});
  std::vector<Real> u_unit(m, Real{0});  // u with d = 1
  Real partial{0};
  for (int k = 0; k <= n - 2; ++k) {
    partial += ipow(lam, k);
    const Real vk = ipow(lam, k);
    const Real uk = partial / ipow(lam, k);
    e.v[k] = vk;
    e.v[m - 1 - k] = vk;
    u_unit[k] = uk;
    u_unit[m - 1 - k] = uk;
  }
  e.v[c] = ipow(lam, n - 1);
  u_unit[c] = lam;

  e.inv_cd_direct = Real{0};
  for (std::size_t i = 0; i < m; ++i) e.inv_cd_direct += u_unit[i] * e.v[i];
  e.inv_cd_closed = Real{2} / (lam - 1) * (ipow(lam, n - 1) - Real(n) + ipow(lam, n) / 2) +
                    ipow(lam, n);
  e.cd = Real{1} / e.inv_cd_closed;
  e.u.resize(m);
  for (std::size_t i = 0; i < m; ++i) e.u[i] = e.cd * u_unit[i];

  const auto s = build_adjacency(n);
  e.right_residual = right_eigen_residual<Real>(s, lam, e.v);
  e.left_residual = left_eigen_residual<Real>(s, lam, e.u);
  if (e.right_residual > Real(eigen_tolerance) || e.left_residual > Real(eigen_tolerance))
    throw invariant_violation("eigen_closed_form: eigen residual above tolerance for n = " +
                              std::to_string(n));
  return e;
}

/// Dominant eigenvalue by power iteration on (S + I), an oracle that does
/// not use any closed form. The shift keeps the iteration aperiodic.
template <class Real = double>
Real power_iteration(const adjacency_matrix& s, const Real& tol = Real(1e-14),
                     int max_iter = 200000) {
  using std::abs;
  const std::size_t m = s.size();
  std::vector<Real> x(m, Real{1}), y(m);
  Real est{0};
  for (int it = 0; it < max_iter; ++it) {
    for (std::size_t i = 0; i < m; ++i) {
      Real acc = x[i];
      for (std::size_t j = 0; j < m; ++j)
        if (s[i][j]) acc += x[j];
      y[i] = acc;
    }
    Real nrm = inf_norm<Real>(y);
    for (auto& e : y) e /= nrm;
    Real next = nrm - 1;
    x.swap(y);
    if (it > 10 && abs(next - est) <= tol * next) return next;
    est = next;
  }
  return est;
}

template <class Real = double>
struct markov_chain {
  int n = 0;
  std::vector<markov_cell<Real>> cells;
  adjacency_matrix adjacency;
  perron_value<Real> lambda;
  std::vector<Real> u, v;
  Real cd{};
  std::vector<Real> p;          // stationary vector p_i = u_i v_i
  real_matrix<Real> transition; // p_ij = a_ij v_j / (lambda v_i)

  std::size_t size() const { return adjacency.size(); }
};

/// Fills p and the transition matrix of the Parry measure from the eigen data.
template <class Real>
void parry_measure(markov_chain<Real>& chain) {
  using std::abs;
  const std::size_t m = chain.size();
  const Real& lam = chain.lambda.lambda;
  chain.p.assign(m, Real{0});
  chain.transition.assign(m, std::vector<Real>(m, Real{0}));
  for (std::size_t i = 0; i < m; ++i) {
    chain.p[i] = chain.u[i] * chain.v[i];
    Real row{0};
    for (std::size_t j = 0; j < m; ++j) {
      chain.transition[i][j] = Real(chain.adjacency[i][j]) * chain.v[j] / (lam * chain.v[i]);
      row += chain.transition[i][j];
    }
    if (abs(row - 1) > Real(1e-10))
      throw invariant_violation("parry_measure: row " + std::to_string(i) + " does not sum to 1");
  }
}

template <class Real = double>
markov_chain<Real> build_markov_chain(int n) {
  detail::require_n(n);
  markov_chain<Real> chain;
  chain.n = n;
  chain.cells = build_partition(solve_beta<Real>(n));
  chain.adjacency = build_adjacency(n);
  chain.lambda = solve_lambda<Real>(n);
  auto e = eigen_closed_form(chain.lambda);
  chain.u = std::move(e.u);
  chain.v = std::move(e.v);
  chain.cd = e.cd;
  parry_measure(chain);
  return chain;
}

/// -sum_i p_i sum_j p_ij log p_ij.
template <class Real>
Real markov_entropy(std::span<const Real> p, const real_matrix<Real>& transition) {
  using std::log;
  Real h{0};
  for (std::size_t i = 0; i < p.size(); ++i)
    for (const auto& q : transition[i])
      if (q > 0) h -= p[i] * q * log(q);
  return h;
}

/// max_j |(p P)_j - p_j|.
template <class Real>
Real stationarity_residual(std::span<const Real> p, const real_matrix<Real>& transition) {
  using std::abs;
  Real worst{0};
  for (std::size_t j = 0; j < p.size(); ++j) {
    Real acc{0};
    for (std::size_t i = 0; i < p.size(); ++i) acc += p[i] * transition[i][j];
    worst = std::max(worst, Real(abs(acc - p[j])));
  }
  return worst;
}

/// mu([w_1 ... w_k]) = p_{w_1} p_{w_1 w_2} ... p_{w_{k-1} w_k}.
template <class Real>
Real cylinder_measure(const markov_chain<Real>& chain, std::span<const std::size_t> word) {
  if (word.empty()) return Real{1};
  for (auto c : word)
    if (c >= chain.size()) throw domain_error("cylinder_measure: cell index out of range");
  Real m = chain.p[word[0]];
  for (std::size_t k = 1; k < word.size(); ++k) m *= chain.transition[word[k - 1]][word[k]];
  return m;
}

/// Entropy of the induced Parry measure on the center: log lambda / (cd lambda^n).
template <class Real = double>
Real induced_parry_entropy(int n) {
  using std::log;
  const auto pv = solve_lambda<Real>(n);
  const auto e = eigen_closed_form(pv);
  return log(pv.lambda) / (e.cd * ipow(pv.lambda, n));
}

template <class Real = double>
struct inequality_row {
  int n = 0;
  Real lambda{};
  Real h_max{};      // log(2n - 2)
  Real h_induced{};  // log lambda / (cd lambda^n)
  Real margin{};
};

template <class Real = double>
inequality_row<Real> inequality_row_for(int n) {
  inequality_row<Real> r;
  r.n = n;
  r.lambda = solve_lambda<Real>(n).lambda;
  r.h_max = mme_entropy<Real>(n);
  r.h_induced = induced_parry_entropy<Real>(n);
  r.margin = r.h_max - r.h_induced;
  return r;
}

/// The induced Parry entropy stays strictly below log(2n - 2) for every
/// n in [n_min, n_max]; rows are computed independently in parallel.
template <class Real = double>
std::vector<inequality_row<Real>> check_inequality(int n_min, int n_max) {
  detail::require_n(n_min);
  if (n_max < n_min) throw domain_error("check_inequality: empty range");
  std::vector<std::future<inequality_row<Real>>> jobs;
  for (int n = n_min; n <= n_max; ++n)
    jobs.push_back(std::async(std::launch::async, [n] { return inequality_row_for<Real>(n); }));
  std::vector<inequality_row<Real>> rows;
  for (auto& j : jobs) rows.push_back(j.get());
  for (const auto& r : rows)
    if (!(r.margin > 0))
      throw theorem_violation("check_inequality: non-positive margin at n = " +
                              std::to_string(r.n));
  return rows;
}

template <class Real = double>
std::vector<inequality_row<Real>> check_inequality(int n_max) {
  return check_inequality<Real>(3, n_max);
}

}  // namespace rbeta
