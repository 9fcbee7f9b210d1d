#pragma once

// Algebraic bases beta_n and Perron values lambda_n.
//
// beta_n is the root in (1, 2) of  x^n = x^(n-2) + ... + x + 1,
// lambda_n is the root in (1, 2) of x^n = 2 (x^(n-2) + ... + x + 1).
// Both polynomials are negative at 1 and positive at 2 and have a single
// sign change on that interval, so bisection on [1, 2] followed by a few
// Newton steps yields the largest real root.

#include "rbeta/error.hpp"
#include "rbeta/real.hpp"

#include <span>
#include <string>
#include <vector>

namespace rbeta {

template <class Real = double>
struct algebraic_beta {
  int n = 0;
  Real beta{};
  Real a{};           // 1 / (beta^2 - 1)
  Real b{};           // beta * a
  Real domain_max{};  // 1 / (beta - 1)
};

template <class Real = double>
struct perron_value {
  int n = 0;
  Real lambda{};
};

template <class Real = double>
struct word_value {
  Real value{};
  Real tail_bound{};  // sup over infinite extensions of the remaining sum
};

namespace detail {

inline void require_n(int n) {
  if (n < 3) throw domain_error("n must be >= 3, got " + std::to_string(n));
}

// x^n - k * (x^(n-2) + ... + 1) by Horner, with derivative.
template <class Real>
void defining_poly(int n, const Real& k, const Real& x, Real& value, Real& slope) {
  Real p{1};
  Real dp{0};
  for (int i = n - 1; i >= 0; --i) {
    dp = dp * x + p;
    p = p * x - (i <= n - 2 ? k : Real{0});
  }
  value = p;
  slope = dp;
}

template <class Real>
Real defining_poly(int n, const Real& k, const Real& x) {
  Real v, d;
  defining_poly(n, k, x, v, d);
  return v;
}

template <class Real>
Real largest_root(int n, const Real& k) {
  using std::abs;
  Real lo{1};
  Real hi{2};
  const Real tol = 4 * epsilon<Real>();
  for (int it = 0; it < 4096 && hi - lo > tol * hi; ++it) {
    Real mid = (lo + hi) / 2;
    if (defining_poly(n, k, mid) > 0)
      hi = mid;
    else
      lo = mid;
  }
  Real x = (lo + hi) / 2;
  // Newton polish; keep a step only if it stays in the bracket and helps.
  for (int it = 0; it < 4; ++it) {
    Real v, d;
    defining_poly(n, k, x, v, d);
    if (d == 0) break;
    Real next = x - v / d;
    if (next < lo || next > hi) break;
    if (abs(defining_poly(n, k, next)) >= abs(v)) break;
    x = next;
  }
  return x;
}

}  // namespace detail

/// |x^n - k * sum_{i<=n-2} x^i| / x^n, the relative residual used by the
/// invariants (k = 1 for beta, k = 2 for lambda).
template <class Real>
Real relative_residual(int n, const Real& k, const Real& x) {
  using std::abs;
  return abs(detail::defining_poly(n, k, x)) / ipow(x, n);
}

template <class Real = double>
algebraic_beta<Real> solve_beta(int n) {
  detail::require_n(n);
  algebraic_beta<Real> ctx;
  ctx.n = n;
  ctx.beta = detail::largest_root(n, Real{1});
  ctx.a = Real{1} / (ctx.beta * ctx.beta - 1);
  ctx.b = ctx.beta * ctx.a;
  ctx.domain_max = Real{1} / (ctx.beta - 1);
  return ctx;
}

template <class Real = double>
perron_value<Real> solve_lambda(int n) {
  detail::require_n(n);
  return {n, detail::largest_root(n, Real{2})};
}

/// Sum_{t=2}^{n} beta^{-t}; equals 1 exactly for beta = beta_n.
template <class Real>
Real return_probability_sum(const algebraic_beta<Real>& ctx) {
  Real s{0};
  Real inv = Real{1} / ctx.beta;
  Real w = inv * inv;
  for (int t = 2; t <= ctx.n; ++t, w *= inv) s += w;
  return s;
}

/// Value of the finite digit word in base beta, plus the bound
/// beta^{-m}/(beta-1) on any infinite continuation.
template <class Real>
word_value<Real> eval_word(std::span<const int> word, const Real& beta) {
  if (!(beta > 1 && beta < 2)) throw domain_error("beta must lie in (1, 2)");
  // Horner from the tail keeps the rounding error at O(eps).
  Real v{0};
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (*it != 0 && *it != 1) throw domain_error("digit must be 0 or 1");
    v = (v + Real(*it)) / beta;
  }
  Real tail = ipow(beta, -static_cast<int>(word.size())) / (beta - 1);
  return {v, tail};
}

template <class Real>
word_value<Real> eval_word(const std::vector<int>& word, const Real& beta) {
  return eval_word(std::span<const int>(word), beta);
}

}  // namespace rbeta
