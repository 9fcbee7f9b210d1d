#pragma once

// Greedy and lazy generalized Luroth maps on the switch region [a, b].
//
// The greedy map L1 is the first return of x after choosing T1 at x:
// branch i (1 <= i <= n-1) is [c_i, c_{i+1}) with
//   L1(x) = beta^(n-i+1) x - beta^(n-i),  return time n-i+1.
// The lazy map L0 is its reflection under x -> 1/(beta-1) - x: branch i is
// (d_i, d_{i+1}], d_i = 1/(beta-1) - c_{n-i+1}, with return time i+1 and
//   L0(x) = beta^t x - (beta^(t-2) + ... + beta + 1),  t = i+1.
// Both maps send every branch affinely onto [a, b], so the induced map is
// the skew product I(w, x) = (sigma w, L_{w_1}(x)).

#include "rbeta/algebra.hpp"
#include "rbeta/error.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace rbeta {

enum class gls_side { greedy, lazy };

inline const char* to_string(gls_side s) { return s == gls_side::greedy ? "greedy" : "lazy"; }

template <class Real = double>
struct gls_image {
  Real x{};
  int return_time = 0;
};

template <class Real = double>
struct gls_partition {
  gls_side side = gls_side::greedy;
  int n = 0;
  Real a{}, b{}, domain_max{};
  std::vector<Real> breakpoints;   // n entries, breakpoints[0] = a, back() = b
  std::vector<Real> slopes;        // n-1 branch slopes
  std::vector<Real> offsets;       // branch map is slope * x - offset
  std::vector<int> return_times;   // n-1 entries in {2, ..., n}

  std::size_t branch_count() const { return slopes.size(); }

  Real branch_length(std::size_t i) const { return breakpoints[i + 1] - breakpoints[i]; }

  /// Index of the branch containing x: [c_i, c_{i+1}) for greedy,
  /// (d_i, d_{i+1}] for lazy.
  std::size_t branch_of(const Real& x) const {
    const std::size_t m = branch_count();
    if (side == gls_side::greedy) {
      for (std::size_t i = 0; i + 1 < m; ++i)
        if (x < breakpoints[i + 1]) return i;
      return m - 1;
    }
    for (std::size_t i = 0; i < m; ++i)
      if (x <= breakpoints[i + 1]) return i;
    return m - 1;
  }

  /// Branch with return time t.
  std::size_t branch_with_return_time(int t) const {
    if (t < 2 || t > n) throw domain_error("return time must lie in {2, ..., n}");
    return side == gls_side::greedy ? static_cast<std::size_t>(n - t)
                                    : static_cast<std::size_t>(t - 2);
  }

  Real apply_branch(std::size_t i, const Real& x) const { return slopes[i] * x - offsets[i]; }

  Real invert_branch(std::size_t i, const Real& y) const { return (y + offsets[i]) / slopes[i]; }
};

namespace detail {

template <class Real>
void check_monotone(const std::vector<Real>& pts, const char* what) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    if (!(pts[i] < pts[i + 1]))
      throw invariant_violation(std::string(what) + ": breakpoints not strictly increasing at " +
                                std::to_string(i));
}

}  // namespace detail

template <class Real>
gls_partition<Real> greedy_breakpoints(const algebraic_beta<Real>& ctx) {
  const int n = ctx.n;
  const Real& beta = ctx.beta;
  gls_partition<Real> part;
  part.side = gls_side::greedy;
  part.n = n;
  part.a = ctx.a;
  part.b = ctx.b;
  part.domain_max = ctx.domain_max;
  part.breakpoints.resize(n);
  part.breakpoints[0] = ctx.a;
  // c_i = beta^{i-1} a - beta^{i-2} + 1/beta, evaluated as (a + beta^{n-i}) / beta^{n-i+1}
  // to avoid cancellation for large n.
  for (int i = 2; i <= n - 1; ++i)
    part.breakpoints[i - 1] = (ctx.a + ipow(beta, n - i)) / ipow(beta, n - i + 1);
  part.breakpoints[n - 1] = ctx.b;
  for (int i = 1; i <= n - 1; ++i) {
    part.slopes.push_back(ipow(beta, n - i + 1));
    part.offsets.push_back(ipow(beta, n - i));
    part.return_times.push_back(n - i + 1);
  }
  detail::check_monotone(part.breakpoints, "greedy_breakpoints");
  return part;
}

template <class Real>
gls_partition<Real> lazy_breakpoints(const algebraic_beta<Real>& ctx) {
  const int n = ctx.n;
  const Real& beta = ctx.beta;
  auto greedy = greedy_breakpoints(ctx);
  gls_partition<Real> part;
  part.side = gls_side::lazy;
  part.n = n;
  part.a = ctx.a;
  part.b = ctx.b;
  part.domain_max = ctx.domain_max;
  part.breakpoints.resize(n);
  part.breakpoints[0] = ctx.a;
  for (int i = 2; i <= n - 1; ++i)
    part.breakpoints[i - 1] = ctx.domain_max - greedy.breakpoints[n - i];
  part.breakpoints[n - 1] = ctx.b;
  for (int i = 1; i <= n - 1; ++i) {
    const int t = i + 1;
    Real offset{0};
    for (int j = 0; j <= t - 2; ++j) offset += ipow(beta, j);
    part.slopes.push_back(ipow(beta, t));
    part.offsets.push_back(offset);
    part.return_times.push_back(t);
  }
  detail::check_monotone(part.breakpoints, "lazy_breakpoints");
  return part;
}

template <class Real>
gls_partition<Real> gls_for_coin(int coin, const algebraic_beta<Real>& ctx) {
  return coin == 1 ? greedy_breakpoints(ctx) : lazy_breakpoints(ctx);
}

/// L1 on [a, b).
template <class Real>
gls_image<Real> apply_greedy(const Real& x, const gls_partition<Real>& part) {
  if (part.side != gls_side::greedy) throw precondition_error("apply_greedy: lazy partition given");
  if (!(part.a <= x && x < part.b)) throw precondition_error("apply_greedy: x is not in [a, b)");
  auto i = part.branch_of(x);
  return {part.apply_branch(i, x), part.return_times[i]};
}

/// L0 on (a, b].
template <class Real>
gls_image<Real> apply_lazy(const Real& x, const gls_partition<Real>& part) {
  if (part.side != gls_side::lazy) throw precondition_error("apply_lazy: greedy partition given");
  if (!(part.a < x && x <= part.b)) throw precondition_error("apply_lazy: x is not in (a, b]");
  auto i = part.branch_of(x);
  return {part.apply_branch(i, x), part.return_times[i]};
}

/// Return-time law pi_t = beta^{-t} of normalized Lebesgue measure on [a, b].
template <class Real = double>
struct return_time_vector {
  int n = 0;
  std::vector<Real> pi;  // indexed by t; pi[0] = pi[1] = 0

  const Real& operator[](int t) const { return pi.at(static_cast<std::size_t>(t)); }

  Real expected_return_time() const {
    Real e{0};
    for (int t = 2; t <= n; ++t) e += Real(t) * pi[t];
    return e;
  }

  Real sum() const {
    Real s{0};
    for (int t = 2; t <= n; ++t) s += pi[t];
    return s;
  }
};

template <class Real = double>
return_time_vector<Real> make_return_time_vector(int n, std::vector<Real> pi_by_t) {
  if (pi_by_t.size() != static_cast<std::size_t>(n + 1))
    throw domain_error("return-time vector must be indexed 0..n");
  return {n, std::move(pi_by_t)};
}

/// pi_t as the greedy branch length over b - a.
template <class Real>
return_time_vector<Real> return_time_vector_of(const algebraic_beta<Real>& ctx) {
  auto part = greedy_breakpoints(ctx);
  std::vector<Real> pi(ctx.n + 1, Real{0});
  for (std::size_t i = 0; i < part.branch_count(); ++i)
    pi[part.return_times[i]] = part.branch_length(i) / (ctx.b - ctx.a);
  return {ctx.n, std::move(pi)};
}

/// The uniform law on {2, ..., n}.
template <class Real = double>
return_time_vector<Real> uniform_return_time_vector(int n) {
  std::vector<Real> pi(n + 1, Real{0});
  for (int t = 2; t <= n; ++t) pi[t] = Real{1} / Real(n - 1);
  return {n, std::move(pi)};
}

/// Branch lengths p_1, ..., p_{n-1} of the greedy partition (index 0 = p_1).
/// p_i = beta^i a - beta^(i-1) a - (beta^(i-1) - beta^(i-2)) for i <= n-2;
/// p_{n-1} is the last branch length b - c_{n-1}.
template <class Real>
std::vector<Real> branch_length_coefficients(const algebraic_beta<Real>& ctx) {
  const Real& beta = ctx.beta;
  std::vector<Real> p;
  for (int i = 1; i <= ctx.n - 2; ++i)
    p.push_back(ipow(beta, i) * ctx.a - ipow(beta, i - 1) * ctx.a -
                (ipow(beta, i - 1) - ipow(beta, i - 2)));
  const Real c_last = ipow(beta, ctx.n - 2) * ctx.a - ipow(beta, ctx.n - 3) + Real{1} / beta;
  p.push_back(ctx.b - c_last);
  return p;
}

/// The closed form b - beta^(n-2) a - beta^(n-3) a + 1/beta that is sometimes
/// quoted for p_{n-1}. It is negative already at n = 3, which is why
/// branch_length_coefficients uses b - c_{n-1} instead.
template <class Real>
Real printed_last_branch_coefficient(const algebraic_beta<Real>& ctx) {
  return ctx.b - ipow(ctx.beta, ctx.n - 2) * ctx.a - ipow(ctx.beta, ctx.n - 3) * ctx.a +
         Real{1} / ctx.beta;
}

}  // namespace rbeta
